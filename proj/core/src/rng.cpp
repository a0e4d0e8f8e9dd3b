#include "sarsim/rng.hpp"

namespace sar {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t s = seed ^ (0xa0761d6478bd642fULL * (tag + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b >> 1);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), gen_(seed) {}

std::uint64_t RngStream::next_u64() {
    return gen_();
}

double RngStream::next_unit() {
    // 53 mantissa bits -> [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t v;
    do {
        v = gen_();
    } while (v > limit);
    return v % n;
}

RngStream RngStream::child(std::uint64_t tag) const {
    return RngStream(mix_seed(seed_, tag));
}

} // namespace sar
