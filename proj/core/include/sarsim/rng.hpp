#pragma once

#include <cstdint>
#include <random>

namespace sar {

// Deterministic random stream. Every stochastic actor in a simulation owns
// one of these, derived from the master seed, so that the draw sequence of
// one actor can never perturb another's.
//
// The raw engine is std::mt19937_64 (bit-exact across platforms); the
// int/real helpers below avoid std distributions, whose output is
// implementation-defined.
class RngStream {
public:
    RngStream() : RngStream(0) {}
    explicit RngStream(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64();

    // uniform on [0, 1)
    double next_unit();

    // uniform on {0, 1, ..., n-1}, n >= 1; rejection sampling, unbiased
    std::uint64_t next_below(std::uint64_t n);

    // derive an independent child stream; tag picks the actor
    RngStream child(std::uint64_t tag) const;

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

// SplitMix64 mixing step, used for seed derivation.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

} // namespace sar
