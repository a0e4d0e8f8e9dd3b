#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "sarsim/fuzzy.hpp"
#include "sarsim/rng.hpp"

using namespace sar;
using test_helpers::make_env;
using test_helpers::make_robot;

namespace {

// Independent membership evaluation used only by the oracle below.
double trap(double a, double b, double c, double d, double x) {
    const double up = (b > a) ? (x - a) / (b - a) : (x >= a ? 1.0 : 0.0);
    const double down = (d > c) ? (d - x) / (d - c) : (x <= d ? 1.0 : 0.0);
    return std::max(0.0, std::min({up, 1.0, down}));
}

double term_mu(const LinguisticTerm& t, double x) {
    return trap(t.mf.a, t.mf.b, t.mf.c, t.mf.d, x);
}

// Brute-force Mamdani rollout: fire all 27 rules, clip, max-aggregate, and
// integrate the centroid over a much denser grid than the library uses.
double oracle_infer(double e, double h, double c, const RuleBase& rb, int points) {
    std::array<double, 5> strength{};
    for (const auto& r : rb.rules) {
        const double w =
            std::min({term_mu(rb.evidence.terms[std::size_t(r.evidence)], e),
                      term_mu(rb.health.terms[std::size_t(r.health)], h),
                      term_mu(rb.certainty.terms[std::size_t(r.certainty)], c)});
        strength[std::size_t(r.priority)] = std::max(strength[std::size_t(r.priority)], w);
    }
    const double lo = rb.priority.lo;
    const double span = rb.priority.hi - lo;
    double num = 0.0, den = 0.0;
    for (int j = 0; j <= points; ++j) {
        const double x = lo + span * j / points;
        double mu = 0.0;
        for (std::size_t t = 0; t < 5; ++t) {
            mu = std::max(mu, std::min(strength[t], term_mu(rb.priority.terms[t], x)));
        }
        num += x * mu;
        den += mu;
    }
    return num / den;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("trapezoid membership shape") {
    const TrapezoidMf m{2.0, 4.0, 6.0, 10.0};
    CHECK(m.membership(1.0) == 0.0);
    CHECK(m.membership(2.0) == 0.0);
    CHECK(m.membership(3.0) == doctest::Approx(0.5));
    CHECK(m.membership(4.0) == 1.0);
    CHECK(m.membership(5.0) == 1.0);
    CHECK(m.membership(6.0) == 1.0);
    CHECK(m.membership(8.0) == doctest::Approx(0.5));
    CHECK(m.membership(10.0) == 0.0);
    CHECK(m.membership(11.0) == 0.0);

    // crisp edges sit at full membership
    const TrapezoidMf left{0.0, 0.0, 0.2, 0.45};
    CHECK(left.membership(0.0) == 1.0);
    const TrapezoidMf right{0.55, 0.8, 1.0, 1.0};
    CHECK(right.membership(1.0) == 1.0);
}

TEST_CASE("standard rule base is well-formed") {
    const RuleBase& rb = RuleBase::standard();
    CHECK_NOTHROW(rb.validate());
    CHECK(rb.rules.size() == 27);
    CHECK(rb.evidence.terms.size() == 3);
    CHECK(rb.health.terms.size() == 3);
    CHECK(rb.certainty.terms.size() == 3);
    CHECK(rb.priority.terms.size() == 5);
    CHECK(rb.priority_max() == 100.0);
    CHECK(rb.health.term_index("Critical") == 0);
    CHECK(rb.certainty.term_index("Known") == 2);
    CHECK(rb.evidence.term_index("nope") == -1);
}

TEST_CASE("single-rule prototypes hit the clipped-term centroids") {
    const RuleBase& rb = RuleBase::standard();
    // plateau inputs so exactly one rule fires at weight 1
    const double e_lo = 0.1, e_md = 0.5, e_hi = 0.9;
    const double h_cr = 10.0, h_st = 90.0;
    const double c_un = 0.1, c_pa = 0.5, c_kn = 0.9;

    // outer output terms overhang the universe, so truncation shifts their
    // centroid inward of the 10/90 centers
    CHECK(std::abs(infer_priority(e_lo, h_st, c_kn, rb) - 10.7778) < 0.05);  // VeryLow
    CHECK(std::abs(infer_priority(e_lo, h_st, c_un, rb) - 30.0) < 0.05);     // Low
    CHECK(std::abs(infer_priority(e_md, h_st, c_pa, rb) - 50.0) < 0.05);     // Medium
    CHECK(std::abs(infer_priority(e_hi, h_st, c_kn, rb) - 70.0) < 0.05);     // High
    CHECK(std::abs(infer_priority(e_hi, h_cr, c_un, rb) - 89.2222) < 0.05);  // VeryHigh
}

TEST_CASE("a fully scanned cell never outranks the same cell unscanned") {
    const RuleBase& rb = RuleBase::standard();
    const std::array<double, 3> es = {0.1, 0.5, 0.9};
    const std::array<double, 3> hs = {10.0, 50.0, 90.0};
    for (const double e : es) {
        for (const double h : hs) {
            const double known = infer_priority(e, h, 0.9, rb);
            const double unknown = infer_priority(e, h, 0.1, rb);
            CHECK(known <= unknown + 1e-9);
        }
    }
}

TEST_CASE("inference is defined and bounded over the whole input box") {
    const RuleBase& rb = RuleBase::standard();
    RngStream rng(31);
    for (int i = 0; i < 1000; ++i) {
        const double e = rng.next_unit();
        const double h = 100.0 * rng.next_unit();
        const double c = rng.next_unit();
        double rho = -1.0;
        CHECK_NOTHROW(rho = infer_priority(e, h, c, rb));
        CHECK(rho > 0.0);
        CHECK(rho < 100.0);
    }
    // corners of the box too
    for (const double e : {0.0, 1.0})
        for (const double h : {0.0, 100.0})
            for (const double c : {0.0, 1.0}) CHECK_NOTHROW((void)infer_priority(e, h, c, rb));
}

TEST_CASE("centroid agrees with a dense-grid oracle") {
    const RuleBase& rb = RuleBase::standard();
    RngStream rng(67);
    double worst = 0.0;
    for (int i = 0; i < 120; ++i) {
        const double e = rng.next_unit();
        const double h = 100.0 * rng.next_unit();
        const double c = rng.next_unit();
        const double got = infer_priority(e, h, c, rb);
        const double want = oracle_infer(e, h, c, rb, 100000);
        worst = std::max(worst, std::abs(got - want));
    }
    // tolerance normalized by the output span
    CHECK(worst / 100.0 <= 1e-3);
}

TEST_CASE("priority map stores and orders cell values") {
    PriorityMap pm;
    CHECK(pm.size() == 0);
    CHECK(pm.value(Cell{2, 2}) == std::nullopt);
    CHECK(pm.value_or_zero(Cell{2, 2}) == 0.0);
    pm.set(Cell{3, 1}, 40.0);
    pm.set(Cell{1, 2}, 55.0);
    pm.set(Cell{2, 1}, 20.0);
    pm.set(Cell{2, 1}, 25.0); // overwrite
    CHECK(pm.size() == 3);
    CHECK(pm.value(Cell{2, 1}) == 25.0);
    const auto list = pm.entries();
    REQUIRE(list.size() == 3);
    CHECK(list[0].first == Cell{2, 1});
    CHECK(list[1].first == Cell{3, 1});
    CHECK(list[2].first == Cell{1, 2});
}

TEST_CASE("priority map construction over a perception field") {
    GridEnvironment env(9, 9);
    const auto robot = make_robot(0, 5, 5, 2.0, 0.1);
    ScanCertaintyMap certainty(9, 9, 0.5);
    OccupancyMap known(env);
    known.add(Cell{5, 4});

    Victim v{.id = 0, .pos = {4, 4}, .health = 20.0};
    LocalVictimMap sightings;
    sightings.observe(0, v.pos, v.health, 1);
    const std::vector<const Victim*> in_field = {&v};

    const RuleBase& rb = RuleBase::standard();
    PriorityMap pm = build_priority_map(robot, certainty, sightings, in_field, known, env, rb);

    // 9 field cells minus the known obstacle
    CHECK(pm.size() == 8);
    CHECK(pm.value(Cell{5, 4}) == std::nullopt);

    // the remembered critical victim dominates an empty cell
    const double at_victim = pm.value_or_zero(Cell{4, 4});
    const double empty = pm.value_or_zero(Cell{6, 6});
    CHECK(at_victim > empty);
    CHECK(std::abs(empty - 10.7778) < 0.5); // Low evidence, Stable, Partial

    // once visited the sighting reads as healthy and the cell cools off
    sightings.mark_visited(0);
    PriorityMap after = build_priority_map(robot, certainty, sightings, in_field, known, env, rb);
    CHECK(after.value_or_zero(Cell{4, 4}) < at_victim);
    CHECK(after.value_or_zero(Cell{4, 4}) < 20.0);
}

TEST_CASE("rule file round trip preserves the base") {
    const RuleBase& rb = RuleBase::standard();
    const auto path = temp_file("sarsim_rules_roundtrip.txt");
    save_rule_file(rb, path.string());
    const RuleBase back = load_rule_file(path.string());
    std::filesystem::remove(path);

    REQUIRE(back.rules.size() == rb.rules.size());
    for (std::size_t i = 0; i < rb.rules.size(); ++i) {
        CHECK(back.rules[i].evidence == rb.rules[i].evidence);
        CHECK(back.rules[i].health == rb.rules[i].health);
        CHECK(back.rules[i].certainty == rb.rules[i].certainty);
        CHECK(back.rules[i].priority == rb.rules[i].priority);
    }
    for (const auto* pair : {&rb.evidence, &rb.health, &rb.certainty, &rb.priority}) {
        const auto* mirror = pair == &rb.evidence    ? &back.evidence
                             : pair == &rb.health    ? &back.health
                             : pair == &rb.certainty ? &back.certainty
                                                     : &back.priority;
        REQUIRE(mirror->terms.size() == pair->terms.size());
        for (std::size_t t = 0; t < pair->terms.size(); ++t) {
            CHECK(mirror->terms[t].mf.a == pair->terms[t].mf.a);
            CHECK(mirror->terms[t].mf.b == pair->terms[t].mf.b);
            CHECK(mirror->terms[t].mf.c == pair->terms[t].mf.c);
            CHECK(mirror->terms[t].mf.d == pair->terms[t].mf.d);
        }
    }
    // crisp behavior carries over
    CHECK(infer_priority(0.3, 40.0, 0.7, back) == infer_priority(0.3, 40.0, 0.7, rb));
}

TEST_CASE("rule file parse errors carry line context") {
    auto write_and_load = [](const std::string& body) {
        const auto path = temp_file("sarsim_rules_bad.txt");
        {
            std::ofstream out(path);
            out << body;
        }
        RuleBase rb;
        try {
            rb = load_rule_file(path.string());
            std::filesystem::remove(path);
            return std::string{};
        } catch (const ConfigError& e) {
            std::filesystem::remove(path);
            return std::string(e.what());
        }
    };

    CHECK(write_and_load("flub evidence Low 0 0 1 1\n").find("unknown directive") !=
          std::string::npos);
    CHECK(write_and_load("mf bogus Low 0 0 1 1\n").find("unknown variable") !=
          std::string::npos);
    CHECK(write_and_load("mf evidence Loww 0 0 1 1\n").find("unknown term") !=
          std::string::npos);
    CHECK(write_and_load("mf evidence Low 0 0\n").find("expected 'mf") != std::string::npos);
    CHECK(write_and_load("rule Low, Stable, Known VeryLow\n").find("missing '->'") !=
          std::string::npos);
    CHECK(write_and_load("rule Low, Stable -> VeryLow\n").find("expected 'rule") !=
          std::string::npos);
    CHECK(write_and_load("rule Low, Stable, Wat -> VeryLow\n").find("unknown term name") !=
          std::string::npos);
    // a single valid rule still fails the completeness check
    CHECK(write_and_load("rule Low, Stable, Known -> VeryLow\n").find("complete") !=
          std::string::npos);
    CHECK_THROWS_AS((void)load_rule_file("/nonexistent/sarsim_rules.txt"), ConfigError);
}

TEST_CASE("validate rejects malformed bases") {
    RuleBase rb = RuleBase::standard();
    rb.rules.pop_back();
    CHECK_THROWS_WITH_AS(rb.validate(), doctest::Contains("27 rules"), ConfigError);

    rb = RuleBase::standard();
    rb.rules.back() = rb.rules.front();
    CHECK_THROWS_WITH_AS(rb.validate(), doctest::Contains("duplicate"), ConfigError);

    rb = RuleBase::standard();
    rb.rules.back().priority = 9;
    CHECK_THROWS_WITH_AS(rb.validate(), doctest::Contains("unknown term"), ConfigError);

    rb = RuleBase::standard();
    rb.evidence.terms[1].mf = {0.6, 0.4, 0.5, 0.7};
    CHECK_THROWS_WITH_AS(rb.validate(), doctest::Contains("a <= b <= c <= d"), ConfigError);

    rb = RuleBase::standard();
    rb.health.terms.pop_back();
    CHECK_THROWS_WITH_AS(rb.validate(), doctest::Contains("expected 3 terms"), ConfigError);

    rb = RuleBase::standard();
    rb.certainty.lo = rb.certainty.hi;
    CHECK_THROWS_WITH_AS(rb.validate(), doctest::Contains("empty universe"), ConfigError);
}
