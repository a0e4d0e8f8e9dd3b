#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sarsim/sensing.hpp"

namespace sar {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Trapezoid membership function given by its knee points a <= b <= c <= d.
// a == b (or c == d) is a crisp vertical edge: membership is 1 at the edge.
struct TrapezoidMf {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    double membership(double x) const;
};

struct LinguisticTerm {
    std::string name;
    TrapezoidMf mf;
};

struct LinguisticVariable {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<LinguisticTerm> terms;

    int term_index(const std::string& term_name) const; // -1 if unknown
};

// Rule "IF evidence is E and health is H and certainty is C THEN priority is P",
// conjunction = min, implication = clip, aggregation = max.
struct FuzzyRule {
    int evidence = -1;
    int health = -1;
    int certainty = -1;
    int priority = -1;
};

// Three 3-term inputs, one 5-term output, and a complete 27-rule table.
class RuleBase {
public:
    LinguisticVariable evidence;   // victim evidence, universe [0,1]
    LinguisticVariable health;     // perceived health, universe [0,100]
    LinguisticVariable certainty;  // scan certainty, universe [0,1]
    LinguisticVariable priority;   // output, universe [0,100]
    std::vector<FuzzyRule> rules;

    // Built-in rule base used when a scenario does not name a rules file.
    static const RuleBase& standard();

    // Throws ConfigError unless the rules form a complete 3x3x3 cover with
    // well-ordered membership parameters.
    void validate() const;

    double priority_max() const { return priority.hi; }
};

// Plain-text rule base format:
//   mf <variable> <term> <a> <b> <c> <d>
//   rule <evidence_term>, <health_term>, <certainty_term> -> <priority_term>
// '#' starts a comment. Variables/terms must match the standard names.
RuleBase load_rule_file(const std::string& path);
void save_rule_file(const RuleBase& rb, const std::string& path);

// Mamdani inference: crisp priority for one (evidence, health, certainty)
// triple. Centroid defuzzification over a 1001-point uniform discretization
// of the normalized output universe, scaled back to [lo, hi].
double infer_priority(double evidence, double health, double certainty,
                      const RuleBase& rules);

// Cell priorities over one robot's perception field; known obstacles get no
// entry ("null"), everything else gets the crisp inference output.
class PriorityMap {
public:
    std::optional<double> value(const Cell& c) const;
    double value_or_zero(const Cell& c) const;
    void set(const Cell& c, double rho);
    std::size_t size() const { return rho_.size(); }
    std::vector<std::pair<Cell, double>> entries() const; // row-major order

private:
    std::unordered_map<long long, double> rho_;
};

// Inputs per cell: victim evidence from current in-field signals, perceived
// health from the robot's victim map (100 when no victim is remembered
// there), and the robot's local scan certainty.
PriorityMap build_priority_map(const RobotState& robot,
                               const ScanCertaintyMap& local_certainty,
                               const LocalVictimMap& local_victims,
                               const std::vector<const Victim*>& victims_in_field,
                               const OccupancyMap& known_obstacles,
                               const GridEnvironment& env,
                               const RuleBase& rules);

} // namespace sar
