#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sarsim/control.hpp"
#include "sarsim/optimize.hpp"
#include "sarsim/world.hpp"

namespace sar {

struct ObstacleSpec {
    bool random = false;
    double density = 0.0;    // used when random
    std::vector<Cell> cells; // used otherwise
};

struct VictimEntry {
    Cell pos;
    double health = 100.0;
};

struct VictimSpec {
    bool random = false;
    int count = 0; // used when random
    double health_lo = 30.0;
    double health_hi = 100.0;
    std::vector<VictimEntry> list; // used otherwise
};

struct RobotSpec {
    int id = 0;
    Cell start;
    double r_p = 4.0;
    double eta = 0.3;
};

// Axis-aligned block of cells with a preset scan certainty, inclusive bounds.
struct CertaintyRegion {
    int x1 = 1, y1 = 1, x2 = 1, y2 = 1;
    double value = 0.0;
};

struct ScenarioConfig {
    std::string name = "scenario";
    int width = 40;
    int height = 25;
    ObstacleSpec obstacles;
    VictimSpec victims;
    std::vector<RobotSpec> robots;

    HealthParams health;
    double p_stay = 0.6;
    GradeWeights weights;
    int tau_int = 30;
    double w1 = 1.0;
    double w2 = 0.05;

    double initial_certainty = 0.0;
    std::vector<CertaintyRegion> regions;

    ControllerKind controller = ControllerKind::cooperative;
    int steps = 300;
    std::uint64_t seed = 1;
    SearchBudget optimizer;
    int k_paths = 3;

    std::string rules_file; // empty = built-in rule base
    RuleBase rules = RuleBase::standard();

    ControlParams control_params() const;
};

// Parse + validate. Errors carry the offending field path, e.g.
// "params.gamma: must be >= beta * h_crit".
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& json_text, const std::string& name);
void validate_scenario(const ScenarioConfig& config);

// Config echo for run records (round-trips through parse_scenario).
std::string scenario_to_json(const ScenarioConfig& config);

// Concrete world built from the config: obstacles placed (never on robot
// starts or listed victim cells), victims placed on free cells, robots
// checked onto free cells, initial certainty map filled. Random layout
// draws come from streams derived from the master seed, so the world is a
// pure function of the config.
struct WorldSetup {
    GridEnvironment env;
    std::vector<RobotState> robots;
    std::vector<Victim> victims;
    ScanCertaintyMap certainty;
};

WorldSetup materialize(const ScenarioConfig& config);

} // namespace sar
