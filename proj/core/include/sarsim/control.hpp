#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sarsim/fuzzy.hpp"
#include "sarsim/optimize.hpp"
#include "sarsim/pathplan.hpp"
#include "sarsim/sensing.hpp"

namespace sar {

enum class ControllerKind { cooperative, selfish, pure_mpc, acs, exhaustive };

std::string to_string(ControllerKind kind);
// Throws ConfigError for unknown names.
ControllerKind controller_from_name(const std::string& name);

// Everything a robot carries in its own head: obstacles it has discovered,
// its private scan-certainty history, and the victims it remembers.
struct CognitiveState {
    OccupancyMap known;
    ScanCertaintyMap certainty;
    LocalVictimMap victims;
    std::optional<int> target; // victim id currently pursued, if any
};

struct ConflictEvent {
    int tick = 0;
    int robot_a = 0; // robot ids, a < b
    int robot_b = 0;
    int overlap = 0; // shared perception-field cells
};

// All pairs whose perception fields (at current positions, clipped to the
// grid) share strictly more than tau_int cells. Ordered by (a, b).
std::vector<ConflictEvent> detect_conflicts(const std::vector<RobotState>& robots,
                                            const GridEnvironment& env, int tau_int,
                                            int tick);

// Read-only snapshot handed to a controller each tick. Local maps are the
// robots' own; the global maps are the supervisor-side merged ones.
struct WorldView {
    const GridEnvironment* env = nullptr;
    const std::vector<RobotState>* robots = nullptr;
    const std::vector<CognitiveState>* cognition = nullptr;
    // ground-truth victims inside each robot's field, for evidence signals
    const std::vector<std::vector<const Victim*>>* victims_in_field = nullptr;
    const ScanCertaintyMap* global_certainty = nullptr;
    const GlobalVictimMap* global_victims = nullptr;
    const OccupancyMap* global_known = nullptr;
    const std::vector<ConflictEvent>* conflicts = nullptr;
    int tick = 0;
};

struct DecisionRng {
    std::vector<RngStream>* robot_streams = nullptr;
    RngStream* supervisor_stream = nullptr;
};

struct Decision {
    std::vector<Path> plans; // one per robot; the engine executes the first step
    bool supervised = false;
    int objective_evals = 0;
};

struct ControlParams {
    GradeWeights weights;
    int k_paths = 3;
    int tau_int = 30;
    double w1 = 1.0;
    double w2 = 0.05;
    SearchBudget budget;
    RuleBase rules = RuleBase::standard();
};

// Roll the certainty map forward while the robots walk their paths, one
// cell per step for max-path-length steps; a robot that exhausts its path
// keeps scanning from its final cell. The map itself is not modified.
ScanCertaintyMap predict_certainty(const ScanCertaintyMap& map,
                                   const std::vector<RobotState>& robots,
                                   const std::vector<Path>& paths);

// Joint-plan score: normalized total path grade plus weighted mean predicted
// scan certainty at the end of the horizon. Higher is better. The grade
// normalizer scales with the longest path; during an optimizer run it must
// stay fixed across candidates (pass the warm start's longest length as
// l_max_hint), otherwise shrinking the horizon inflates the score.
double mpc_objective(const std::vector<Path>& plan,
                     const std::vector<RobotState>& robots,
                     const std::vector<PriorityMap>& priorities,
                     const ScanCertaintyMap& global_certainty,
                     const ControlParams& params, int l_max_hint = 0);

// Remove shared detected-victim cells from a candidate plan by cutting the
// path of whichever robot loses less grade, repeatedly. Returns false when
// some collision cannot be removed (a victim cell at two robots' starts).
bool truncate_repair(std::vector<Path>& plan, const std::vector<Cell>& victim_cells,
                     const std::vector<PriorityMap>& priorities,
                     const GradeWeights& weights);

class Controller {
public:
    virtual ~Controller() = default;
    virtual ControllerKind kind() const = 0;
    virtual Decision decide(const WorldView& view, DecisionRng& rng) = 0;
};

std::unique_ptr<Controller> make_controller(ControllerKind kind, const ControlParams& params);

} // namespace sar
