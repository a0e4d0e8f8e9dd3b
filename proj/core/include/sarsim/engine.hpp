#pragma once

#include <optional>
#include <vector>

#include "sarsim/control.hpp"
#include "sarsim/scenario.hpp"

namespace sar {

struct TickStats {
    int tick = 0;
    double coverage_pct = 0.0;
    int victims_found = 0;
    int victims_deceased = 0;
    int conflicts = 0;
    double decision_ms = 0.0;
    long long objective_evals = 0;
};

struct VictimOutcome {
    int victim_id = 0;
    std::optional<int> detect_tick;
    double health_at_detect = 0.0; // meaningful only when detected
    double final_health = 0.0;
    bool alive_at_end = true;
    int visits = 0;
    Cell final_pos;
};

// Everything a run produces. Identical configs give identical records,
// except for the wall-clock decision_ms fields.
struct RunRecord {
    ScenarioConfig config;
    std::vector<TickStats> series; // steps + 1 rows; row 0 is the initial state
    std::vector<ConflictEvent> conflict_events;
    std::vector<VictimOutcome> victims;
    std::vector<double> final_certainty;  // row-major global map
    std::vector<int> final_known;         // row-major 0/1 merged obstacle map
};

RunRecord run_scenario(const ScenarioConfig& config);

// Live simulation state, exposed so tests can drive single ticks.
class Simulation {
public:
    explicit Simulation(const ScenarioConfig& config);

    void step();                    // one full tick
    int tick() const { return tick_; }

    const GridEnvironment& env() const { return env_; }
    const std::vector<RobotState>& robots() const { return robots_; }
    const std::vector<CognitiveState>& cognition() const { return cognition_; }
    const std::vector<Victim>& victims() const { return victims_; }
    const ScanCertaintyMap& global_certainty() const { return global_certainty_; }
    const GlobalVictimMap& global_victims() const { return global_victims_; }
    const OccupancyMap& global_known() const { return global_known_; }
    const std::vector<Path>& last_plans() const { return last_plans_; }

    TickStats current_stats() const; // metrics of the state as it stands
    RunRecord finish();              // build the record after stepping

private:
    void sense_and_update_maps();
    Decision decide(double& decision_ms);
    void move_robots(const Decision& decision);
    void advance_victims();
    void handle_detections();

    ScenarioConfig config_;
    GridEnvironment env_;
    std::vector<RobotState> robots_;
    std::vector<CognitiveState> cognition_;
    std::vector<Victim> victims_;
    ScanCertaintyMap global_certainty_;
    OccupancyMap global_known_;
    GlobalVictimMap global_victims_;

    std::unique_ptr<Controller> controller_;
    std::vector<RngStream> robot_streams_;
    std::vector<RngStream> victim_streams_;
    RngStream supervisor_stream_;

    std::vector<std::vector<const Victim*>> victims_in_field_;
    std::vector<ConflictEvent> tick_conflicts_;
    std::vector<Path> last_plans_;
    std::vector<char> colocated_; // robot x victim co-location at last tick

    int tick_ = 0;
    std::vector<TickStats> series_;
    std::vector<ConflictEvent> all_conflicts_;
};

} // namespace sar
