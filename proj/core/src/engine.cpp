#include "sarsim/engine.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace sar {

namespace {

// Actor stream tags; generation tags 1 and 2 live in the scenario module.
constexpr std::uint64_t kRobotTagBase = 0x1000;
constexpr std::uint64_t kVictimTagBase = 0x100000;
constexpr std::uint64_t kSupervisorTag = 0xfff;

} // namespace

Simulation::Simulation(const ScenarioConfig& config)
    : config_(config), supervisor_stream_(mix_seed(config.seed, kSupervisorTag)) {
    validate_scenario(config_);
    WorldSetup setup = materialize(config_);
    env_ = std::move(setup.env);
    robots_ = std::move(setup.robots);
    victims_ = std::move(setup.victims);
    global_certainty_ = setup.certainty;
    global_known_ = OccupancyMap(env_);
    for (std::size_t i = 0; i < robots_.size(); ++i) {
        CognitiveState cog;
        cog.known = OccupancyMap(env_);
        cog.certainty = setup.certainty; // shared prior knowledge of the area
        cognition_.push_back(std::move(cog));
        robot_streams_.emplace_back(mix_seed(config_.seed, kRobotTagBase + i));
    }
    for (std::size_t v = 0; v < victims_.size(); ++v)
        victim_streams_.emplace_back(mix_seed(config_.seed, kVictimTagBase + v));
    colocated_.assign(robots_.size() * victims_.size(), 0);
    controller_ = make_controller(config_.controller, config_.control_params());

    series_.push_back(current_stats()); // row 0: the untouched initial state
}

TickStats Simulation::current_stats() const {
    TickStats s;
    s.tick = tick_;
    s.coverage_pct = global_certainty_.coverage_pct();
    for (const Victim& v : victims_) {
        if (v.detected()) ++s.victims_found;
        if (!v.alive) ++s.victims_deceased;
    }
    return s;
}

void Simulation::sense_and_update_maps() {
    const int now = tick_ + 1;
    victims_in_field_.assign(robots_.size(), {});
    for (std::size_t i = 0; i < robots_.size(); ++i) {
        const RobotState& robot = robots_[i];
        CognitiveState& cog = cognition_[i];

        for (const Cell& cell : perception_field(robot, env_)) {
            if (env_.is_obstacle(cell)) {
                cog.known.add(cell);
                global_known_.add(cell);
            }
        }

        std::vector<int> fresh;
        for (const Victim& v : victims_) {
            if (euclidean(robot.pos, v.pos) >= robot.sensor.r_p) continue;
            fresh.push_back(v.id);
            cog.victims.observe(v.id, v.pos, v.health, now);
            global_victims_.record(v.id, ObservationRecord{robot.id, now, v.pos, v.health});
            const VictimSighting* s = cog.victims.find(v.id);
            if (!(s && s->visited)) victims_in_field_[i].push_back(&v);
        }
        cog.victims.prune(cog.target, fresh);
        cog.certainty.apply_scan({robot});
    }
    global_certainty_.apply_scan(robots_);
}

Decision Simulation::decide(double& decision_ms) {
    tick_conflicts_ = detect_conflicts(robots_, env_, config_.tau_int, tick_ + 1);

    WorldView view;
    view.env = &env_;
    view.robots = &robots_;
    view.cognition = &cognition_;
    view.victims_in_field = &victims_in_field_;
    view.global_certainty = &global_certainty_;
    view.global_victims = &global_victims_;
    view.global_known = &global_known_;
    view.conflicts = &tick_conflicts_;
    view.tick = tick_;

    DecisionRng rng{&robot_streams_, &supervisor_stream_};
    const auto t0 = std::chrono::steady_clock::now();
    Decision d = controller_->decide(view, rng);
    decision_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();

    if (d.plans.size() != robots_.size())
        throw std::logic_error("controller returned wrong plan count");
    for (const ConflictEvent& e : tick_conflicts_) all_conflicts_.push_back(e);
    last_plans_ = d.plans;

    for (std::size_t i = 0; i < robots_.size(); ++i) {
        const VictimSighting* s = cognition_[i].victims.sighting_at(d.plans[i].goal());
        if (s && !s->visited)
            cognition_[i].target = s->victim_id;
        else
            cognition_[i].target.reset();
    }
    return d;
}

void Simulation::move_robots(const Decision& decision) {
    for (std::size_t i = 0; i < robots_.size(); ++i) {
        const auto& cells = decision.plans[i].cells;
        if (cells.empty()) continue;
        const Cell next = cells.size() > 1 ? cells[1] : cells[0];
        if (env_.in_bounds(next) && !env_.is_obstacle(next) &&
            chebyshev(robots_[i].pos, next) <= 1)
            robots_[i].pos = next;
    }
}

void Simulation::advance_victims() {
    for (std::size_t v = 0; v < victims_.size(); ++v) {
        step_victim_motion(victims_[v], env_, config_.p_stay, victim_streams_[v]);
        step_health(victims_[v], config_.health);
    }
}

void Simulation::handle_detections() {
    const int now = tick_ + 1;
    for (std::size_t i = 0; i < robots_.size(); ++i) {
        for (std::size_t j = 0; j < victims_.size(); ++j) {
            char& prev = colocated_[i * victims_.size() + j];
            Victim& v = victims_[j];
            const bool together = robots_[i].pos == v.pos;
            if (together) {
                if (!v.detected())
                    v.first_detection = DetectionRecord{robots_[i].id, now, v.health};
                if (!prev) ++v.visits;
                cognition_[i].victims.observe(v.id, v.pos, v.health, now);
                cognition_[i].victims.mark_visited(v.id);
                global_victims_.record(v.id, ObservationRecord{robots_[i].id, now, v.pos, v.health});
                if (cognition_[i].target == v.id) cognition_[i].target.reset();
            }
            prev = together ? 1 : 0;
        }
    }
}

void Simulation::step() {
    sense_and_update_maps();
    double decision_ms = 0.0;
    const Decision d = decide(decision_ms);
    move_robots(d);
    advance_victims();
    handle_detections();
    ++tick_;

    TickStats row = current_stats();
    row.conflicts = static_cast<int>(tick_conflicts_.size());
    row.decision_ms = decision_ms;
    row.objective_evals = d.objective_evals;
    series_.push_back(row);
}

RunRecord Simulation::finish() {
    RunRecord rec;
    rec.config = config_;
    rec.series = series_;
    rec.conflict_events = all_conflicts_;
    rec.victims.reserve(victims_.size());
    for (const Victim& v : victims_) {
        VictimOutcome o;
        o.victim_id = v.id;
        if (v.first_detection) {
            o.detect_tick = v.first_detection->tick;
            o.health_at_detect = v.first_detection->health;
        }
        o.final_health = v.health;
        o.alive_at_end = v.alive;
        o.visits = v.visits;
        o.final_pos = v.pos;
        rec.victims.push_back(o);
    }
    rec.final_certainty = global_certainty_.values();
    rec.final_known.assign(static_cast<std::size_t>(env_.cell_count()), 0);
    for (const Cell& c : global_known_.cells())
        rec.final_known[static_cast<std::size_t>(row_major_index(c, env_.width()))] = 1;
    return rec;
}

RunRecord run_scenario(const ScenarioConfig& config) {
    Simulation sim(config);
    for (int k = 0; k < config.steps; ++k) sim.step();
    return sim.finish();
}

} // namespace sar
