#include "sarsim/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace sar {

std::string to_string(ControllerKind kind) {
    switch (kind) {
    case ControllerKind::cooperative: return "cooperative";
    case ControllerKind::selfish: return "selfish";
    case ControllerKind::pure_mpc: return "pure_mpc";
    case ControllerKind::acs: return "acs";
    case ControllerKind::exhaustive: return "exhaustive";
    }
    return "unknown";
}

ControllerKind controller_from_name(const std::string& name) {
    if (name == "cooperative") return ControllerKind::cooperative;
    if (name == "selfish") return ControllerKind::selfish;
    if (name == "pure_mpc" || name == "pure-mpc") return ControllerKind::pure_mpc;
    if (name == "acs") return ControllerKind::acs;
    if (name == "exhaustive") return ControllerKind::exhaustive;
    throw ConfigError("unknown controller name: " + name);
}

std::vector<ConflictEvent> detect_conflicts(const std::vector<RobotState>& robots,
                                            const GridEnvironment& env, int tau_int,
                                            int tick) {
    std::vector<ConflictEvent> events;
    const int w = env.width();
    std::vector<char> mask(static_cast<std::size_t>(w) * env.height(), 0);
    for (std::size_t i = 0; i < robots.size(); ++i) {
        const auto field_i = perception_field(robots[i], env);
        for (const Cell& c : field_i) mask[static_cast<std::size_t>(row_major_index(c, w))] = 1;
        for (std::size_t j = i + 1; j < robots.size(); ++j) {
            int overlap = 0;
            for (const Cell& c : perception_field(robots[j], env))
                overlap += mask[static_cast<std::size_t>(row_major_index(c, w))];
            if (overlap > tau_int) {
                int a = robots[i].id, b = robots[j].id;
                if (a > b) std::swap(a, b);
                events.push_back(ConflictEvent{tick, a, b, overlap});
            }
        }
        for (const Cell& c : field_i) mask[static_cast<std::size_t>(row_major_index(c, w))] = 0;
    }
    std::sort(events.begin(), events.end(), [](const ConflictEvent& l, const ConflictEvent& r) {
        return l.robot_a != r.robot_a ? l.robot_a < r.robot_a : l.robot_b < r.robot_b;
    });
    return events;
}

ScanCertaintyMap predict_certainty(const ScanCertaintyMap& map,
                                   const std::vector<RobotState>& robots,
                                   const std::vector<Path>& paths) {
    if (robots.size() != paths.size())
        throw std::invalid_argument("predict_certainty: one path per robot required");
    int horizon = 0;
    for (const Path& p : paths) {
        if (p.cells.empty())
            throw std::invalid_argument("predict_certainty: empty path");
        horizon = std::max(horizon, p.length());
    }
    ScanCertaintyMap out = map;
    std::vector<RobotState> ghosts = robots;
    for (int t = 0; t < horizon; ++t) {
        for (std::size_t i = 0; i < paths.size(); ++i) {
            const auto& cells = paths[i].cells;
            ghosts[i].pos = cells[std::min<std::size_t>(t, cells.size() - 1)];
        }
        out.apply_scan(ghosts);
    }
    return out;
}

double mpc_objective(const std::vector<Path>& plan,
                     const std::vector<RobotState>& robots,
                     const std::vector<PriorityMap>& priorities,
                     const ScanCertaintyMap& global_certainty,
                     const ControlParams& params, int l_max_hint) {
    if (plan.size() != robots.size() || plan.size() != priorities.size())
        throw std::invalid_argument("mpc_objective: plan/robot/priority size mismatch");
    if (plan.empty()) throw std::invalid_argument("mpc_objective: empty plan");

    int l_max = std::max(1, l_max_hint);
    double grade_sum = 0.0;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        if (l_max_hint <= 0) l_max = std::max(l_max, plan[i].length());
        grade_sum += path_grade(plan[i], priorities[i], params.weights);
    }
    const double rho_max = params.rules.priority_max();
    const double g_norm =
        static_cast<double>(plan.size()) * params.weights.c2 * l_max * rho_max;

    const ScanCertaintyMap predicted = predict_certainty(global_certainty, robots, plan);
    const double cells =
        static_cast<double>(predicted.width()) * predicted.height();
    return params.w1 * grade_sum / g_norm + params.w2 * predicted.total() / cells;
}

namespace {

int first_index_of(const Path& p, const Cell& c) {
    for (std::size_t i = 0; i < p.cells.size(); ++i)
        if (p.cells[i] == c) return static_cast<int>(i);
    return -1;
}

} // namespace

bool truncate_repair(std::vector<Path>& plan, const std::vector<Cell>& victim_cells,
                     const std::vector<PriorityMap>& priorities,
                     const GradeWeights& weights) {
    std::size_t guard = 1;
    for (const Path& p : plan) guard += p.cells.size();
    while (guard-- > 0) {
        int vi = -1, ri = -1, rj = -1;
        for (std::size_t v = 0; v < victim_cells.size() && vi < 0; ++v) {
            for (std::size_t i = 0; i < plan.size() && vi < 0; ++i) {
                if (first_index_of(plan[i], victim_cells[v]) < 0) continue;
                for (std::size_t j = i + 1; j < plan.size(); ++j) {
                    if (first_index_of(plan[j], victim_cells[v]) < 0) continue;
                    vi = static_cast<int>(v);
                    ri = static_cast<int>(i);
                    rj = static_cast<int>(j);
                    break;
                }
            }
        }
        if (vi < 0) return true; // no shared victim cell left

        const Cell& v = victim_cells[static_cast<std::size_t>(vi)];
        auto cut_prefix = [&](const Path& p) -> std::optional<Path> {
            const int at = first_index_of(p, v);
            if (at <= 0) return std::nullopt; // cutting at the start empties the path
            Path q;
            q.cells.assign(p.cells.begin(), p.cells.begin() + at);
            return q;
        };
        const std::optional<Path> cut_i = cut_prefix(plan[static_cast<std::size_t>(ri)]);
        const std::optional<Path> cut_j = cut_prefix(plan[static_cast<std::size_t>(rj)]);
        if (!cut_i && !cut_j) return false;

        int pick;
        if (cut_i && cut_j) {
            const double loss_i =
                path_grade(plan[static_cast<std::size_t>(ri)], priorities[static_cast<std::size_t>(ri)], weights) -
                path_grade(*cut_i, priorities[static_cast<std::size_t>(ri)], weights);
            const double loss_j =
                path_grade(plan[static_cast<std::size_t>(rj)], priorities[static_cast<std::size_t>(rj)], weights) -
                path_grade(*cut_j, priorities[static_cast<std::size_t>(rj)], weights);
            pick = loss_i <= loss_j ? ri : rj;
        } else {
            pick = cut_i ? ri : rj;
        }
        plan[static_cast<std::size_t>(pick)] =
            pick == ri ? *cut_i : *cut_j;
    }
    return false;
}

namespace {

std::vector<PriorityMap> build_all_priorities(const WorldView& view, const RuleBase& rules) {
    std::vector<PriorityMap> out;
    const auto& robots = *view.robots;
    out.reserve(robots.size());
    for (std::size_t i = 0; i < robots.size(); ++i) {
        const CognitiveState& cog = (*view.cognition)[i];
        out.push_back(build_priority_map(robots[i], cog.certainty, cog.victims,
                                         (*view.victims_in_field)[i], cog.known,
                                         *view.env, rules));
    }
    return out;
}

std::vector<Path> local_plans(const WorldView& view, const std::vector<PriorityMap>& priorities,
                              const ControlParams& params) {
    std::vector<Path> plans;
    const auto& robots = *view.robots;
    plans.reserve(robots.size());
    for (std::size_t i = 0; i < robots.size(); ++i) {
        const CognitiveState& cog = (*view.cognition)[i];
        plans.push_back(
            plan_local(robots[i], priorities[i], cog.known, *view.env, params.k_paths,
                       params.weights)
                .path);
    }
    return plans;
}

// Detected-victim cells the supervisor must keep exclusive, in victim-id order.
std::vector<Cell> supervised_victim_cells(const GlobalVictimMap& victims) {
    std::vector<Cell> cells;
    for (int id : victims.known_victims()) {
        if (auto pos = victims.last_position(id)) cells.push_back(*pos);
    }
    return cells;
}

// Re-plan the robot that loses less grade so no detected victim cell sits on
// two paths. Forbidden cells accumulate per robot across passes, which makes
// the loop terminate. Unresolvable collisions are left for truncate_repair.
void reroute_repair(std::vector<Path>& plans, const std::vector<Cell>& victim_cells,
                    const WorldView& view, const std::vector<PriorityMap>& priorities,
                    const ControlParams& params) {
    const auto& robots = *view.robots;
    std::vector<std::vector<Cell>> forbidden(plans.size());
    const std::size_t max_passes = victim_cells.size() * plans.size() * plans.size() + 1;
    for (std::size_t pass = 0; pass < max_passes; ++pass) {
        int vi = -1, ri = -1, rj = -1;
        for (std::size_t v = 0; v < victim_cells.size() && vi < 0; ++v)
            for (std::size_t i = 0; i < plans.size() && vi < 0; ++i) {
                if (first_index_of(plans[i], victim_cells[v]) < 0) continue;
                for (std::size_t j = i + 1; j < plans.size(); ++j) {
                    if (first_index_of(plans[j], victim_cells[v]) < 0) continue;
                    vi = static_cast<int>(v);
                    ri = static_cast<int>(i);
                    rj = static_cast<int>(j);
                    break;
                }
            }
        if (vi < 0) return;

        const Cell& v = victim_cells[static_cast<std::size_t>(vi)];
        auto replan = [&](int r) -> std::optional<PlannedPath> {
            const std::size_t idx = static_cast<std::size_t>(r);
            if (robots[idx].pos == v) return std::nullopt; // standing on it, cannot avoid
            std::vector<Cell> avoid = forbidden[idx];
            avoid.push_back(v);
            return plan_local(robots[idx], priorities[idx], (*view.cognition)[idx].known,
                              *view.env, params.k_paths, params.weights, avoid);
        };
        const auto alt_i = replan(ri);
        const auto alt_j = replan(rj);
        int pick;
        const PlannedPath* chosen = nullptr;
        if (alt_i && alt_j) {
            const double loss_i =
                path_grade(plans[static_cast<std::size_t>(ri)], priorities[static_cast<std::size_t>(ri)], params.weights) -
                alt_i->grade;
            const double loss_j =
                path_grade(plans[static_cast<std::size_t>(rj)], priorities[static_cast<std::size_t>(rj)], params.weights) -
                alt_j->grade;
            pick = loss_i <= loss_j ? ri : rj;
            chosen = pick == ri ? &*alt_i : &*alt_j;
        } else if (alt_i || alt_j) {
            pick = alt_i ? ri : rj;
            chosen = alt_i ? &*alt_i : &*alt_j;
        } else {
            return; // both pinned; the truncation stage will handle or penalize
        }
        plans[static_cast<std::size_t>(pick)] = chosen->path;
        forbidden[static_cast<std::size_t>(pick)].push_back(v);
    }
}

struct SupervisorOutcome {
    std::vector<Path> plan;
    int evals = 0;
};

// Shared MPC solve: pattern search over waypoint coordinates, warm started
// from `warm`, with victim-cell exclusivity enforced by repair inside the
// objective and a large penalty when repair fails.
SupervisorOutcome solve_joint_plan(const WorldView& view, std::vector<Path> warm,
                                   const std::vector<PriorityMap>& priorities,
                                   const ControlParams& params, RngStream* restart_rng) {
    const auto& robots = *view.robots;
    const std::vector<Cell> victim_cells = supervised_victim_cells(*view.global_victims);

    std::vector<Cell> starts;
    starts.reserve(robots.size());
    for (const RobotState& r : robots) starts.push_back(r.pos);

    std::vector<int> wpr;
    const DecisionVector warm_x = encode_paths(warm, wpr);

    auto realize = [&](const DecisionVector& x) {
        std::vector<Path> plan =
            project_to_paths(x, wpr, starts, *view.global_known, *view.env);
        const bool feasible =
            truncate_repair(plan, victim_cells, priorities, params.weights);
        return std::make_pair(std::move(plan), feasible);
    };
    // one normalization scale for the whole solve, anchored at the warm start
    int l_max = 1;
    for (const Path& p : realize(warm_x).first) l_max = std::max(l_max, p.length());
    auto objective = [&, l_max](const DecisionVector& x) {
        auto [plan, feasible] = realize(x);
        double j = mpc_objective(plan, robots, priorities, *view.global_certainty, params, l_max);
        if (!feasible) j -= 1e3;
        return j;
    };

    const PatternSearchResult res =
        pattern_search(objective, warm_x, params.budget, restart_rng);

    SupervisorOutcome out;
    out.evals = res.evals;
    auto [plan, feasible] = realize(res.x);
    out.plan = feasible ? std::move(plan) : std::move(warm);
    return out;
}

class SelfishController final : public Controller {
public:
    explicit SelfishController(const ControlParams& params) : params_(params) {}
    ControllerKind kind() const override { return ControllerKind::selfish; }

    Decision decide(const WorldView& view, DecisionRng&) override {
        Decision d;
        d.plans = local_plans(view, build_all_priorities(view, params_.rules), params_);
        return d;
    }

private:
    ControlParams params_;
};

class CooperativeController final : public Controller {
public:
    explicit CooperativeController(const ControlParams& params) : params_(params) {}
    ControllerKind kind() const override { return ControllerKind::cooperative; }

    Decision decide(const WorldView& view, DecisionRng& rng) override {
        Decision d;
        const auto priorities = build_all_priorities(view, params_.rules);
        d.plans = local_plans(view, priorities, params_);
        if (view.conflicts == nullptr || view.conflicts->empty()) return d;

        reroute_repair(d.plans, supervised_victim_cells(*view.global_victims), view,
                       priorities, params_);
        SupervisorOutcome out = solve_joint_plan(view, std::move(d.plans), priorities,
                                                 params_, rng.supervisor_stream);
        d.plans = std::move(out.plan);
        d.supervised = true;
        d.objective_evals = out.evals;
        return d;
    }

private:
    ControlParams params_;
};

class PureMpcController final : public Controller {
public:
    explicit PureMpcController(const ControlParams& params) : params_(params) {}
    ControllerKind kind() const override { return ControllerKind::pure_mpc; }

    Decision decide(const WorldView& view, DecisionRng& rng) override {
        const auto& robots = *view.robots;
        std::vector<Path> warm;
        warm.reserve(robots.size());
        for (std::size_t i = 0; i < robots.size(); ++i)
            warm.push_back(shifted_warm_start(i, robots[i]));

        const auto priorities = build_all_priorities(view, params_.rules);
        SupervisorOutcome out =
            solve_joint_plan(view, std::move(warm), priorities, params_, rng.supervisor_stream);

        Decision d;
        d.plans = std::move(out.plan);
        d.supervised = true;
        d.objective_evals = out.evals;
        previous_ = d.plans;
        return d;
    }

private:
    // Last tick's path minus the executed step; degrades to stay-in-place
    // when it runs out or no longer starts at the robot. The receding horizon
    // is a flat few steps so accepted detours cannot compound tick over tick
    // into an ever longer decision vector.
    Path shifted_warm_start(std::size_t i, const RobotState& robot) const {
        Path stay;
        stay.cells.push_back(robot.pos);
        if (i >= previous_.size()) return stay;
        const auto& cells = previous_[i].cells;
        if (cells.size() < 2) return stay;
        Path shifted;
        shifted.cells.assign(cells.begin() + 1, cells.end());
        if (shifted.cells.front() != robot.pos) return stay;
        const std::size_t horizon = 4;
        if (shifted.cells.size() > horizon + 1) shifted.cells.resize(horizon + 1);
        return shifted;
    }

    ControlParams params_;
    std::vector<Path> previous_;
};

class AcsController final : public Controller {
public:
    explicit AcsController(const ControlParams& params) : params_(params) {}
    ControllerKind kind() const override { return ControllerKind::acs; }

    Decision decide(const WorldView& view, DecisionRng& rng) override {
        Decision d;
        const auto& robots = *view.robots;
        for (std::size_t i = 0; i < robots.size(); ++i) {
            Path p;
            p.cells.push_back(robots[i].pos);
            const auto nbrs = free_neighbors(*view.env, robots[i].pos);
            if (!nbrs.empty()) {
                double best = std::numeric_limits<double>::infinity();
                std::vector<Cell> ties;
                for (const Cell& n : nbrs) {
                    const double c = view.global_certainty->at(n);
                    if (c < best) {
                        best = c;
                        ties.assign(1, n);
                    } else if (c == best) {
                        ties.push_back(n);
                    }
                }
                const Cell next =
                    ties.size() == 1
                        ? ties.front()
                        : ties[static_cast<std::size_t>(
                              (*rng.robot_streams)[i].next_below(static_cast<std::uint64_t>(ties.size())))];
                p.cells.push_back(next);
            }
            d.plans.push_back(std::move(p));
        }
        return d;
    }

private:
    ControlParams params_;
};

class ExhaustiveController final : public Controller {
public:
    explicit ExhaustiveController(const ControlParams& params) : params_(params) {}
    ControllerKind kind() const override { return ControllerKind::exhaustive; }

    Decision decide(const WorldView& view, DecisionRng& rng) override {
        Decision d;
        const auto& robots = *view.robots;
        for (std::size_t i = 0; i < robots.size(); ++i) {
            Path p;
            p.cells.push_back(robots[i].pos);
            const auto nbrs = free_neighbors(*view.env, robots[i].pos);
            if (!nbrs.empty())
                p.cells.push_back(nbrs[static_cast<std::size_t>(
                    (*rng.robot_streams)[i].next_below(static_cast<std::uint64_t>(nbrs.size())))]);
            d.plans.push_back(std::move(p));
        }
        return d;
    }

private:
    ControlParams params_;
};

} // namespace

std::unique_ptr<Controller> make_controller(ControllerKind kind, const ControlParams& params) {
    switch (kind) {
    case ControllerKind::cooperative: return std::make_unique<CooperativeController>(params);
    case ControllerKind::selfish: return std::make_unique<SelfishController>(params);
    case ControllerKind::pure_mpc: return std::make_unique<PureMpcController>(params);
    case ControllerKind::acs: return std::make_unique<AcsController>(params);
    case ControllerKind::exhaustive: return std::make_unique<ExhaustiveController>(params);
    }
    throw std::invalid_argument("make_controller: unknown kind");
}

} // namespace sar
