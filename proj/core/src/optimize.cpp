#include "sarsim/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sar {

namespace {

// One compass run from x0 under an evaluation allowance. Updates the shared
// incumbent and returns evals actually spent.
int compass_run(const std::function<double(const DecisionVector&)>& objective,
                const DecisionVector& x0, const SearchBudget& budget, int allowance,
                PatternSearchResult& incumbent) {
    int spent = 0;
    if (allowance <= 0) return 0;

    DecisionVector current = x0;
    double f_current = objective(current);
    ++spent;
    if (f_current > incumbent.value || incumbent.evals == 0) {
        incumbent.x = current;
        incumbent.value = f_current;
    }

    const std::size_t n = current.size();
    if (n == 0) return spent;

    double mesh = budget.initial_mesh;
    DecisionVector trial = current;
    while (mesh >= budget.min_mesh && spent < allowance) {
        bool improved = false;
        for (std::size_t i = 0; i < n && spent < allowance; ++i) {
            for (int sign : {+1, -1}) {
                if (spent >= allowance) break;
                trial = current;
                trial[i] += sign * mesh;
                const double f_trial = objective(trial);
                ++spent;
                if (f_trial > f_current) {
                    current = trial;
                    f_current = f_trial;
                    improved = true;
                    break;
                }
            }
            if (improved) break;
        }
        if (improved) {
            if (f_current > incumbent.value) {
                incumbent.x = current;
                incumbent.value = f_current;
            }
            continue; // poll again from the new point at the same mesh
        }
        if (spent >= allowance) break;
        mesh *= budget.contraction;
    }
    if (f_current > incumbent.value) {
        incumbent.x = current;
        incumbent.value = f_current;
    }
    return spent;
}

} // namespace

PatternSearchResult pattern_search(const std::function<double(const DecisionVector&)>& objective,
                                   const DecisionVector& x0, const SearchBudget& budget,
                                   RngStream* restart_rng) {
    if (budget.initial_mesh <= 0.0 || budget.min_mesh <= 0.0)
        throw std::invalid_argument("pattern_search: mesh sizes must be positive");
    if (!(budget.contraction > 0.0 && budget.contraction < 1.0))
        throw std::invalid_argument("pattern_search: contraction must be in (0, 1)");
    const int restarts = std::max(1, budget.restarts);
    if (restarts > 1 && restart_rng == nullptr)
        throw std::invalid_argument("pattern_search: restarts need a random stream");

    PatternSearchResult result;
    result.x = x0;
    result.value = -std::numeric_limits<double>::infinity();
    result.evals = 0;
    if (budget.max_evals <= 0) return result;

    const int share = budget.max_evals / restarts;
    int leftover = budget.max_evals % restarts;
    for (int r = 0; r < restarts; ++r) {
        int allowance = share + (r < leftover ? 1 : 0);
        if (allowance <= 0) continue;
        DecisionVector start = x0;
        if (r > 0) {
            for (double& v : start)
                v += (2.0 * restart_rng->next_unit() - 1.0) * budget.initial_mesh;
        }
        result.evals += compass_run(objective, start, budget, allowance, result);
    }
    return result;
}

namespace {

int clip_int(long long v, int lo, int hi) {
    if (v < lo) return lo;
    if (v > hi) return hi;
    return static_cast<int>(v);
}

} // namespace

std::vector<Path> project_to_paths(const DecisionVector& x,
                                   const std::vector<int>& waypoints_per_robot,
                                   const std::vector<Cell>& starts,
                                   const OccupancyMap& known,
                                   const GridEnvironment& env) {
    if (starts.size() != waypoints_per_robot.size())
        throw std::invalid_argument("project_to_paths: starts/segment count mismatch");
    std::size_t need = 0;
    for (int w : waypoints_per_robot) {
        if (w < 0) throw std::invalid_argument("project_to_paths: negative waypoint count");
        need += 2 * static_cast<std::size_t>(w);
    }
    if (x.size() != need)
        throw std::invalid_argument("project_to_paths: decision vector size mismatch");

    std::vector<Path> out;
    out.reserve(starts.size());
    std::size_t offset = 0;
    for (std::size_t r = 0; r < starts.size(); ++r) {
        const Cell start = starts[r];
        Path path;
        path.cells.push_back(start);
        for (int w = 0; w < waypoints_per_robot[r]; ++w) {
            Cell wp{clip_int(std::llround(x[offset + 2 * w]), 1, env.width()),
                    clip_int(std::llround(x[offset + 2 * w + 1]), 1, env.height())};
            if (known.contains(wp)) continue; // discovered obstacle, skip the stop
            const Cell& tail = path.cells.back();
            if (wp == tail) continue;
            if (chebyshev(tail, wp) == 1) {
                path.cells.push_back(wp);
                continue;
            }
            auto segment = find_path(tail, wp, known, env);
            if (!segment) continue; // unreachable stop, skip it
            path.cells.insert(path.cells.end(), segment->cells.begin() + 1, segment->cells.end());
        }
        offset += 2 * static_cast<std::size_t>(waypoints_per_robot[r]);
        out.push_back(std::move(path));
    }
    return out;
}

DecisionVector encode_paths(const std::vector<Path>& paths,
                            std::vector<int>& waypoints_per_robot) {
    DecisionVector x;
    waypoints_per_robot.clear();
    waypoints_per_robot.reserve(paths.size());
    for (const Path& p : paths) {
        if (p.cells.empty()) throw std::invalid_argument("encode_paths: empty path");
        // A stay-in-place path keeps one waypoint (the cell itself) so the
        // robot still contributes decision variables.
        std::size_t from = p.cells.size() > 1 ? 1 : 0;
        waypoints_per_robot.push_back(static_cast<int>(p.cells.size() - from));
        for (std::size_t i = from; i < p.cells.size(); ++i) {
            x.push_back(static_cast<double>(p.cells[i].x));
            x.push_back(static_cast<double>(p.cells[i].y));
        }
    }
    return x;
}

} // namespace sar
