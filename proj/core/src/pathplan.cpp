#include "sarsim/pathplan.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace sar {

bool Path::valid(const GridEnvironment& env, const OccupancyMap& known) const {
    if (cells.empty()) return false;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!env.in_bounds(cells[i]) || known.contains(cells[i])) return false;
        if (i > 0) {
            const int d = chebyshev(cells[i - 1], cells[i]);
            if (d != 1) return false;
        }
    }
    return true;
}

namespace {

// Reusable A* buffers; stamped so clearing is O(touched).
struct SearchSpace {
    int width = 0;
    int size = 0;
    std::uint32_t stamp = 0;
    std::vector<std::uint32_t> seen;
    std::vector<int> g;
    std::vector<int> parent;
    std::vector<std::uint32_t> closed_stamp;
    std::vector<std::uint32_t> blocked_stamp;

    void prepare(const GridEnvironment& env) {
        if (size != env.cell_count() || width != env.width()) {
            width = env.width();
            size = env.cell_count();
            seen.assign(static_cast<std::size_t>(size), 0);
            g.assign(static_cast<std::size_t>(size), 0);
            parent.assign(static_cast<std::size_t>(size), -1);
            closed_stamp.assign(static_cast<std::size_t>(size), 0);
            blocked_stamp.assign(static_cast<std::size_t>(size), 0);
            stamp = 0;
        }
        ++stamp;
    }

    bool visited(int idx) const { return seen[static_cast<std::size_t>(idx)] == stamp; }
    bool closed(int idx) const { return closed_stamp[static_cast<std::size_t>(idx)] == stamp; }
    bool blocked(int idx) const { return blocked_stamp[static_cast<std::size_t>(idx)] == stamp; }
};

struct HeapNode {
    int f;
    int h;
    int idx;
    int g;

    bool operator>(const HeapNode& o) const {
        if (f != o.f) return f > o.f;
        if (h != o.h) return h > o.h;
        return idx > o.idx;
    }
};

thread_local SearchSpace tl_space;

} // namespace

std::optional<Path> find_path(const Cell& origin, const Cell& goal,
                              const OccupancyMap& known, const GridEnvironment& env,
                              const std::vector<Cell>& blocked_cells,
                              const EdgeSet* blocked_edges) {
    if (!env.in_bounds(origin) || !env.in_bounds(goal)) {
        throw std::domain_error("find_path: endpoint outside grid");
    }
    if (known.contains(origin)) {
        throw std::invalid_argument("find_path: origin is a known obstacle");
    }

    auto& ws = tl_space;
    ws.prepare(env);
    const int w = env.width();
    const int n = env.cell_count();
    for (const Cell& b : blocked_cells) {
        if (env.in_bounds(b)) {
            ws.blocked_stamp[static_cast<std::size_t>(row_major_index(b, w))] = ws.stamp;
        }
    }

    const int origin_idx = row_major_index(origin, w);
    const int goal_idx = row_major_index(goal, w);
    if (known.contains(goal) || ws.blocked(goal_idx)) return std::nullopt;
    if (ws.blocked(origin_idx)) return std::nullopt;

    auto heuristic = [&](int idx) {
        return chebyshev(cell_from_index(idx, w), goal);
    };

    static thread_local std::vector<HeapNode> heap;
    heap.clear();
    auto push = [&](HeapNode node) {
        heap.push_back(node);
        std::push_heap(heap.begin(), heap.end(), std::greater<>{});
    };

    ws.seen[static_cast<std::size_t>(origin_idx)] = ws.stamp;
    ws.g[static_cast<std::size_t>(origin_idx)] = 0;
    ws.parent[static_cast<std::size_t>(origin_idx)] = -1;
    push({heuristic(origin_idx), heuristic(origin_idx), origin_idx, 0});

    while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), std::greater<>{});
        const HeapNode node = heap.back();
        heap.pop_back();
        if (ws.closed(node.idx)) continue;
        if (node.g != ws.g[static_cast<std::size_t>(node.idx)]) continue; // stale entry
        ws.closed_stamp[static_cast<std::size_t>(node.idx)] = ws.stamp;

        if (node.idx == goal_idx) {
            Path path;
            for (int at = goal_idx; at != -1; at = ws.parent[static_cast<std::size_t>(at)]) {
                path.cells.push_back(cell_from_index(at, w));
            }
            std::reverse(path.cells.begin(), path.cells.end());
            return path;
        }

        const Cell here = cell_from_index(node.idx, w);
        for (const auto& off : kNeighborOffsets) {
            const Cell next{here.x + off[0], here.y + off[1]};
            if (!env.in_bounds(next)) continue;
            const int next_idx = row_major_index(next, w);
            if (ws.closed(next_idx) || ws.blocked(next_idx)) continue;
            if (known.contains(next)) continue;
            if (blocked_edges &&
                blocked_edges->count(edge_key(node.idx, next_idx, n))) {
                continue;
            }
            const int tentative = node.g + 1;
            if (!ws.visited(next_idx) || tentative < ws.g[static_cast<std::size_t>(next_idx)]) {
                ws.seen[static_cast<std::size_t>(next_idx)] = ws.stamp;
                ws.g[static_cast<std::size_t>(next_idx)] = tentative;
                ws.parent[static_cast<std::size_t>(next_idx)] = node.idx;
                const int h = heuristic(next_idx);
                push({tentative + h, h, next_idx, tentative});
            }
        }
    }
    return std::nullopt;
}

Path astar_shortest(const Cell& origin, const Cell& goal,
                    const OccupancyMap& known, const GridEnvironment& env) {
    auto p = find_path(origin, goal, known, env);
    if (!p) {
        throw NoPathError("no path between requested cells");
    }
    return *p;
}

namespace {

std::vector<int> path_indices(const Path& p, int width) {
    std::vector<int> out;
    out.reserve(p.cells.size());
    for (const Cell& c : p.cells) out.push_back(row_major_index(c, width));
    return out;
}

struct CandidateLess {
    int width;
    bool operator()(const Path& a, const Path& b) const {
        if (a.cells.size() != b.cells.size()) return a.cells.size() < b.cells.size();
        for (std::size_t i = 0; i < a.cells.size(); ++i) {
            const int ia = row_major_index(a.cells[i], width);
            const int ib = row_major_index(b.cells[i], width);
            if (ia != ib) return ia < ib;
        }
        return false;
    }
};

} // namespace

std::vector<Path> yen_k_shortest(const Cell& origin, const Cell& goal, int k,
                                 const OccupancyMap& known, const GridEnvironment& env,
                                 const std::vector<Cell>& blocked_cells) {
    if (k < 1) {
        throw std::invalid_argument("yen_k_shortest: k must be >= 1");
    }
    std::vector<Path> accepted;
    auto first = find_path(origin, goal, known, env, blocked_cells);
    if (!first) return accepted;
    accepted.push_back(std::move(*first));

    const int w = env.width();
    const int n = env.cell_count();
    std::set<Path, CandidateLess> candidates(CandidateLess{w});

    while (static_cast<int>(accepted.size()) < k) {
        const Path& prev = accepted.back();
        for (std::size_t i = 0; i + 1 < prev.cells.size(); ++i) {
            const Cell& spur = prev.cells[i];
            const std::vector<Cell> root(prev.cells.begin(),
                                         prev.cells.begin() + static_cast<long>(i) + 1);

            EdgeSet removed_edges;
            for (const Path& p : accepted) {
                if (p.cells.size() > i &&
                    std::equal(root.begin(), root.end(), p.cells.begin())) {
                    if (p.cells.size() > i + 1) {
                        removed_edges.insert(edge_key(row_major_index(p.cells[i], w),
                                                      row_major_index(p.cells[i + 1], w), n));
                    }
                }
            }
            std::vector<Cell> blocked = blocked_cells;
            for (std::size_t j = 0; j + 1 < root.size(); ++j) blocked.push_back(root[j]);

            auto spur_path = find_path(spur, goal, known, env, blocked, &removed_edges);
            if (!spur_path) continue;

            Path total;
            total.cells.assign(root.begin(), root.end() - 1);
            total.cells.insert(total.cells.end(), spur_path->cells.begin(),
                               spur_path->cells.end());

            bool already = false;
            for (const Path& p : accepted) {
                if (p.cells == total.cells) {
                    already = true;
                    break;
                }
            }
            if (!already) candidates.insert(std::move(total));
        }
        if (candidates.empty()) break;
        accepted.push_back(*candidates.begin());
        candidates.erase(candidates.begin());
    }
    return accepted;
}

double exploration_degree(const Path& path, const PriorityMap& priorities, double lambda) {
    if (lambda < 0.0 || lambda > 1.0) {
        throw std::invalid_argument("exploration_degree: lambda outside [0,1]");
    }
    double eps = 0.0;
    double factor = 1.0;
    for (const Cell& c : path.cells) {
        eps += factor * priorities.value_or_zero(c);
        factor *= lambda;
    }
    return eps;
}

double path_grade(const Path& path, const PriorityMap& priorities, const GradeWeights& w) {
    return -w.c1 * path.length() + w.c2 * exploration_degree(path, priorities, w.lambda);
}

PlannedPath plan_local(const RobotState& robot, const PriorityMap& priorities,
                       const OccupancyMap& known, const GridEnvironment& env,
                       int k, const GradeWeights& weights,
                       const std::vector<Cell>& forbidden) {
    const int w = env.width();
    auto is_forbidden = [&](const Cell& c) {
        for (const Cell& f : forbidden)
            if (f == c) return true;
        return false;
    };

    bool have_best = false;
    PlannedPath best;
    int best_goal_idx = 0;

    for (const Cell& goal : perception_field(robot, env)) {
        if (known.contains(goal) || is_forbidden(goal)) continue;
        for (const Path& path : yen_k_shortest(robot.pos, goal, k, known, env, forbidden)) {
            const double grade = path_grade(path, priorities, weights);
            const int goal_idx = row_major_index(goal, w);
            bool better = false;
            if (!have_best) {
                better = true;
            } else if (grade != best.grade) {
                better = grade > best.grade;
            } else if (path.length() != best.path.length()) {
                better = path.length() < best.path.length();
            } else {
                better = goal_idx < best_goal_idx;
            }
            if (better) {
                best = PlannedPath{path, grade};
                best_goal_idx = goal_idx;
                have_best = true;
            }
        }
    }

    if (!have_best) {
        Path stay;
        stay.cells.push_back(robot.pos);
        return PlannedPath{stay, path_grade(stay, priorities, weights)};
    }
    return best;
}

} // namespace sar
