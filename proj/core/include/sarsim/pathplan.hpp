#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "sarsim/fuzzy.hpp"
#include "sarsim/grid.hpp"
#include "sarsim/sensing.hpp"

namespace sar {

struct NoPathError : std::runtime_error {
    explicit NoPathError(const std::string& what) : std::runtime_error(what) {}
};

// A path is the full cell sequence including the start cell; length is the
// cell count. Consecutive cells are distinct and Chebyshev-adjacent and none
// is a known obstacle. Unknown obstacles are traversable by design: plans
// only ever avoid what has been discovered.
struct Path {
    std::vector<Cell> cells;

    int length() const { return static_cast<int>(cells.size()); }
    const Cell& goal() const { return cells.back(); }
    bool valid(const GridEnvironment& env, const OccupancyMap& known) const;
};

// Directed edges (from,to) encoded on row-major indices; used to exclude
// edges during alternative-path search.
using EdgeSet = std::unordered_set<std::uint64_t>;

inline std::uint64_t edge_key(int from_idx, int to_idx, int cell_count) {
    return static_cast<std::uint64_t>(from_idx) * static_cast<std::uint64_t>(cell_count) +
           static_cast<std::uint64_t>(to_idx);
}

// Minimum-step path (unit cost per move, diagonals included), Chebyshev
// heuristic, ties on (f, h, row-major index). Returns an empty optional when
// the goal is unreachable.
std::optional<Path> find_path(const Cell& origin, const Cell& goal,
                              const OccupancyMap& known, const GridEnvironment& env,
                              const std::vector<Cell>& blocked_cells = {},
                              const EdgeSet* blocked_edges = nullptr);

// Same, but throws NoPathError instead of returning an empty optional.
Path astar_shortest(const Cell& origin, const Cell& goal,
                    const OccupancyMap& known, const GridEnvironment& env);

// Up to k distinct loopless paths in non-decreasing length; first one equals
// astar_shortest. Candidate ordering (length, then lexicographic row-major
// cell sequence) makes the result deterministic.
std::vector<Path> yen_k_shortest(const Cell& origin, const Cell& goal, int k,
                                 const OccupancyMap& known, const GridEnvironment& env,
                                 const std::vector<Cell>& blocked_cells = {});

// Discounted priority sum along the path: sum_j lambda^j * rho(cell_j),
// counting from the path's first cell. Cells without a priority entry
// contribute zero.
double exploration_degree(const Path& path, const PriorityMap& priorities, double lambda);

struct GradeWeights {
    double c1 = 2.0;     // per-cell length penalty
    double c2 = 5.0;     // exploration reward
    double lambda = 0.6; // discount along the path
};

double path_grade(const Path& path, const PriorityMap& priorities, const GradeWeights& w);

struct PlannedPath {
    Path path;
    double grade = 0.0;
};

// Best-graded candidate over every non-obstacle cell of the robot's
// perception field, with up to k shortest paths per goal. Ties prefer the
// shorter path, then the row-major-smaller goal. Cells in `forbidden` are
// neither goals nor traversable. Falls back to the stay-in-place path when
// nothing is reachable.
PlannedPath plan_local(const RobotState& robot, const PriorityMap& priorities,
                       const OccupancyMap& known, const GridEnvironment& env,
                       int k, const GradeWeights& weights,
                       const std::vector<Cell>& forbidden = {});

} // namespace sar
