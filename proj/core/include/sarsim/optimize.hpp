#pragma once

#include <functional>
#include <vector>

#include "sarsim/pathplan.hpp"
#include "sarsim/rng.hpp"

namespace sar {

// Flat decision vector: per robot, its waypoint coordinates as
// (x1, y1, x2, y2, ...) in grid units. Segmentation is carried separately.
using DecisionVector = std::vector<double>;

struct SearchBudget {
    int max_evals = 2000;      // total objective evaluations, all restarts
    double initial_mesh = 2.0; // in cells
    double contraction = 0.5;
    double min_mesh = 0.5;
    int restarts = 1;
};

struct PatternSearchResult {
    DecisionVector x;
    double value = 0.0;
    int evals = 0;
};

// Derivative-free maximization by compass search: poll +/- mesh along each
// coordinate in order, accept the first strict improvement, contract the
// mesh after a full unsuccessful poll, stop when the mesh drops below the
// minimum or the evaluation budget runs out. The result never grades below
// the starting point. Additional restarts (perturbed from x0 by up to one
// initial mesh per coordinate) need a stream for the perturbations.
PatternSearchResult pattern_search(const std::function<double(const DecisionVector&)>& objective,
                                   const DecisionVector& x0, const SearchBudget& budget,
                                   RngStream* restart_rng = nullptr);

// Decode a decision vector into one path per robot: round each waypoint to
// the nearest cell (halves away from zero), clip into the grid, drop known
// obstacles and consecutive duplicates, reconnect non-adjacent stops with
// shortest known-free segments, and make sure the path starts at the
// robot's position. A robot whose waypoints all collapse keeps a
// stay-in-place path.
std::vector<Path> project_to_paths(const DecisionVector& x,
                                   const std::vector<int>& waypoints_per_robot,
                                   const std::vector<Cell>& starts,
                                   const OccupancyMap& known,
                                   const GridEnvironment& env);

// Inverse of the projection's framing: paths back to a flat vector.
DecisionVector encode_paths(const std::vector<Path>& paths,
                            std::vector<int>& waypoints_per_robot);

} // namespace sar
