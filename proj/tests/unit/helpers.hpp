#pragma once

#include <cmath>
#include <vector>

#include "sarsim/grid.hpp"
#include "sarsim/sensing.hpp"

namespace test_helpers {

inline sar::GridEnvironment make_env(int w, int h, const std::vector<sar::Cell>& obstacles = {}) {
    sar::GridEnvironment env(w, h);
    for (const sar::Cell& c : obstacles) env.add_obstacle(c);
    return env;
}

inline sar::RobotState make_robot(int id, int x, int y, double r_p, double eta) {
    return sar::RobotState{id, sar::Cell{x, y}, sar::SensorSpec{r_p, eta}};
}

// Straight-line recomputation of the per-cell uncertainty ratio, written
// independently of the library so it can serve as an oracle.
inline double oracle_sigma(const sar::Cell& cell, const std::vector<sar::RobotState>& robots) {
    double sigma = 1.0;
    for (const sar::RobotState& r : robots) {
        const double dx = cell.x - r.pos.x;
        const double dy = cell.y - r.pos.y;
        const double dist = std::sqrt(dx * dx + dy * dy);
        if (dist < r.sensor.r_p) {
            sigma *= 1.0 - (1.0 - r.sensor.eta) * std::exp(-dist);
        }
    }
    return sigma;
}

} // namespace test_helpers
