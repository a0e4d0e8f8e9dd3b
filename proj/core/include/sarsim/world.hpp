#pragma once

#include <optional>

#include "sarsim/grid.hpp"
#include "sarsim/rng.hpp"

namespace sar {

// Health evolution parameters. A victim above the critical level loses
// alpha per tick; below it the decline accelerates as beta*h - gamma.
// gamma >= beta*h_crit keeps the decline monotone across the boundary.
struct HealthParams {
    double alpha = 0.25;
    double beta = 1.0 / 60.0;
    double gamma = 1.0;
    double h_crit = 30.0;

    bool valid() const {
        return alpha > 0.0 && beta >= 0.0 && gamma >= 0.0 &&
               h_crit > 0.0 && h_crit <= 100.0 && gamma >= beta * h_crit;
    }
};

struct DetectionRecord {
    int robot_id = -1;
    int tick = -1;
    double health = 0.0;
};

struct Victim {
    int id = -1;
    Cell pos;
    double health = 100.0;          // in [0, 100]; 0 means deceased
    bool alive = true;
    std::optional<DetectionRecord> first_detection;
    int visits = 0;

    bool detected() const { return first_detection.has_value(); }
};

// One health step. At h = h_crit the uniform-decay branch applies.
// Result is clamped at 0; alive flag cleared exactly there.
void step_health(Victim& v, const HealthParams& p);

// One motion step: stay with probability p_stay, otherwise uniform over the
// free 8-neighbors (stay if boxed in). Draws from the victim's own stream:
// one unit draw, plus one index draw only when moving.
void step_victim_motion(Victim& v, const GridEnvironment& env, double p_stay,
                        RngStream& rng);

} // namespace sar
