#include "sarsim/world.hpp"

#include <stdexcept>

namespace sar {

void step_health(Victim& v, const HealthParams& p) {
    if (!p.valid()) {
        throw std::invalid_argument("step_health: invalid health parameters");
    }
    if (!v.alive) return;

    double dh;
    if (v.health >= p.h_crit && v.health <= 100.0) {
        dh = -p.alpha;
    } else {
        dh = p.beta * v.health - p.gamma;
    }
    v.health = std::max(v.health + dh, 0.0);
    if (v.health == 0.0) {
        v.alive = false;
    }
}

void step_victim_motion(Victim& v, const GridEnvironment& env, double p_stay,
                        RngStream& rng) {
    if (p_stay < 0.0 || p_stay > 1.0) {
        throw std::invalid_argument("step_victim_motion: p_stay outside [0,1]");
    }
    if (!v.alive) return;

    const double u = rng.next_unit();
    if (u < p_stay) return;

    const auto neighbors = free_neighbors(env, v.pos);
    if (neighbors.empty()) return;
    const auto pick = rng.next_below(neighbors.size());
    v.pos = neighbors[static_cast<std::size_t>(pick)];
}

} // namespace sar
