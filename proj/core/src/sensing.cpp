#include "sarsim/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

namespace sar {

const std::vector<std::pair<int, int>>& field_offsets(double r_p) {
    // per-thread cache: this sits on hot paths, a shared lock would serialize
    // batch workers
    static thread_local std::map<double, std::vector<std::pair<int, int>>> cache;
    auto it = cache.find(r_p);
    if (it != cache.end()) return it->second;

    std::vector<std::pair<int, int>> offsets;
    const int reach = static_cast<int>(std::ceil(r_p));
    for (int dy = -reach; dy <= reach; ++dy) {
        for (int dx = -reach; dx <= reach; ++dx) {
            if (std::sqrt(double(dx) * dx + double(dy) * dy) < r_p) {
                offsets.emplace_back(dx, dy);
            }
        }
    }
    return cache.emplace(r_p, std::move(offsets)).first->second;
}

namespace {

struct FieldFactor {
    int dx;
    int dy;
    double factor; // 1 - (1 - eta) * exp(-distance), constant per sensor
};

const std::vector<FieldFactor>& field_factors(double r_p, double eta) {
    static thread_local std::map<std::pair<double, double>, std::vector<FieldFactor>> cache;
    const auto key = std::make_pair(r_p, eta);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<FieldFactor> factors;
    for (const auto& [dx, dy] : field_offsets(r_p)) {
        const double dist = std::sqrt(double(dx) * dx + double(dy) * dy);
        factors.push_back(FieldFactor{dx, dy, 1.0 - (1.0 - eta) * std::exp(-dist)});
    }
    cache.emplace(key, factors);
    return cache.find(key)->second;
}

} // namespace

std::vector<Cell> perception_field(const RobotState& robot, const GridEnvironment& env) {
    std::vector<Cell> out;
    const auto& offsets = field_offsets(robot.sensor.r_p);
    out.reserve(offsets.size());
    for (const auto& [dx, dy] : offsets) {
        const Cell c{robot.pos.x + dx, robot.pos.y + dy};
        if (env.in_bounds(c)) out.push_back(c);
    }
    return out;
}

namespace {

double single_ratio(const Cell& cell, const RobotState& r) {
    const double dist = euclidean(cell, r.pos);
    if (dist >= r.sensor.r_p) return 1.0;
    return 1.0 - (1.0 - r.sensor.eta) * std::exp(-dist);
}

} // namespace

double uncertainty_ratio(const Cell& cell, const std::vector<RobotState>& robots) {
    std::vector<const RobotState*> sorted;
    sorted.reserve(robots.size());
    for (const auto& r : robots) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const RobotState* a, const RobotState* b) { return a->id < b->id; });
    double sigma = 1.0;
    for (const auto* r : sorted) sigma *= single_ratio(cell, *r);
    return sigma;
}

ScanCertaintyMap::ScanCertaintyMap(int width, int height, double initial)
    : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("scan certainty map: bad extent");
    }
    if (initial < 0.0 || initial > 1.0) {
        throw std::invalid_argument("scan certainty map: initial value outside [0,1]");
    }
    c_.assign(static_cast<std::size_t>(width) * height, initial);
}

void ScanCertaintyMap::set(const Cell& c, double value) {
    if (value < 0.0 || value > 1.0) {
        throw std::invalid_argument("scan certainty: value outside [0,1]");
    }
    c_[static_cast<std::size_t>(row_major_index(c, width_))] = value;
}

void ScanCertaintyMap::apply_scan(const std::vector<RobotState>& robots) {
    // Hot path: the optimizer replays this once per predicted step for every
    // candidate decision vector, so avoid per-call allocation and transcendental
    // math. Per-cell joint ratios are accumulated in robot-id order, which keeps
    // the floating point product reproducible regardless of input order.
    static thread_local std::vector<const RobotState*> sorted;
    static thread_local std::vector<std::uint32_t> stamp;
    static thread_local std::vector<double> sigma;
    static thread_local std::vector<int> touched;
    static thread_local std::uint32_t epoch = 0;

    sorted.clear();
    for (const auto& r : robots) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const RobotState* a, const RobotState* b) { return a->id < b->id; });

    if (stamp.size() < c_.size()) {
        stamp.assign(c_.size(), 0);
        sigma.resize(c_.size());
        epoch = 0;
    }
    if (++epoch == 0) {
        std::fill(stamp.begin(), stamp.end(), 0);
        epoch = 1;
    }
    touched.clear();

    for (const auto* r : sorted) {
        for (const auto& [dx, dy, factor] : field_factors(r->sensor.r_p, r->sensor.eta)) {
            const int x = r->pos.x + dx;
            const int y = r->pos.y + dy;
            if (x < 1 || x > width_ || y < 1 || y > height_) continue;
            const auto idx = static_cast<std::size_t>((y - 1) * width_ + (x - 1));
            if (stamp[idx] != epoch) {
                stamp[idx] = epoch;
                sigma[idx] = factor;
                touched.push_back(static_cast<int>(idx));
            } else {
                sigma[idx] *= factor;
            }
        }
    }
    for (const int idx : touched) {
        const auto u = static_cast<std::size_t>(idx);
        const double z = 1.0 - c_[u];
        c_[u] = 1.0 - sigma[u] * z;
    }
}

double ScanCertaintyMap::total() const {
    double s = 0.0;
    for (const double v : c_) s += v;
    return s;
}

double ScanCertaintyMap::coverage_pct() const {
    return 100.0 * total() / static_cast<double>(c_.size());
}

ScanCertaintyMap update_scan_certainty(const ScanCertaintyMap& map,
                                       const std::vector<RobotState>& robots) {
    ScanCertaintyMap out = map;
    out.apply_scan(robots);
    return out;
}

double victim_evidence(const RobotState& robot, const Cell& cell,
                       const std::vector<const Victim*>& victims_in_field) {
    double best = 0.0;
    bool signal = false;
    for (const auto* v : victims_in_field) {
        if (v->pos != cell) continue;
        const double dist = euclidean(cell, robot.pos);
        if (dist >= robot.sensor.r_p) continue;
        signal = true;
        best = std::max(best, (1.0 - robot.sensor.eta) * std::exp(-dist));
    }
    if (signal) return best;
    return robot.sensor.eta >= 1.0 ? 0.0 : kEvidenceFloor;
}

void LocalVictimMap::observe(int victim_id, const Cell& pos, double health, int tick) {
    auto [it, inserted] = sightings_.try_emplace(victim_id);
    auto& s = it->second;
    s.victim_id = victim_id;
    s.pos = pos;
    s.health = health;
    s.tick = tick;
}

void LocalVictimMap::mark_visited(int victim_id) {
    auto it = sightings_.find(victim_id);
    if (it != sightings_.end()) it->second.visited = true;
}

const VictimSighting* LocalVictimMap::find(int victim_id) const {
    auto it = sightings_.find(victim_id);
    return it == sightings_.end() ? nullptr : &it->second;
}

const VictimSighting* LocalVictimMap::sighting_at(const Cell& cell) const {
    const VictimSighting* best = nullptr;
    for (const auto& [id, s] : sightings_) {
        if (s.pos != cell) continue;
        if (!best || s.health < best->health ||
            (s.health == best->health && s.victim_id < best->victim_id)) {
            best = &s;
        }
    }
    return best;
}

void LocalVictimMap::prune(std::optional<int> current_target,
                           const std::vector<int>& fresh_ids) {
    auto is_fresh = [&](int id) {
        for (const int f : fresh_ids)
            if (f == id) return true;
        return false;
    };
    for (auto it = sightings_.begin(); it != sightings_.end();) {
        const bool keep = it->second.visited ||
                          (current_target && *current_target == it->first) ||
                          is_fresh(it->first);
        if (keep) {
            ++it;
        } else {
            it = sightings_.erase(it);
        }
    }
}

std::vector<VictimSighting> LocalVictimMap::entries() const {
    std::vector<VictimSighting> out;
    out.reserve(sightings_.size());
    for (const auto& [id, s] : sightings_) out.push_back(s);
    std::sort(out.begin(), out.end(),
              [](const VictimSighting& a, const VictimSighting& b) {
                  return a.victim_id < b.victim_id;
              });
    return out;
}

void GlobalVictimMap::record(int victim_id, const ObservationRecord& obs) {
    auto& e = entries_[victim_id];
    for (const auto& r : e.records) {
        if (r.robot_id == obs.robot_id && r.tick == obs.tick) return; // already merged
    }
    e.records.push_back(obs);
    if (obs.tick >= e.last_tick) {
        e.last_tick = obs.tick;
        e.last_pos = obs.pos;
    }
}

bool GlobalVictimMap::contains(int victim_id) const {
    return entries_.count(victim_id) != 0;
}

std::optional<Cell> GlobalVictimMap::last_position(int victim_id) const {
    auto it = entries_.find(victim_id);
    if (it == entries_.end()) return std::nullopt;
    return it->second.last_pos;
}

std::vector<int> GlobalVictimMap::known_victims() const {
    std::vector<int> ids;
    ids.reserve(entries_.size());
    for (const auto& [id, e] : entries_) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

const std::vector<ObservationRecord>* GlobalVictimMap::observations(int victim_id) const {
    auto it = entries_.find(victim_id);
    return it == entries_.end() ? nullptr : &it->second.records;
}

} // namespace sar
