#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "sarsim/grid.hpp"
#include "sarsim/world.hpp"

namespace sar {

// Sensor model: perception radius r_p and noise level eta in [0,1].
// eta is the residual uncertainty ratio when scanning the robot's own cell,
// so smaller eta means a stronger sensor. A cell is inside the perception
// field iff its Euclidean center distance is strictly below r_p.
struct SensorSpec {
    double r_p = 4.0;
    double eta = 0.3;
};

struct RobotState {
    int id = -1;
    Cell pos;
    SensorSpec sensor;
};

// Offsets (dx,dy) with sqrt(dx^2+dy^2) < r_p, row-major order. Cached per radius.
const std::vector<std::pair<int, int>>& field_offsets(double r_p);

// In-grid cells of the robot's perception field, row-major order.
std::vector<Cell> perception_field(const RobotState& robot, const GridEnvironment& env);

// Joint uncertainty ratio sigma for one cell: product over robots of
// 1 - (1 - eta_i) * exp(-r_i), for robots whose field contains the cell
// (factor 1 otherwise). Always in (0, 1]. Robots are composed in id order
// so the result is bit-identical regardless of argument order.
double uncertainty_ratio(const Cell& cell, const std::vector<RobotState>& robots);

// Scan certainty per cell, c in [0,1]; z = 1 - c is the uncertainty carried
// by the update z' = sigma * z. Entries never decrease over time.
class ScanCertaintyMap {
public:
    ScanCertaintyMap() = default;
    ScanCertaintyMap(int width, int height, double initial = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }

    double at(const Cell& c) const {
        return c_[static_cast<std::size_t>(row_major_index(c, width_))];
    }
    double at_index(int idx) const { return c_[static_cast<std::size_t>(idx)]; }
    void set(const Cell& c, double value);

    // One scan tick for the given robots (sorted internally by id).
    void apply_scan(const std::vector<RobotState>& robots);

    double total() const;                 // sum of certainties
    double coverage_pct() const;          // 100 * total / cell_count

    const std::vector<double>& values() const { return c_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> c_;
};

// Pure-function flavor of apply_scan, handy in tests.
ScanCertaintyMap update_scan_certainty(const ScanCertaintyMap& map,
                                       const std::vector<RobotState>& robots);

// Victim evidence for one cell as seen by one robot: strongest in-field
// signal (1 - eta) * exp(-r) over victims located at that cell, else a
// small floor (0 for a fully noisy sensor). Deceased victims still emit.
inline constexpr double kEvidenceFloor = 0.02;

double victim_evidence(const RobotState& robot, const Cell& cell,
                       const std::vector<const Victim*>& victims_in_field);

// What a robot remembers about a victim it has seen.
struct VictimSighting {
    int victim_id = -1;
    Cell pos;           // last observed position
    double health = 0.0; // health at that observation
    int tick = -1;
    bool visited = false; // this robot has been co-located with the victim
};

class LocalVictimMap {
public:
    void observe(int victim_id, const Cell& pos, double health, int tick);
    void mark_visited(int victim_id);
    const VictimSighting* find(int victim_id) const;
    const VictimSighting* sighting_at(const Cell& cell) const; // most critical if several

    // Keep only: the current target, already-visited victims, and victims
    // re-observed this tick. Everything else is forgotten.
    void prune(std::optional<int> current_target, const std::vector<int>& fresh_ids);

    std::vector<VictimSighting> entries() const; // sorted by victim id
    std::size_t size() const { return sightings_.size(); }

private:
    std::unordered_map<int, VictimSighting> sightings_;
};

struct ObservationRecord {
    int robot_id = -1;
    int tick = -1;
    Cell pos;
    double health = 0.0;
};

// Supervisor-side union of everything any robot has reported.
class GlobalVictimMap {
public:
    void record(int victim_id, const ObservationRecord& obs);
    bool contains(int victim_id) const;
    std::optional<Cell> last_position(int victim_id) const;

    // victim ids sorted ascending
    std::vector<int> known_victims() const;
    const std::vector<ObservationRecord>* observations(int victim_id) const;

private:
    struct Entry {
        Cell last_pos;
        int last_tick = -1;
        std::vector<ObservationRecord> records;
    };
    std::unordered_map<int, Entry> entries_;
};

} // namespace sar
