#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <vector>

namespace sar {

// Grid cell, 1-based coordinates: x in [1, width], y in [1, height].
struct Cell {
    int x = 0;
    int y = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
};

// Row-major linear order: y first, then x. Used everywhere a deterministic
// cell ordering is needed (tie-breaking, serialization).
inline int row_major_index(const Cell& c, int width) {
    return (c.y - 1) * width + (c.x - 1);
}

inline Cell cell_from_index(int idx, int width) {
    return Cell{idx % width + 1, idx / width + 1};
}

inline int chebyshev(const Cell& a, const Cell& b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

inline double euclidean(const Cell& a, const Cell& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

// The 8 Moore neighborhood offsets in row-major order.
inline constexpr int kNeighborOffsets[8][2] = {
    {-1, -1}, {0, -1}, {1, -1},
    {-1, 0},           {1, 0},
    {-1, 1},  {0, 1},  {1, 1},
};

// Static environment truth: grid extent plus the (ground-truth) obstacle set.
class GridEnvironment {
public:
    GridEnvironment() = default;
    GridEnvironment(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }
    int cell_count() const { return width_ * height_; }

    bool in_bounds(const Cell& c) const {
        return c.x >= 1 && c.x <= width_ && c.y >= 1 && c.y <= height_;
    }

    void add_obstacle(const Cell& c);
    bool is_obstacle(const Cell& c) const;
    int obstacle_count() const { return obstacle_count_; }
    std::vector<Cell> obstacles() const;

private:
    int width_ = 0;
    int height_ = 0;
    int obstacle_count_ = 0;
    std::vector<std::uint8_t> mask_;
};

// Obstacles discovered so far by the robot team.
class OccupancyMap {
public:
    OccupancyMap() = default;
    explicit OccupancyMap(const GridEnvironment& env)
        : width_(env.width()), height_(env.height()),
          mask_(static_cast<std::size_t>(env.cell_count()), 0) {}

    bool contains(const Cell& c) const {
        if (c.x < 1 || c.x > width_ || c.y < 1 || c.y > height_) return false;
        return mask_[static_cast<std::size_t>(row_major_index(c, width_))] != 0;
    }
    void add(const Cell& c);
    int size() const { return count_; }
    std::vector<Cell> cells() const;
    int width() const { return width_; }
    int height() const { return height_; }

private:
    int width_ = 0;
    int height_ = 0;
    int count_ = 0;
    std::vector<std::uint8_t> mask_;
};

// 8-connected neighbors that are inside the grid and not true obstacles,
// in row-major order. Throws std::domain_error if cell is outside the grid.
std::vector<Cell> free_neighbors(const GridEnvironment& env, const Cell& cell);

} // namespace sar
