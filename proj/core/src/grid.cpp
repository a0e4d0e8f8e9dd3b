#include "sarsim/grid.hpp"

#include <stdexcept>

namespace sar {

GridEnvironment::GridEnvironment(int width, int height)
    : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("grid extent must be positive");
    }
    mask_.assign(static_cast<std::size_t>(width) * height, 0);
}

void GridEnvironment::add_obstacle(const Cell& c) {
    if (!in_bounds(c)) {
        throw std::domain_error("obstacle cell outside grid");
    }
    auto& slot = mask_[static_cast<std::size_t>(row_major_index(c, width_))];
    if (!slot) {
        slot = 1;
        ++obstacle_count_;
    }
}

bool GridEnvironment::is_obstacle(const Cell& c) const {
    if (!in_bounds(c)) return false;
    return mask_[static_cast<std::size_t>(row_major_index(c, width_))] != 0;
}

std::vector<Cell> GridEnvironment::obstacles() const {
    std::vector<Cell> out;
    out.reserve(static_cast<std::size_t>(obstacle_count_));
    for (int idx = 0; idx < cell_count(); ++idx) {
        if (mask_[static_cast<std::size_t>(idx)]) out.push_back(cell_from_index(idx, width_));
    }
    return out;
}

void OccupancyMap::add(const Cell& c) {
    if (c.x < 1 || c.x > width_ || c.y < 1 || c.y > height_) {
        throw std::domain_error("occupancy cell outside grid");
    }
    auto& slot = mask_[static_cast<std::size_t>(row_major_index(c, width_))];
    if (!slot) {
        slot = 1;
        ++count_;
    }
}

std::vector<Cell> OccupancyMap::cells() const {
    std::vector<Cell> out;
    out.reserve(static_cast<std::size_t>(count_));
    for (std::size_t idx = 0; idx < mask_.size(); ++idx) {
        if (mask_[idx]) out.push_back(cell_from_index(static_cast<int>(idx), width_));
    }
    return out;
}

std::vector<Cell> free_neighbors(const GridEnvironment& env, const Cell& cell) {
    if (!env.in_bounds(cell)) {
        throw std::domain_error("free_neighbors: cell outside grid");
    }
    std::vector<Cell> out;
    out.reserve(8);
    for (const auto& off : kNeighborOffsets) {
        const Cell n{cell.x + off[0], cell.y + off[1]};
        if (env.in_bounds(n) && !env.is_obstacle(n)) out.push_back(n);
    }
    return out;
}

} // namespace sar
