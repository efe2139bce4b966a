#include "gorga/occupancy.hpp"

#include "gorga/error.hpp"

#include <algorithm>

namespace gorga {

OccupancyField::OccupancyField(Bounds frame, double clearance, double cell_size)
    : origin_x_(frame.x0 - clearance),
      origin_y_(frame.y0 - clearance),
      clearance_(clearance),
      cell_size_(cell_size) {
    if (!(clearance > 0) || !(cell_size > 0)) {
        throw Error(ErrorCode::SchemaViolation, "clearance and cell size must be positive");
    }
    columns_ = static_cast<int>(std::ceil((frame.width() + 2 * clearance) / cell_size));
    rows_ = static_cast<int>(std::ceil((frame.height() + 2 * clearance) / cell_size));
    counts_.assign(static_cast<std::size_t>(columns_) * static_cast<std::size_t>(rows_), 0);
    writers_.resize(counts_.size());
}

std::uint32_t OccupancyField::count(int column, int row) const {
    if (column < 0 || row < 0 || column >= columns_ || row >= rows_) return 0;
    return counts_[index(column, row)];
}

Vec2 OccupancyField::cell_center(int column, int row) const {
    return {origin_x_ + (column + 0.5) * cell_size_, origin_y_ + (row + 0.5) * cell_size_};
}

void OccupancyField::commit(std::int32_t segment_id, Vec2 a, Vec2 b) {
    for_each_cell_near(a, b, clearance_, [&](int c, int r) {
        const auto i = index(c, r);
        ++counts_[i];
        ++total_;
        writers_[i].push_back(segment_id);
    });
}

double OccupancyField::probe_radius() const {
    return cell_size_ * std::sqrt(2.0) / 2.0;
}

bool OccupancyField::blocked(Vec2 a, Vec2 b, std::span<const std::int32_t> exempt) const {
    bool hit = false;
    for_each_cell_near(a, b, probe_radius(), [&](int c, int r) {
        if (hit) return;
        for (const auto writer : writers_[index(c, r)]) {
            if (std::find(exempt.begin(), exempt.end(), writer) == exempt.end()) {
                hit = true;
                return;
            }
        }
    });
    return hit;
}

bool OccupancyField::claims_unwritten_cell(Vec2 a, Vec2 b) const {
    bool fresh = false;
    for_each_cell_near(a, b, clearance_, [&](int c, int r) {
        if (counts_[index(c, r)] == 0) fresh = true;
    });
    return fresh;
}

std::uint64_t OccupancyField::disc_sum(Vec2 center, double radius) const {
    std::uint64_t sum = 0;
    for_each_cell_near(center, center, radius,
                       [&](int c, int r) { sum += counts_[index(c, r)]; });
    return sum;
}

}  // namespace gorga
