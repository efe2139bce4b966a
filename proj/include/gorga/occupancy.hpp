#pragma once

#include "gorga/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace gorga {

// Raster record of committed strokes. A stroke marks every cell whose center
// lies within `clearance` of its segment; counters only ever grow. Each cell
// also remembers which segments wrote it, so a query can ignore strokes the
// turtle is in endpoint contact with.
class OccupancyField {
public:
    // Covers `frame` plus a `clearance` margin on every side.
    OccupancyField(Bounds frame, double clearance, double cell_size);
    OccupancyField(Bounds frame, double clearance)
        : OccupancyField(frame, clearance, clearance / 2) {}

    double cell_size() const { return cell_size_; }
    double clearance() const { return clearance_; }
    int columns() const { return columns_; }
    int rows() const { return rows_; }

    std::uint32_t count(int column, int row) const;
    std::uint64_t total() const { return total_; }
    Vec2 cell_center(int column, int row) const;

    void commit(std::int32_t segment_id, Vec2 a, Vec2 b);

    // Cells whose centers lie within this distance of a segment are the cells
    // the segment itself passes through.
    double probe_radius() const;

    // True when some cell a-b passes through was written by a segment not
    // listed in `exempt`. Since writes reach `clearance` around a stroke, an
    // unblocked segment keeps at least clearance - probe_radius() from every
    // non-exempt stroke.
    bool blocked(Vec2 a, Vec2 b, std::span<const std::int32_t> exempt) const;

    // True when at least one cell within `clearance` of a-b is still unwritten.
    bool claims_unwritten_cell(Vec2 a, Vec2 b) const;

    // Summed counters over cells whose centers fall inside the disc.
    std::uint64_t disc_sum(Vec2 center, double radius) const;

    // Visits (column, row) of every in-grid cell whose center is within
    // `radius` of segment a-b.
    template <typename Fn>
    void for_each_cell_near(Vec2 a, Vec2 b, double radius, Fn&& fn) const;

private:
    std::size_t index(int column, int row) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(columns_) +
               static_cast<std::size_t>(column);
    }

    double origin_x_;
    double origin_y_;
    double clearance_;
    double cell_size_;
    int columns_;
    int rows_;
    std::uint64_t total_ = 0;
    std::vector<std::uint32_t> counts_;
    std::vector<std::vector<std::int32_t>> writers_;
};

template <typename Fn>
void OccupancyField::for_each_cell_near(Vec2 a, Vec2 b, double radius, Fn&& fn) const {
    const double lo_x = std::min(a.x, b.x) - radius;
    const double hi_x = std::max(a.x, b.x) + radius;
    const double lo_y = std::min(a.y, b.y) - radius;
    const double hi_y = std::max(a.y, b.y) + radius;
    const int c0 = std::max(0, static_cast<int>(std::floor((lo_x - origin_x_) / cell_size_)));
    const int c1 = std::min(columns_ - 1, static_cast<int>(std::floor((hi_x - origin_x_) / cell_size_)));
    const int r0 = std::max(0, static_cast<int>(std::floor((lo_y - origin_y_) / cell_size_)));
    const int r1 = std::min(rows_ - 1, static_cast<int>(std::floor((hi_y - origin_y_) / cell_size_)));
    for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
            if (point_segment_distance(cell_center(c, r), a, b) <= radius) fn(c, r);
        }
    }
}

}  // namespace gorga
