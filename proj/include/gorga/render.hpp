#pragma once

#include "gorga/config.hpp"
#include "gorga/fractal.hpp"
#include "gorga/image_io.hpp"
#include "gorga/turtle.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gorga {

// Stroke colors plus the ground they are carved into.
struct Palette {
    std::vector<Color> colors{Color::Black, Color::Red, Color::White};
    std::string background = "#d2b48c";

    // Throws Error(SchemaViolation) on an empty color list or a background
    // that is not "#rrggbb".
    static Palette from(const std::vector<Color>& colors, std::string background = "#d2b48c");
    Color color_for_depth(int branch_depth) const;
};

// SVG 1.1 in canvas units. Consecutive segments that chain end to start and
// share a color become one path; the mask outline sits in its own layer.
std::string render_svg(const Drawing& drawing, const Palette& palette);

// Black strokes on white, one byte per pixel. A drawing without segments
// gives a blank image of the mask's size.
GrayImage raster_image(const Drawing& drawing, double pixels_per_unit);
GrayImage to_gray(const BinaryRaster& raster);
std::vector<std::uint8_t> render_raster(const Drawing& drawing, double pixels_per_unit);

}  // namespace gorga
