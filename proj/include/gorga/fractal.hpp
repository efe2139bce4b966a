#pragma once

#include "gorga/geometry.hpp"
#include "gorga/turtle.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace gorga {

// Row-major 1-bit image; row 0 is the top of the canvas.
class BinaryRaster {
public:
    BinaryRaster() = default;
    BinaryRaster(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }
    bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
    void set(int x, int y, bool on = true) { bits_[index(x, y)] = on ? 1 : 0; }
    std::size_t popcount() const;
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    friend bool operator==(const BinaryRaster&, const BinaryRaster&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

// Draws every segment as a capsule of its stroke width (never thinner than one
// pixel) on a raster covering the mask's bounding box.
// Throws Error(EmptyInput) for a drawing without segments.
BinaryRaster rasterize(const Drawing& drawing, double pixels_per_unit);
BinaryRaster rasterize(std::span<const Segment> segments, const Bounds& frame,
                       double pixels_per_unit);

struct BoxSample {
    int size = 0;       // box edge r in pixels
    double count = 0;   // boxes holding at least one set pixel
    friend bool operator==(const BoxSample&, const BoxSample&) = default;
};

struct BoxCountEstimate {
    std::vector<BoxSample> samples;  // every scale that was counted
    double dimension = 0.0;
    double stderr_slope = 0.0;
    int fit_min = 0;
    int fit_max = 0;
    std::size_t fit_samples = 0;
};

// Powers of two from 2 up to min(width, height) / 4.
std::vector<int> default_box_sizes(const BinaryRaster& raster);

// N(r) for each usable r (a power of two no larger than the raster). With
// `offsets` the count is averaged over grids shifted by 0 and r/2 on each axis.
// Throws Error(InvalidScales) when none of `box_sizes` is usable.
std::vector<BoxSample> box_count(const BinaryRaster& raster, std::span<const int> box_sizes,
                                 bool offsets = false);

// Least-squares slope of log2 N against log2(1/r) over samples with r >= 2,
// leaving out the `drop_largest` biggest scales.
// Throws Error(InsufficientScales) when fewer than 4 samples remain.
BoxCountEstimate estimate_dimension(std::vector<BoxSample> samples, int drop_largest = 2);

struct AnalysisOptions {
    int min_box = 2;
    int max_box = 0;  // 0: a quarter of the smaller raster side
    bool offsets = false;
    int drop_largest = 2;
};

BoxCountEstimate analyze_raster(const BinaryRaster& raster, const AnalysisOptions& options = {});

// Loads PNG or binary PGM; pixels darker than `threshold` are set.
// Throws Error(UnreadableFile) or Error(BlankImage).
BinaryRaster threshold_image(const std::filesystem::path& path, int threshold);
BoxCountEstimate analyze_image(const std::filesystem::path& path, int threshold,
                               const AnalysisOptions& options = {});

enum class ReferenceKind { Sierpinski, Dragon, Koch, Line, FilledSquare };

std::string_view to_string(ReferenceKind kind);
// Throws Error(UnsupportedKind).
ReferenceKind reference_kind_from_name(std::string_view name);

// `size` must be a power of two >= 256. The dragon raster holds the outline of
// the region the curve fills, which is the part with the fractional dimension.
BinaryRaster reference_fractal(ReferenceKind kind, int depth, int size);

// "D = 1.5348 ± 0.23374"
std::string format_estimate(const BoxCountEstimate& estimate);
std::string loglog_table(const BoxCountEstimate& estimate);
nlohmann::json to_json(const BoxCountEstimate& estimate);

}  // namespace gorga
