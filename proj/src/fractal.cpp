#include "gorga/fractal.hpp"

#include "gorga/error.hpp"
#include "gorga/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <utility>

#include <fmt/format.h>

namespace gorga {

BinaryRaster::BinaryRaster(int width, int height) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw Error(ErrorCode::EmptyInput, "raster must be non-empty");
    bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

std::size_t BinaryRaster::popcount() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

// ---------------------------------------------------------------------------
// Rasterization

BinaryRaster rasterize(std::span<const Segment> segments, const Bounds& frame,
                       double pixels_per_unit) {
    if (!(pixels_per_unit > 0)) {
        throw Error(ErrorCode::SchemaViolation, "pixels_per_unit must be positive");
    }
    if (segments.empty()) throw Error(ErrorCode::EmptyInput, "drawing has no segments");
    const int width = std::max(1, static_cast<int>(std::ceil(frame.width() * pixels_per_unit - 1e-9)));
    const int height = std::max(1, static_cast<int>(std::ceil(frame.height() * pixels_per_unit - 1e-9)));
    BinaryRaster raster(width, height);

    for (const auto& s : segments) {
        // Pixel space, pixel (i, j) centered at (i + 0.5, j + 0.5).
        const Vec2 a{(s.a.x - frame.x0) * pixels_per_unit, (s.a.y - frame.y0) * pixels_per_unit};
        const Vec2 b{(s.b.x - frame.x0) * pixels_per_unit, (s.b.y - frame.y0) * pixels_per_unit};
        const double radius = std::max(0.5 * s.stroke_width * pixels_per_unit, 0.5);
        const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - radius)));
        const int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + radius)));
        const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - radius)));
        const int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + radius)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                if (point_segment_distance({x + 0.5, y + 0.5}, a, b) <= radius) raster.set(x, y);
            }
        }
    }
    return raster;
}

BinaryRaster rasterize(const Drawing& drawing, double pixels_per_unit) {
    return rasterize(drawing.segments, drawing.mask.bounds(), pixels_per_unit);
}

// ---------------------------------------------------------------------------
// Box counting

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

std::size_t count_boxes(const BinaryRaster& raster, int r, int offset_x, int offset_y) {
    // Shifting the grid left/up by `offset` pixels: box index floor((x + offset) / r).
    const int cols = (raster.width() + offset_x + r - 1) / r;
    const int rows = (raster.height() + offset_y + r - 1) / r;
    std::vector<std::uint8_t> hit(static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows), 0);
    for (int y = 0; y < raster.height(); ++y) {
        const int by = (y + offset_y) / r;
        for (int x = 0; x < raster.width(); ++x) {
            if (raster.at(x, y)) {
                hit[static_cast<std::size_t>(by) * cols + static_cast<std::size_t>((x + offset_x) / r)] = 1;
            }
        }
    }
    return static_cast<std::size_t>(std::count(hit.begin(), hit.end(), std::uint8_t{1}));
}

}  // namespace

std::vector<int> default_box_sizes(const BinaryRaster& raster) {
    std::vector<int> sizes;
    const int limit = std::min(raster.width(), raster.height()) / 4;
    for (int r = 2; r <= limit; r *= 2) sizes.push_back(r);
    return sizes;
}

std::vector<BoxSample> box_count(const BinaryRaster& raster, std::span<const int> box_sizes,
                                 bool offsets) {
    std::set<int> usable;
    const int limit = std::min(raster.width(), raster.height());
    for (int r : box_sizes) {
        if (is_power_of_two(r) && r <= limit) usable.insert(r);
    }
    if (usable.empty()) throw Error(ErrorCode::InvalidScales, "no usable box sizes");

    std::vector<BoxSample> samples;
    for (int r : usable) {
        double n = 0;
        if (offsets && r >= 2) {
            const int h = r / 2;
            n = (static_cast<double>(count_boxes(raster, r, 0, 0)) + count_boxes(raster, r, h, 0) +
                 count_boxes(raster, r, 0, h) + count_boxes(raster, r, h, h)) / 4.0;
        } else {
            n = static_cast<double>(count_boxes(raster, r, 0, 0));
        }
        samples.push_back({r, n});
    }
    return samples;
}

BoxCountEstimate estimate_dimension(std::vector<BoxSample> samples, int drop_largest) {
    std::sort(samples.begin(), samples.end(),
              [](const BoxSample& a, const BoxSample& b) { return a.size < b.size; });
    BoxCountEstimate est;
    est.samples = samples;

    std::vector<BoxSample> fit;
    for (const auto& s : samples) {
        if (s.size >= 2 && s.count > 0) fit.push_back(s);
    }
    const auto drop = static_cast<std::size_t>(std::max(drop_largest, 0));
    fit.resize(fit.size() > drop ? fit.size() - drop : 0);
    if (fit.size() < 4) {
        throw Error(ErrorCode::InsufficientScales,
                    fmt::format("{} usable scales in the fit range, need at least 4", fit.size()));
    }

    // y = log2 N, x = log2(1/r); slope is the dimension.
    const double n = static_cast<double>(fit.size());
    double mean_x = 0;
    double mean_y = 0;
    for (const auto& s : fit) {
        mean_x += -std::log2(static_cast<double>(s.size));
        mean_y += std::log2(s.count);
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0;
    double sxy = 0;
    for (const auto& s : fit) {
        const double dx = -std::log2(static_cast<double>(s.size)) - mean_x;
        sxx += dx * dx;
        sxy += dx * (std::log2(s.count) - mean_y);
    }
    const double slope = sxy / sxx;
    const double intercept = mean_y - slope * mean_x;
    double ssr = 0;
    for (const auto& s : fit) {
        const double resid =
            std::log2(s.count) - (intercept + slope * -std::log2(static_cast<double>(s.size)));
        ssr += resid * resid;
    }
    est.dimension = slope;
    est.stderr_slope = std::sqrt(ssr / (n - 2) / sxx);
    est.fit_min = fit.front().size;
    est.fit_max = fit.back().size;
    est.fit_samples = fit.size();
    return est;
}

BoxCountEstimate analyze_raster(const BinaryRaster& raster, const AnalysisOptions& options) {
    if (raster.popcount() == 0) throw Error(ErrorCode::BlankImage, "raster has no set pixels");
    const int cap = std::min(raster.width(), raster.height()) / 4;
    const int max_box = options.max_box > 0 ? std::min(options.max_box, cap) : cap;
    std::vector<int> sizes;
    for (int r = 1; r <= max_box; r *= 2) {
        if (r >= std::max(options.min_box, 1)) sizes.push_back(r);
    }
    return estimate_dimension(box_count(raster, sizes, options.offsets), options.drop_largest);
}

BinaryRaster threshold_image(const std::filesystem::path& path, int threshold) {
    const GrayImage image = load_image(path);
    BinaryRaster raster(image.width, image.height);
    bool any = false;
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            if (image.pixels[static_cast<std::size_t>(y) * image.width + x] < threshold) {
                raster.set(x, y);
                any = true;
            }
        }
    }
    if (!any) {
        throw Error(ErrorCode::BlankImage,
                    fmt::format("{}: no pixel darker than {}", path.string(), threshold));
    }
    return raster;
}

BoxCountEstimate analyze_image(const std::filesystem::path& path, int threshold,
                               const AnalysisOptions& options) {
    return analyze_raster(threshold_image(path, threshold), options);
}

// ---------------------------------------------------------------------------
// Reference sets

std::string_view to_string(ReferenceKind kind) {
    switch (kind) {
        case ReferenceKind::Sierpinski: return "sierpinski";
        case ReferenceKind::Dragon: return "dragon";
        case ReferenceKind::Koch: return "koch";
        case ReferenceKind::Line: return "line";
        case ReferenceKind::FilledSquare: return "filled_square";
    }
    return "line";
}

ReferenceKind reference_kind_from_name(std::string_view name) {
    if (name == "sierpinski") return ReferenceKind::Sierpinski;
    if (name == "dragon") return ReferenceKind::Dragon;
    if (name == "koch") return ReferenceKind::Koch;
    if (name == "line") return ReferenceKind::Line;
    if (name == "filled_square") return ReferenceKind::FilledSquare;
    throw Error(ErrorCode::UnsupportedKind, fmt::format("unknown reference fractal '{}'", name));
}

namespace {

// Right-angled gasket made of 3^depth unit triangles.
BinaryRaster sierpinski(int depth, int size) {
    BinaryRaster r(size, size);
    int unit = size;
    for (int i = 0; i < depth && unit > 1; ++i) unit /= 2;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const int cx = x / unit;
            const int cy = y / unit;
            if ((cx & cy) == 0 && (x % unit) + (y % unit) < unit) r.set(x, y);
        }
    }
    return r;
}

void draw_polyline(BinaryRaster& r, const std::vector<Vec2>& points) {
    for (std::size_t i = 1; i < points.size(); ++i) {
        const Vec2 a = points[i - 1];
        const Vec2 b = points[i];
        const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - 1)));
        const int x1 = std::min(r.width() - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + 1)));
        const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - 1)));
        const int y1 = std::min(r.height() - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + 1)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                if (point_segment_distance({x + 0.5, y + 0.5}, a, b) <= 0.5) r.set(x, y);
            }
        }
    }
}

BinaryRaster koch(int depth, int size) {
    std::vector<Vec2> pts{{0.0, 0.0}, {1.0, 0.0}};
    for (int d = 0; d < depth; ++d) {
        std::vector<Vec2> next;
        next.reserve(pts.size() * 4);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const Vec2 a = pts[i];
            const Vec2 b = pts[i + 1];
            const Vec2 step = (b - a) * (1.0 / 3.0);
            const Vec2 p1 = a + step;
            const Vec2 p3 = a + step * 2.0;
            // Peak: rotate `step` by +60 degrees around p1.
            const double c = 0.5;
            const double s = std::sqrt(3.0) / 2.0;
            const Vec2 p2 = p1 + Vec2{step.x * c - step.y * s, step.x * s + step.y * c};
            next.insert(next.end(), {a, p1, p2, p3});
        }
        next.push_back(pts.back());
        pts = std::move(next);
    }
    // Baseline near the bottom, peaks pointing up.
    const double scale = size - 1.0;
    const double base = size / 2.0 + scale * std::sqrt(3.0) / 12.0;
    for (auto& p : pts) p = {0.5 + p.x * scale - 0.5, base - p.y * scale};
    BinaryRaster r(size, size);
    draw_polyline(r, pts);
    return r;
}

// Outline of the region filled by the Heighway dragon on the unit lattice:
// the visited lattice edges that border a face reachable from outside.
BinaryRaster dragon(int depth, int size) {
    const long steps = 1L << std::clamp(depth, 0, 24);
    std::vector<std::pair<int, int>> verts;
    verts.reserve(static_cast<std::size_t>(steps) + 1);
    int x = 0;
    int y = 0;
    int dir = 0;  // 0:+x 1:+y 2:-x 3:-y
    static constexpr int dx[4] = {1, 0, -1, 0};
    static constexpr int dy[4] = {0, 1, 0, -1};
    verts.emplace_back(x, y);
    for (long k = 1; k <= steps; ++k) {
        x += dx[dir];
        y += dy[dir];
        verts.emplace_back(x, y);
        if (k == steps) break;
        // Turn after step k: left when the bit above the lowest set bit of k is 0.
        const long low = k & -k;
        dir = (k & (low << 1)) ? (dir + 3) % 4 : (dir + 1) % 4;
    }
    int min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    for (const auto& [vx, vy] : verts) {
        min_x = std::min(min_x, vx);
        max_x = std::max(max_x, vx);
        min_y = std::min(min_y, vy);
        max_y = std::max(max_y, vy);
    }
    // Face grid with a one-face border; face (i, j) spans lattice [i, i+1] x [j, j+1]
    // shifted by (min - 1).
    const int fw = max_x - min_x + 2;
    const int fh = max_y - min_y + 2;
    const auto h_index = [&](int lx, int ly) {  // edge (lx,ly)-(lx+1,ly)
        return static_cast<std::size_t>(ly - min_y) * (fw + 1) + static_cast<std::size_t>(lx - min_x);
    };
    const auto v_index = [&](int lx, int ly) {  // edge (lx,ly)-(lx,ly+1)
        return static_cast<std::size_t>(ly - min_y) * (fw + 1) + static_cast<std::size_t>(lx - min_x);
    };
    std::vector<std::uint8_t> h_edge(static_cast<std::size_t>(fw + 1) * (fh + 1), 0);
    std::vector<std::uint8_t> v_edge(h_edge.size(), 0);
    for (std::size_t i = 1; i < verts.size(); ++i) {
        const auto [ax, ay] = verts[i - 1];
        const auto [bx, by] = verts[i];
        if (ay == by) h_edge[h_index(std::min(ax, bx), ay)] = 1;
        else v_edge[v_index(ax, std::min(ay, by))] = 1;
    }
    // Flood the outside through faces; face (i, j) has lower-left lattice corner
    // (min_x - 1 + i, min_y - 1 + j).
    std::vector<std::uint8_t> outside(static_cast<std::size_t>(fw) * fh, 0);
    const auto face = [&](int i, int j) { return static_cast<std::size_t>(j) * fw + i; };
    const auto h_at = [&](int lx, int ly) {
        if (lx < min_x || lx > max_x || ly < min_y || ly > max_y) return false;
        return h_edge[h_index(lx, ly)] != 0;
    };
    const auto v_at = [&](int lx, int ly) {
        if (lx < min_x || lx > max_x || ly < min_y || ly > max_y) return false;
        return v_edge[v_index(lx, ly)] != 0;
    };
    std::deque<std::pair<int, int>> queue{{0, 0}};
    outside[face(0, 0)] = 1;
    while (!queue.empty()) {
        const auto [i, j] = queue.front();
        queue.pop_front();
        const int lx = min_x - 1 + i;
        const int ly = min_y - 1 + j;
        const auto visit = [&](int ni, int nj, bool wall) {
            if (ni < 0 || nj < 0 || ni >= fw || nj >= fh || wall) return;
            if (outside[face(ni, nj)]) return;
            outside[face(ni, nj)] = 1;
            queue.emplace_back(ni, nj);
        };
        visit(i + 1, j, v_at(lx + 1, ly));
        visit(i - 1, j, v_at(lx, ly));
        visit(i, j + 1, h_at(lx, ly + 1));
        visit(i, j - 1, h_at(lx, ly));
    }
    const auto is_outside = [&](int lx, int ly) {  // face with lower-left corner (lx, ly)
        const int i = lx - (min_x - 1);
        const int j = ly - (min_y - 1);
        if (i < 0 || j < 0 || i >= fw || j >= fh) return true;
        return outside[face(i, j)] != 0;
    };

    // Fit the lattice into the raster with an integer pixel pitch.
    const int span = std::max(max_x - min_x, max_y - min_y);
    const double pitch = std::max(1, (size - 2) / std::max(span, 1));
    const double off_x = (size - pitch * (max_x - min_x)) / 2.0;
    const double off_y = (size - pitch * (max_y - min_y)) / 2.0;
    const auto to_px = [&](int lx, int ly) {
        return Vec2{off_x + pitch * (lx - min_x), off_y + pitch * (ly - min_y)};
    };
    BinaryRaster r(size, size);
    for (int ly = min_y; ly <= max_y; ++ly) {
        for (int lx = min_x; lx <= max_x; ++lx) {
            if (h_at(lx, ly) && (is_outside(lx, ly) || is_outside(lx, ly - 1))) {
                draw_polyline(r, {to_px(lx, ly), to_px(lx + 1, ly)});
            }
            if (v_at(lx, ly) && (is_outside(lx, ly) || is_outside(lx - 1, ly))) {
                draw_polyline(r, {to_px(lx, ly), to_px(lx, ly + 1)});
            }
        }
    }
    return r;
}

}  // namespace

BinaryRaster reference_fractal(ReferenceKind kind, int depth, int size) {
    if (size < 256 || !is_power_of_two(size)) {
        throw Error(ErrorCode::InvalidScales,
                    fmt::format("reference size must be a power of two >= 256, got {}", size));
    }
    switch (kind) {
        case ReferenceKind::Sierpinski: return sierpinski(depth, size);
        case ReferenceKind::Dragon: return dragon(depth, size);
        case ReferenceKind::Koch: return koch(depth, size);
        case ReferenceKind::Line: {
            BinaryRaster r(size, size);
            for (int x = 0; x < size; ++x) r.set(x, size / 2);
            return r;
        }
        case ReferenceKind::FilledSquare: {
            BinaryRaster r(size, size);
            for (int y = 0; y < size; ++y) {
                for (int x = 0; x < size; ++x) r.set(x, y);
            }
            return r;
        }
    }
    throw Error(ErrorCode::UnsupportedKind, "unsupported reference fractal");
}

// ---------------------------------------------------------------------------
// Reporting

std::string format_estimate(const BoxCountEstimate& e) {
    return fmt::format("D = {:.4f} ± {:.5f}", e.dimension, e.stderr_slope);
}

std::string loglog_table(const BoxCountEstimate& e) {
    std::string out = "# r\tN\tlog2(1/r)\tlog2(N)\n";
    for (const auto& s : e.samples) {
        out += fmt::format("{}\t{}\t{:.6f}\t{:.6f}\n", s.size, s.count,
                           -std::log2(static_cast<double>(s.size)), std::log2(s.count));
    }
    return out;
}

nlohmann::json to_json(const BoxCountEstimate& e) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : e.samples) {
        if (s.count == std::floor(s.count)) {
            samples.push_back({s.size, static_cast<long long>(s.count)});
        } else {
            samples.push_back({s.size, s.count});
        }
    }
    return {{"samples", samples},
            {"dimension", e.dimension},
            {"stderr", e.stderr_slope},
            {"fit_range", {e.fit_min, e.fit_max}}};
}

}  // namespace gorga
