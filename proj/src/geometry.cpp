#include "gorga/geometry.hpp"

#include "gorga/error.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace gorga {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return length(p - a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return length(p - (a + ab * t));
}

namespace {

bool segments_intersect(Vec2 a1, Vec2 a2, Vec2 b1, Vec2 b2) {
    const double d1 = cross(a2 - a1, b1 - a1);
    const double d2 = cross(a2 - a1, b2 - a1);
    const double d3 = cross(b2 - b1, a1 - b1);
    const double d4 = cross(b2 - b1, a2 - b1);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
           ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

double segment_segment_distance(Vec2 a1, Vec2 a2, Vec2 b1, Vec2 b2) {
    if (segments_intersect(a1, a2, b1, b2)) return 0.0;
    return std::min({point_segment_distance(a1, b1, b2), point_segment_distance(a2, b1, b2),
                     point_segment_distance(b1, a1, a2), point_segment_distance(b2, a1, a2)});
}

std::string_view to_string(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Rectangle: return "rectangle";
        case ShapeKind::Triangle: return "triangle";
        case ShapeKind::Ellipse: return "ellipse";
    }
    return "rectangle";
}

ShapeKind shape_kind_from_name(std::string_view name) {
    if (name == "rectangle") return ShapeKind::Rectangle;
    if (name == "triangle") return ShapeKind::Triangle;
    if (name == "ellipse") return ShapeKind::Ellipse;
    throw Error(ErrorCode::UnsupportedKind, fmt::format("unknown shape kind '{}'", name));
}

ShapeMask ShapeMask::rectangle(Bounds b) {
    if (!(b.width() > 0 && b.height() > 0)) {
        throw Error(ErrorCode::SchemaViolation, "rectangle must have positive area");
    }
    return ShapeMask(ShapeKind::Rectangle, b, {});
}

ShapeMask ShapeMask::ellipse(Bounds b) {
    if (!(b.width() > 0 && b.height() > 0)) {
        throw Error(ErrorCode::SchemaViolation, "ellipse must have positive area");
    }
    return ShapeMask(ShapeKind::Ellipse, b, {});
}

ShapeMask ShapeMask::triangle(Vec2 a, Vec2 b, Vec2 c) {
    if (!(std::abs(cross(b - a, c - a)) > 0)) {
        throw Error(ErrorCode::SchemaViolation, "triangle must have positive area");
    }
    Bounds box{std::min({a.x, b.x, c.x}), std::min({a.y, b.y, c.y}), std::max({a.x, b.x, c.x}),
               std::max({a.y, b.y, c.y})};
    return ShapeMask(ShapeKind::Triangle, box, {a, b, c});
}

bool ShapeMask::contains(Vec2 p) const {
    switch (kind_) {
        case ShapeKind::Rectangle:
            return p.x >= bounds_.x0 - kTolerance && p.x <= bounds_.x1 + kTolerance &&
                   p.y >= bounds_.y0 - kTolerance && p.y <= bounds_.y1 + kTolerance;
        case ShapeKind::Ellipse: {
            const double rx = bounds_.width() / 2;
            const double ry = bounds_.height() / 2;
            const double cx = bounds_.x0 + rx;
            const double cy = bounds_.y0 + ry;
            // Compare the radial excess in canvas units so the tolerance is a distance.
            const double u = (p.x - cx) / rx;
            const double v = (p.y - cy) / ry;
            const double r = std::hypot(u, v);
            if (r <= 1.0) return true;
            const double excess = (r - 1.0) * std::min(rx, ry);
            return excess <= kTolerance;
        }
        case ShapeKind::Triangle: {
            const auto& [a, b, c] = vertices_;
            // Signed distances to each edge, oriented so the interior is positive.
            const double orient = cross(b - a, c - a) > 0 ? 1.0 : -1.0;
            const auto edge = [&](Vec2 s, Vec2 e) {
                return orient * cross(e - s, p - s) / length(e - s);
            };
            return edge(a, b) >= -kTolerance && edge(b, c) >= -kTolerance &&
                   edge(c, a) >= -kTolerance;
        }
    }
    return false;
}

Vec2 ShapeMask::centroid() const {
    if (kind_ == ShapeKind::Triangle) {
        const auto& [a, b, c] = vertices_;
        return {(a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3};
    }
    return {(bounds_.x0 + bounds_.x1) / 2, (bounds_.y0 + bounds_.y1) / 2};
}

double ShapeMask::area() const {
    switch (kind_) {
        case ShapeKind::Rectangle: return bounds_.width() * bounds_.height();
        case ShapeKind::Ellipse: return M_PI * bounds_.width() * bounds_.height() / 4;
        case ShapeKind::Triangle: {
            const auto& [a, b, c] = vertices_;
            return std::abs(cross(b - a, c - a)) / 2;
        }
    }
    return 0.0;
}

}  // namespace gorga
