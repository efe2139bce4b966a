#pragma once

#include <array>
#include <cmath>
#include <string_view>

namespace gorga {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
    friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double length(Vec2 v) { return std::hypot(v.x, v.y); }

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);
double segment_segment_distance(Vec2 a1, Vec2 a2, Vec2 b1, Vec2 b2);

struct Bounds {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    friend bool operator==(const Bounds&, const Bounds&) = default;
};

enum class ShapeKind { Rectangle, Triangle, Ellipse };

std::string_view to_string(ShapeKind kind);
ShapeKind shape_kind_from_name(std::string_view name);

// Canvas region the drawing must stay inside. Rectangles and ellipses are
// described by their axis-aligned bounds, triangles by three vertices.
class ShapeMask {
public:
    static constexpr double kTolerance = 1e-9;

    static ShapeMask rectangle(Bounds b);
    static ShapeMask ellipse(Bounds b);
    static ShapeMask triangle(Vec2 a, Vec2 b, Vec2 c);

    ShapeKind kind() const { return kind_; }
    const Bounds& bounds() const { return bounds_; }
    const std::array<Vec2, 3>& vertices() const { return vertices_; }

    // Exact predicate; boundary points count as inside within kTolerance.
    bool contains(Vec2 p) const;
    Vec2 centroid() const;
    double area() const;

    friend bool operator==(const ShapeMask&, const ShapeMask&) = default;

private:
    ShapeMask(ShapeKind kind, Bounds b, std::array<Vec2, 3> v)
        : kind_(kind), bounds_(b), vertices_(v) {}

    ShapeKind kind_;
    Bounds bounds_;                  // bounding box for every kind
    std::array<Vec2, 3> vertices_{};  // triangle only
};

}  // namespace gorga
