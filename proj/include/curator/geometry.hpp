#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace curator {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

inline Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    else if (a > M_PI) a -= 2.0 * M_PI;
    return a;
}

// Distance from p to segment [a, b].
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

struct PolylineHit {
    double dist = 0.0;
    int segment = 0;   // index of the closest segment (a = pts[segment])
    double t = 0.0;    // parameter on that segment in [0, 1]
    Vec2 closest{};
};

// Exact point-to-polyline distance: minimum point-to-segment distance over
// all segments. A polyline with a single point degenerates to point distance.
PolylineHit point_polyline_distance(Vec2 p, std::span<const Vec2> pts);

double polyline_length(std::span<const Vec2> pts);

// Resample a polyline to exactly n points uniformly spaced in arc length,
// keeping both endpoints. n >= 2.
std::vector<Vec2> resample_polyline(std::span<const Vec2> pts, int n);

// Oriented bounding box: center, yaw, full extents.
struct Obb {
    Vec2 center{};
    double yaw = 0.0;
    double length = 0.0;  // extent along heading
    double width = 0.0;

    std::array<Vec2, 4> corners() const;
};

// Separating-axis overlap test over the 4 candidate axes of two OBBs.
// Touching boxes count as overlapping.
bool obb_overlap(const Obb& a, const Obb& b);

// Conservative gap between two OBBs: center distance minus the half-extents
// of both boxes projected onto the center line, floored at 0. Zero when the
// projections already meet; the exact SAT test decides actual collision.
double obb_gap(const Obb& a, const Obb& b);

// Sign of the cross product (b - a) x (p - a): > 0 when p is left of the
// directed segment a->b.
inline double side_of_segment(Vec2 p, Vec2 a, Vec2 b) {
    return cross(b - a, p - a);
}

}  // namespace curator
