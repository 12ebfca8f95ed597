#include "curator/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace curator {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    double t = dot(p - a, ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + ab * t);
}

PolylineHit point_polyline_distance(Vec2 p, std::span<const Vec2> pts) {
    PolylineHit best;
    best.dist = std::numeric_limits<double>::infinity();
    if (pts.empty()) return best;
    if (pts.size() == 1) {
        return {distance(p, pts[0]), 0, 0.0, pts[0]};
    }
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Vec2 a = pts[i], b = pts[i + 1];
        const Vec2 ab = b - a;
        const double len2 = dot(ab, ab);
        double t = len2 == 0.0 ? 0.0 : std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
        const Vec2 c = a + ab * t;
        const double d = distance(p, c);
        if (d < best.dist) {
            best = {d, static_cast<int>(i), t, c};
        }
    }
    return best;
}

double polyline_length(std::span<const Vec2> pts) {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) len += distance(pts[i], pts[i + 1]);
    return len;
}

std::vector<Vec2> resample_polyline(std::span<const Vec2> pts, int n) {
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(n));
    if (pts.empty() || n <= 0) return out;
    if (pts.size() == 1) {
        out.assign(static_cast<std::size_t>(n), pts[0]);
        return out;
    }

    std::vector<double> cum(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        cum[i] = cum[i - 1] + distance(pts[i - 1], pts[i]);
    }
    const double total = cum.back();
    if (total == 0.0) {
        out.assign(static_cast<std::size_t>(n), pts[0]);
        return out;
    }

    std::size_t seg = 0;
    for (int k = 0; k < n; ++k) {
        const double s = n == 1 ? 0.0 : total * static_cast<double>(k) / (n - 1);
        while (seg + 2 < pts.size() && cum[seg + 1] < s) ++seg;
        const double seg_len = cum[seg + 1] - cum[seg];
        const double t = seg_len == 0.0 ? 0.0 : (s - cum[seg]) / seg_len;
        out.push_back(pts[seg] + (pts[seg + 1] - pts[seg]) * t);
    }
    // Pin the last point to the exact endpoint.
    out.back() = pts.back();
    return out;
}

std::array<Vec2, 4> Obb::corners() const {
    const Vec2 ex = rotate({1.0, 0.0}, yaw) * (length * 0.5);
    const Vec2 ey = rotate({0.0, 1.0}, yaw) * (width * 0.5);
    return {center + ex + ey, center + ex - ey, center - ex - ey, center - ex + ey};
}

namespace {

// Project corners onto axis; return true when the two intervals are disjoint.
bool separated_on_axis(Vec2 axis, const std::array<Vec2, 4>& a, const std::array<Vec2, 4>& b) {
    double amin = std::numeric_limits<double>::infinity(), amax = -amin;
    double bmin = amin, bmax = amax;
    for (const Vec2& c : a) {
        const double v = dot(axis, c);
        amin = std::min(amin, v);
        amax = std::max(amax, v);
    }
    for (const Vec2& c : b) {
        const double v = dot(axis, c);
        bmin = std::min(bmin, v);
        bmax = std::max(bmax, v);
    }
    return amax < bmin || bmax < amin;
}

}  // namespace

bool obb_overlap(const Obb& a, const Obb& b) {
    const auto ca = a.corners();
    const auto cb = b.corners();
    const Vec2 axes[4] = {
        rotate({1.0, 0.0}, a.yaw), rotate({0.0, 1.0}, a.yaw),
        rotate({1.0, 0.0}, b.yaw), rotate({0.0, 1.0}, b.yaw)};
    for (const Vec2& axis : axes) {
        if (separated_on_axis(axis, ca, cb)) return false;
    }
    return true;
}

double obb_gap(const Obb& a, const Obb& b) {
    const Vec2 d = b.center - a.center;
    const double dist = norm(d);
    if (dist == 0.0) return 0.0;
    const Vec2 u = d * (1.0 / dist);
    auto projected_half_extent = [&u](const Obb& o) {
        const Vec2 hx = rotate({1.0, 0.0}, o.yaw);
        const Vec2 hy = rotate({0.0, 1.0}, o.yaw);
        return 0.5 * o.length * std::abs(dot(u, hx)) + 0.5 * o.width * std::abs(dot(u, hy));
    };
    return std::max(0.0, dist - projected_half_extent(a) - projected_half_extent(b));
}

}  // namespace curator
