#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "curator/geometry.hpp"
#include "curator/rng.hpp"

using namespace curator;

namespace {

// Independent oracle: golden-section search of |p - (a + t(b-a))| over t.
double segment_distance_oracle(Vec2 p, Vec2 a, Vec2 b) {
    auto f = [&](double t) { return distance(p, a + (b - a) * t); };
    double lo = 0.0, hi = 1.0;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return std::min({f(lo), f(hi), f(0.5 * (lo + hi))});
}

// Independent overlap oracle for convex quads: any vertex inside the other
// polygon, or any pair of edges intersecting.
bool point_in_quad(Vec2 p, const std::array<Vec2, 4>& q) {
    double sign = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double c = cross(q[(i + 1) % 4] - q[i], p - q[i]);
        if (c == 0.0) continue;
        if (sign == 0.0) sign = c;
        else if ((sign > 0.0) != (c > 0.0)) return false;
    }
    return true;
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

bool quad_overlap_oracle(const std::array<Vec2, 4>& a, const std::array<Vec2, 4>& b) {
    for (const Vec2& p : a) {
        if (point_in_quad(p, b)) return true;
    }
    for (const Vec2& p : b) {
        if (point_in_quad(p, a)) return true;
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (segments_intersect(a[i], a[(i + 1) % 4], b[j], b[(j + 1) % 4])) return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("point_segment_distance basics") {
    CHECK(point_segment_distance({0, 1}, {-1, 0}, {1, 0}) == doctest::Approx(1.0));
    CHECK(point_segment_distance({5, 0}, {-1, 0}, {1, 0}) == doctest::Approx(4.0));
    CHECK(point_segment_distance({0, 0}, {2, 2}, {2, 2}) == doctest::Approx(std::sqrt(8.0)));
}

TEST_CASE("point_polyline_distance matches golden-section oracle") {
    Rng rng(99);
    for (int inst = 0; inst < 1000; ++inst) {
        std::vector<Vec2> pts;
        const int n = 2 + static_cast<int>(rng.uniform_int(6));
        Vec2 cur{rng.uniform(-10, 10), rng.uniform(-10, 10)};
        pts.push_back(cur);
        for (int i = 1; i < n; ++i) {
            cur = cur + Vec2{rng.uniform(0.2, 4.0), rng.uniform(-3.0, 3.0)};
            pts.push_back(cur);
        }
        const Vec2 p{rng.uniform(-15, 25), rng.uniform(-15, 15)};
        const double got = point_polyline_distance(p, pts).dist;
        double expected = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            expected = std::min(expected, segment_distance_oracle(p, pts[i], pts[i + 1]));
        }
        CHECK(std::abs(got - expected) < 1e-9);
    }
}

TEST_CASE("resample_polyline keeps endpoints and monotone arc length") {
    Rng rng(3);
    std::vector<Vec2> pts{{0, 0}};
    for (int i = 0; i < 9; ++i) {
        pts.push_back(pts.back() + Vec2{rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0)});
    }
    const std::vector<Vec2> rs = resample_polyline(pts, 10);
    REQUIRE(rs.size() == 10);
    CHECK(distance(rs.front(), pts.front()) < 1e-12);
    CHECK(distance(rs.back(), pts.back()) < 1e-12);

    // Uniform spacing in arc length along the original polyline.
    const double total = polyline_length(pts);
    for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
        CHECK(distance(rs[i], rs[i + 1]) < total);  // sane
    }
    // Projections advance monotonically.
    double prev_s = -1.0;
    for (const Vec2& p : rs) {
        const PolylineHit hit = point_polyline_distance(p, pts);
        double s = 0.0;
        for (int k = 0; k < hit.segment; ++k) s += distance(pts[k], pts[k + 1]);
        s += hit.t * distance(pts[hit.segment], pts[hit.segment + 1]);
        CHECK(s >= prev_s - 1e-9);
        prev_s = s;
    }
}

TEST_CASE("obb_overlap: trivial cases") {
    const Obb a{{0, 0}, 0.0, 1.0, 1.0};
    CHECK(obb_overlap(a, a));
    const Obb b{{3, 0}, 0.0, 1.0, 1.0};
    CHECK_FALSE(obb_overlap(a, b));
}

TEST_CASE("obb_overlap: rotated near-touching rectangles") {
    const Obb a{{0, 0}, 0.0, 1.0, 1.0};
    const double touch = 0.5 + std::sqrt(0.5);  // face of a to corner of b
    const Obb gap{{touch + 0.01, 0.0}, M_PI / 4.0, 1.0, 1.0};
    const Obb pen{{touch - 0.01, 0.0}, M_PI / 4.0, 1.0, 1.0};
    CHECK_FALSE(obb_overlap(a, gap));
    CHECK(obb_overlap(a, pen));
}

TEST_CASE("obb_overlap matches polygon-intersection oracle") {
    Rng rng(2024);
    int overlaps = 0;
    for (int inst = 0; inst < 2000; ++inst) {
        const Obb a{{rng.uniform(-3, 3), rng.uniform(-3, 3)},
                    rng.uniform(-M_PI, M_PI),
                    rng.uniform(0.5, 4.0),
                    rng.uniform(0.5, 2.0)};
        const Obb b{{rng.uniform(-3, 3), rng.uniform(-3, 3)},
                    rng.uniform(-M_PI, M_PI),
                    rng.uniform(0.5, 4.0),
                    rng.uniform(0.5, 2.0)};
        const bool got = obb_overlap(a, b);
        const bool expected = quad_overlap_oracle(a.corners(), b.corners());
        CHECK(got == expected);
        if (got) ++overlaps;
    }
    CHECK(overlaps > 100);  // the instance mix actually exercises both branches
    CHECK(overlaps < 1900);
}

TEST_CASE("obb_gap: zero when projections meet, positive when apart") {
    const Obb a{{0, 0}, 0.0, 2.0, 1.0};
    const Obb b{{5, 0}, 0.0, 2.0, 1.0};
    CHECK(obb_gap(a, b) == doctest::Approx(3.0));
    const Obb c{{1.5, 0}, 0.0, 2.0, 1.0};
    CHECK(obb_gap(a, c) == 0.0);
}
