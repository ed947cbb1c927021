#include "hybrid/errors.h"
#include "hybrid/geometry.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace hybrid;

namespace {

std::vector<Point> random_points(std::mt19937_64& rng, std::size_t n, double side = 10.0) {
    std::uniform_real_distribution<double> u(0.0, side);
    std::vector<Point> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back({u(rng), u(rng)});
    return out;
}

// A point is a hull vertex iff some closed half-plane through it holds every
// other point while the point is not inside a segment of two others.
std::set<std::size_t> extreme_points(const std::vector<Point>& pts) {
    std::set<std::size_t> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool inside = false;
        for (std::size_t a = 0; a < pts.size() && !inside; ++a) {
            for (std::size_t b = a + 1; b < pts.size() && !inside; ++b) {
                for (std::size_t c = b + 1; c < pts.size() && !inside; ++c) {
                    if (i == a || i == b || i == c) continue;
                    const Orientation o1 = orientation(pts[a], pts[b], pts[i]);
                    const Orientation o2 = orientation(pts[b], pts[c], pts[i]);
                    const Orientation o3 = orientation(pts[c], pts[a], pts[i]);
                    inside = o1 == o2 && o2 == o3 && o1 != Orientation::Collinear;
                }
            }
        }
        if (!inside) out.insert(i);
    }
    return out;
}

}  // namespace

TEST(Geometry, OrientationOfBasicTriples) {
    EXPECT_EQ(orientation({0, 0}, {1, 0}, {0, 1}), Orientation::Left);
    EXPECT_EQ(orientation({0, 0}, {1, 0}, {0, -1}), Orientation::Right);
    EXPECT_EQ(orientation({0, 0}, {1, 0}, {2, 0}), Orientation::Collinear);
}

TEST(Geometry, CircumcircleOfUnitRightTriangle) {
    EXPECT_TRUE(in_circumcircle({0, 0}, {1, 0}, {0, 1}, {0.5, 0.5}));
    EXPECT_FALSE(in_circumcircle({0, 0}, {1, 0}, {0, 1}, {2, 2}));
    const Point c = circumcenter({0, 0}, {1, 0}, {0, 1});
    EXPECT_DOUBLE_EQ(c.x, 0.5);
    EXPECT_DOUBLE_EQ(c.y, 0.5);
    EXPECT_NEAR(circumradius({0, 0}, {1, 0}, {0, 1}), std::sqrt(0.5), 1e-15);
}

TEST(Geometry, CollinearCircumcircleIsDegenerate) {
    try {
        in_circumcircle({0, 0}, {1, 0}, {2, 0}, {1, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateInput);
    }
}

TEST(GeometryProperty, CircumcircleInvariantUnderCyclicPermutation) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        auto p = random_points(rng, 4);
        if (orientation(p[0], p[1], p[2]) == Orientation::Collinear) continue;
        if (orientation(p[0], p[1], p[2]) == Orientation::Right) std::swap(p[1], p[2]);
        const bool r = in_circumcircle(p[0], p[1], p[2], p[3]);
        EXPECT_EQ(r, in_circumcircle(p[1], p[2], p[0], p[3]));
        EXPECT_EQ(r, in_circumcircle(p[2], p[0], p[1], p[3]));
        // Oracle: distance to the circumcenter.
        const Point c = circumcenter(p[0], p[1], p[2]);
        const double rad = dist(c, p[0]);
        if (std::abs(dist(c, p[3]) - rad) > 1e-9) {
            EXPECT_EQ(r, dist(c, p[3]) < rad);
        }
    }
}

TEST(Geometry, GabrielDisk) {
    const std::vector<Point> inside{{0.5, 0.1}};
    const std::vector<Point> outside{{0.5, 0.6}};
    EXPECT_FALSE(gabriel_disk_empty({0, 0}, {1, 0}, inside));
    EXPECT_TRUE(gabriel_disk_empty({0, 0}, {1, 0}, outside));
}

TEST(Geometry, SegmentIntersection) {
    EXPECT_TRUE(segments_properly_intersect({{0, 0}, {2, 2}}, {{0, 2}, {2, 0}}));
    EXPECT_FALSE(segments_properly_intersect({{0, 0}, {1, 1}}, {{1, 1}, {2, 0}}));
    EXPECT_FALSE(segments_properly_intersect({{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}));
    EXPECT_NEAR(segment_intersection_param({{0, 0}, {2, 2}}, {{0, 2}, {2, 0}}), 0.5, 1e-15);
    EXPECT_LT(segment_intersection_param({{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}), 0.0);
}

TEST(Geometry, SquareHullStartsAtLexicographicMinimum) {
    const std::vector<Point> pts{{1, 1}, {0, 0}, {1, 0}, {0.5, 0.5}, {0, 1}};
    const auto h = convex_hull_oracle(pts);
    EXPECT_EQ(h, (std::vector<std::size_t>{1, 2, 0, 4}));
}

TEST(Geometry, HullOfCollinearPointsIsDegenerate) {
    const std::vector<Point> pts{{0, 0}, {1, 1}, {2, 2}};
    EXPECT_THROW(convex_hull_oracle(pts), Error);
    EXPECT_THROW(convex_hull_oracle(std::vector<Point>{{0, 0}, {1, 1}}), Error);
}

TEST(GeometryProperty, HullMatchesExtremePointOracle) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const auto pts = random_points(rng, 5 + trial % 20);
        const auto h = convex_hull_oracle(pts);
        EXPECT_EQ(std::set<std::size_t>(h.begin(), h.end()), extreme_points(pts));
        std::vector<Point> poly;
        for (auto i : h) poly.push_back(pts[i]);
        EXPECT_GT(signed_area(poly), 0.0);
        EXPECT_EQ(*std::min_element(pts.begin(), pts.end()), pts[h.front()]);
    }
}

TEST(Geometry, TurnAnglesOfSquare) {
    const std::vector<Point> ccw{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    double sum = 0;
    for (std::size_t i = 0; i < 4; ++i) sum += signed_turn_angle(ccw[(i + 3) % 4], ccw[i], ccw[(i + 1) % 4]);
    EXPECT_NEAR(sum, -360.0, 1e-12);
    EXPECT_DOUBLE_EQ(signed_turn_angle({0, 0}, {1, 0}, {0, 0}), 180.0);
    EXPECT_NEAR(signed_turn_angle({0, 0}, {1, 0}, {1, -1}), 90.0, 1e-12);
}

TEST(Geometry, PointInPolygonIgnoresOrientationAndExcludesBoundary) {
    const std::vector<Point> sq{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
    std::vector<Point> cw(sq.rbegin(), sq.rend());
    EXPECT_TRUE(point_in_polygon_strict({1, 1}, sq));
    EXPECT_TRUE(point_in_polygon_strict({1, 1}, cw));
    EXPECT_FALSE(point_in_polygon_strict({2, 1}, sq));
    EXPECT_TRUE(point_on_polygon_boundary({2, 1}, sq));
    EXPECT_FALSE(point_in_polygon_strict({3, 1}, sq));
}

TEST(Geometry, SegmentThroughPolygonInterior) {
    const std::vector<Point> sq{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
    EXPECT_TRUE(segment_crosses_polygon_interior({{-1, 1}, {3, 1}}, sq));
    EXPECT_FALSE(segment_crosses_polygon_interior({{0, 0}, {2, 0}}, sq));
    EXPECT_TRUE(segment_crosses_polygon_interior({{0, 0}, {2, 2}}, sq));
    EXPECT_FALSE(segment_crosses_polygon_interior({{-1, 3}, {3, 3}}, sq));
}

TEST(Geometry, ClosestPointOnSegment) {
    const Point c = closest_point_on_segment({1, 5}, {0, 0}, {2, 0});
    EXPECT_DOUBLE_EQ(c.x, 1.0);
    EXPECT_DOUBLE_EQ(c.y, 0.0);
    EXPECT_EQ(closest_point_on_segment({5, 5}, {0, 0}, {2, 0}), (Point{2, 0}));
}
