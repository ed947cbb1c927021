#include "hybrid/holes.h"
#include "hybrid/ldel.h"
#include "hybrid/pipeline.h"
#include "hybrid/scenario.h"

#include "support.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace hybrid;

namespace {

std::size_t count_kind(const HoleAbstraction& a, RingKind k) {
    return static_cast<std::size_t>(
        std::count_if(a.rings.begin(), a.rings.end(), [&](const HoleRing& r) { return r.kind == k; }));
}

std::size_t large_bounded_faces(const PlanarGraph& g) {
    std::size_t n = 0;
    for (const Face& f : g.faces()) n += !f.outer && f.cycle.size() > 3;
    return n;
}

// Rotates a cycle so that its smallest element comes first.
std::vector<NodeIndex> canonical(std::vector<NodeIndex> c) {
    std::rotate(c.begin(), std::min_element(c.begin(), c.end()), c.end());
    return c;
}

}  // namespace

TEST(Holes, Grid36HasOneInnerHole) {
    const PlanarGraph g = build_ldel2(make_fixture("grid36-hole4"));
    const HoleAbstraction a = centralized_abstraction(g);
    EXPECT_EQ(count_kind(a, RingKind::InnerHole), 1u);
    EXPECT_EQ(count_kind(a, RingKind::OuterBoundary), 1u);
    // Jitter only leaves slivers between collinear boundary nodes.
    for (const HoleRing& r : a.rings) {
        if (r.kind == RingKind::OuterHole) {
            EXPECT_LT(r.enclosed_area, 1e-5);
        }
    }
    for (const HoleRing& r : a.rings) {
        if (r.kind == RingKind::InnerHole) {
            EXPECT_EQ(r.members.size(), 8u);
        }
    }
}

TEST(Holes, TwoHolesFixtureGivesThreeRings) {
    const PlanarGraph g = build_ldel2(make_fixture("two-holes"));
    const HoleAbstraction a = centralized_abstraction(g);
    EXPECT_EQ(count_kind(a, RingKind::InnerHole), 2u);
    EXPECT_EQ(count_kind(a, RingKind::OuterBoundary), 1u);
    EXPECT_EQ(a.rings.size() - count_kind(a, RingKind::OuterHole), 3u);
}

TEST(Holes, CShapeHasOneOuterHole) {
    const PlanarGraph g = build_ldel2(make_fixture("cshape-40"));
    const HoleAbstraction a = centralized_abstraction(g);
    EXPECT_EQ(count_kind(a, RingKind::InnerHole), 0u);
    ASSERT_EQ(count_kind(a, RingKind::OuterHole), 1u);
    for (const HoleRing& r : a.rings) {
        if (r.kind != RingKind::OuterHole) continue;
        EXPECT_TRUE(r.virtual_closing);
        // The mouth chord closes the ring: inner arc plus both outer arc ends.
        EXPECT_NEAR(dist(g.points()[r.members.front()], g.points()[r.members.back()]), 3.0, 1e-9);
        EXPECT_EQ(r.members.size(), 22u);
    }
}

TEST(Holes, TShapeOuterHoles) {
    const PlanarGraph g = build_ldel2(make_fixture("tshape"));
    const HoleAbstraction a = centralized_abstraction(g);
    // Two pockets under the bar plus three slivers along jittered hull edges.
    EXPECT_EQ(count_kind(a, RingKind::OuterHole), 5u);
    std::size_t big = 0;
    for (const HoleRing& r : a.rings) big += r.kind == RingKind::OuterHole && r.enclosed_area > 0.5;
    EXPECT_EQ(big, 2u);
}

TEST(Holes, StarRingGivesFourBaysOfTwo) {
    // Tips at radius 2, two inner nodes per gap at radius 0.8.
    std::vector<Point> pts;
    HoleRing ring;
    for (int i = 0; i < 12; ++i) {
        const double a = std::numbers::pi / 6.0 * i;
        const double r = i % 3 == 0 ? 2.0 : 0.8;
        pts.push_back({r * std::cos(a), r * std::sin(a)});
        ring.members.push_back(static_cast<NodeIndex>(i));
    }
    const auto hull = hull_of_nodes(pts, ring.members);
    ASSERT_EQ(hull.size(), 4u);
    const auto bays = compute_bays(ring, hull);
    ASSERT_EQ(bays.size(), 4u);
    for (const Bay& b : bays) {
        EXPECT_EQ(b.inner.size(), 2u);
        EXPECT_EQ(b.path().size(), 4u);
        EXPECT_EQ(b.path().front(), b.hull_a);
        EXPECT_EQ(b.path().back(), b.hull_b);
        EXPECT_EQ(ring.members[b.start], b.hull_a);
    }
    const auto pos = bay_positions(ring, bays);
    for (int i = 0; i < 12; ++i) EXPECT_EQ(pos[i] < 0, i % 3 == 0);
}

TEST(Holes, OrientationMustBeAFullTurn) {
    HoleRing r;
    apply_orientation(r, -360.0, false);
    EXPECT_EQ(r.kind, RingKind::InnerHole);
    apply_orientation(r, 360.0, false);
    EXPECT_EQ(r.kind, RingKind::OuterBoundary);
    apply_orientation(r, -360.0, true);
    EXPECT_EQ(r.kind, RingKind::OuterHole);
    try {
        apply_orientation(r, 180.0, false);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::GeometryInconsistency);
    }
}

TEST(Holes, InnerHoleCountMatchesFaceCensus) {
    ScenarioSpec spec;
    spec.seed = 2;
    spec.node_count = 100;
    spec.region = {0, 0, 5, 5};
    const PlanarGraph g = build_ldel2(generate_scenario(spec));
    EXPECT_EQ(count_kind(centralized_abstraction(g), RingKind::InnerHole), large_bounded_faces(g));
}

TEST(HolesProperty, RingMeasurementsAgreeWithGeometry) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const PlanarGraph g = build_ldel2(hybrid::testing::obstacle_scenario(200, seed));
        const HoleAbstraction a = centralized_abstraction(g);
        EXPECT_EQ(count_kind(a, RingKind::InnerHole), large_bounded_faces(g));
        for (const HoleRing& r : a.rings) {
            std::vector<Point> poly;
            for (NodeIndex v : r.members) poly.push_back(g.points()[v]);
            const double turn = ring_turn_sum(r, g.points());
            EXPECT_NEAR(std::abs(turn), 360.0, 1e-6);
            EXPECT_EQ(turn < 0, signed_area(poly) > 0);
            EXPECT_NEAR(r.enclosed_area, std::abs(signed_area(poly)), 1e-9);
            EXPECT_GE(r.perimeter_length, r.bounding_box_circumference / 2.0 - 1e-9);
        }
        for (const HullAbstraction& h : a.hulls) {
            const HoleRing& r = a.rings[static_cast<std::size_t>(h.ring_id)];
            std::size_t bay_nodes = 0;
            for (const Bay& b : h.bays) bay_nodes += b.inner.size();
            EXPECT_EQ(bay_nodes + h.hull_nodes.size(), r.members.size());
        }
    }
}

TEST(HolesProperty, DistributedAbstractionMatchesCentralized) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const HybridTopology topo = hybrid::testing::obstacle_scenario(150 + 50 * seed, seed);
        PipelineConfig cfg;
        cfg.seed = seed;
        Pipeline p(topo, cfg);
        p.build();
        const HoleAbstraction& d = p.abstraction();
        const HoleAbstraction c = centralized_abstraction(p.graph());
        ASSERT_EQ(d.rings.size(), c.rings.size()) << "seed " << seed;
        EXPECT_EQ(d.outer_ring, c.outer_ring);
        for (std::size_t i = 0; i < c.rings.size(); ++i) {
            EXPECT_EQ(d.rings[i].kind, c.rings[i].kind);
            EXPECT_EQ(canonical(d.rings[i].members), canonical(c.rings[i].members));
            EXPECT_NEAR(d.rings[i].orientation_sum, c.rings[i].orientation_sum, 1e-6);
        }
        ASSERT_EQ(d.hulls.size(), c.hulls.size());
        for (std::size_t i = 0; i < c.hulls.size(); ++i) {
            EXPECT_EQ(d.hulls[i].ring_id, c.hulls[i].ring_id);
            EXPECT_EQ(d.hulls[i].hull_nodes, c.hulls[i].hull_nodes);
            ASSERT_EQ(d.hulls[i].bays.size(), c.hulls[i].bays.size());
            for (std::size_t b = 0; b < c.hulls[i].bays.size(); ++b) {
                EXPECT_EQ(d.hulls[i].bays[b].path(), c.hulls[i].bays[b].path());
                EXPECT_TRUE(dominates_path(d.hulls[i].bays[b].path(), d.hulls[i].dominating_sets[b]));
            }
            EXPECT_EQ(d.hulls[i].bay_of_position, c.hulls[i].bay_of_position);
        }
    }
}
