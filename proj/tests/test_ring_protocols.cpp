#include "hybrid/holes.h"
#include "hybrid/overlay.h"
#include "hybrid/simengine.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

using namespace hybrid;

namespace {

// Counterclockwise rings laid out far apart. Odd positions are pulled inward
// so that part of each ring lies strictly inside its hull.
struct RingWorld {
    HybridTopology topo;
    std::vector<RingSpec> rings;
};

RingWorld ring_world(const std::vector<std::size_t>& sizes) {
    std::vector<std::pair<NodeId, Point>> nodes;
    std::vector<std::vector<NodeIndex>> members;
    NodeId next = 0;
    double cx = 0.0;
    for (std::size_t k : sizes) {
        const double r = 0.4 / std::sin(std::numbers::pi / static_cast<double>(k));
        cx += r + 5.0;
        members.emplace_back();
        for (std::size_t i = 0; i < k; ++i) {
            const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(k);
            const double inset = r * std::cos(2.0 * std::numbers::pi / static_cast<double>(k)) - 0.1;
            const double rr = (k > 4 && i % 2 == 1) ? inset : r;
            // Ids descend in the middle of the ring so the leader is not at position 0.
            nodes.push_back({next + static_cast<NodeId>((i * 7) % k), {cx + rr * std::cos(a), rr * std::sin(a)}});
        }
        next += static_cast<NodeId>(k);
        cx += r;
    }
    RingWorld w;
    w.topo = build_udg_unchecked(std::map<NodeId, Point>(nodes.begin(), nodes.end()));
    std::size_t base = 0;
    for (std::size_t k : sizes) {
        RingSpec spec;
        for (std::size_t i = 0; i < k; ++i) spec.members.push_back(w.topo.index_of(nodes[base + i].first));
        w.rings.push_back(spec);
        base += k;
    }
    return w;
}

const std::vector<std::size_t> kSizes{4, 5, 8, 13, 32, 57, 128};

}  // namespace

TEST(PointerJumping, EveryParticipantLearnsLeaderAndSize) {
    RingWorld w = ring_world(kSizes);
    RoundEngine eng(w.topo, 3);
    const auto angles = exchange_ring_neighbours(eng, w.rings);
    const auto jumps = pointer_jumping(eng, w.rings, angles);
    ASSERT_EQ(jumps.size(), kSizes.size());
    for (std::size_t r = 0; r < kSizes.size(); ++r) {
        const auto& j = jumps[r];
        const auto& m = w.rings[r].members;
        const std::size_t k = kSizes[r];
        EXPECT_EQ(j.k, k);
        ParticipantKey expected{w.topo.ids[m[0]], w.topo.ids[m[k - 1]]};
        for (std::size_t p = 1; p < k; ++p) {
            expected = std::min(expected, ParticipantKey{w.topo.ids[m[p]], w.topo.ids[m[p - 1]]});
        }
        EXPECT_EQ(j.leader, expected);
        EXPECT_EQ(w.topo.ids[m[j.leader_position]], expected.node);
        for (std::size_t p = 0; p < k; ++p) {
            EXPECT_EQ(j.known_leader[p], expected);
            EXPECT_EQ(j.known_k[p], k);
        }
        const double levels = static_cast<double>(ceil_log2(k) + 1);
        EXPECT_LE(j.jump_rounds, levels);
        for (auto msgs : j.messages_per_position) EXPECT_LE(static_cast<double>(msgs), 2.0 * levels);
    }
}

TEST(PointerJumping, JumpTablesPointTwoToTheJAhead) {
    RingWorld w = ring_world(kSizes);
    RoundEngine eng(w.topo, 3);
    const auto jumps = pointer_jumping(eng, w.rings, exchange_ring_neighbours(eng, w.rings));
    for (std::size_t r = 0; r < kSizes.size(); ++r) {
        const std::size_t k = kSizes[r];
        for (std::size_t p = 0; p < k; ++p) {
            for (std::size_t j = 0; j < jumps[r].succ[p].size(); ++j) {
                const std::size_t step = (std::size_t{1} << j) % k;
                EXPECT_EQ(jumps[r].succ[p][j], (p + step) % k);
                EXPECT_EQ(jumps[r].pred[p][j], (p + k - step) % k);
            }
        }
    }
}

TEST(HypercubeIds, BijectionAndAngleSum) {
    RingWorld w = ring_world(kSizes);
    RoundEngine eng(w.topo, 9);
    const auto jumps = pointer_jumping(eng, w.rings, exchange_ring_neighbours(eng, w.rings));
    const auto cubes = assign_hypercube_ids(eng, w.rings, jumps);
    for (std::size_t r = 0; r < kSizes.size(); ++r) {
        const auto& c = cubes[r];
        const std::size_t k = kSizes[r];
        EXPECT_EQ(c.dimension, static_cast<int>(ceil_log2(k)));
        EXPECT_EQ(c.slot_count(), std::size_t{1} << c.dimension);
        std::set<std::uint32_t> ids(c.id_of_position.begin(), c.id_of_position.end());
        EXPECT_EQ(ids.size(), k);
        EXPECT_EQ(*ids.rbegin(), k - 1);
        for (std::size_t p = 0; p < k; ++p) {
            EXPECT_EQ(c.id_of_position[p], (p + k - jumps[r].leader_position) % k);
            EXPECT_EQ(c.position_of_slot[c.id_of_position[p]], p);
        }
        for (std::size_t s = k; s < c.slot_count(); ++s) EXPECT_TRUE(c.is_virtual(s));
        HoleRing ring;
        ring.members = w.rings[r].members;
        EXPECT_NEAR(c.angle_sum, ring_turn_sum(ring, w.topo.points), 1e-9);
        EXPECT_NEAR(c.angle_sum, -360.0, 1e-6);
    }
}

TEST(HypercubeSortProperty, MatchesStdSort) {
    RingWorld w = ring_world(kSizes);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 4; ++trial) {
        RoundEngine eng(w.topo, 1 + trial);
        const auto jumps = pointer_jumping(eng, w.rings, exchange_ring_neighbours(eng, w.rings));
        const auto cubes = assign_hypercube_ids(eng, w.rings, jumps);
        std::vector<std::vector<SortKey>> keys(cubes.size());
        for (std::size_t c = 0; c < cubes.size(); ++c) {
            for (std::size_t s = 0; s < cubes[c].slot_count(); ++s) {
                SortKey key;
                if (!cubes[c].is_virtual(s)) {
                    // Duplicated x values exercise the tie-breaks.
                    key = {std::round(u(rng)), u(rng), cubes[c].host_of_slot[s]};
                }
                keys[c].push_back(key);
            }
        }
        int stages = 0;
        const auto sorted = hypercube_sort(eng, cubes, keys, &stages);
        for (std::size_t c = 0; c < cubes.size(); ++c) {
            auto expected = keys[c];
            std::sort(expected.begin(), expected.end());
            EXPECT_EQ(sorted[c], expected);
        }
        const int d = cubes.back().dimension;
        EXPECT_EQ(stages, d * (d + 1) / 2);
    }
}

TEST(ParallelHull, MatchesSequentialHull) {
    RingWorld w = ring_world(kSizes);
    RoundEngine eng(w.topo, 5);
    const auto jumps = pointer_jumping(eng, w.rings, exchange_ring_neighbours(eng, w.rings));
    const auto cubes = assign_hypercube_ids(eng, w.rings, jumps);
    std::vector<std::vector<SortKey>> keys(cubes.size());
    for (std::size_t c = 0; c < cubes.size(); ++c) {
        for (std::size_t s = 0; s < cubes[c].slot_count(); ++s) {
            SortKey key;
            if (!cubes[c].is_virtual(s)) {
                const NodeIndex v = cubes[c].host_of_slot[s];
                key = {w.topo.points[v].x, w.topo.points[v].y, v};
            }
            keys[c].push_back(key);
        }
    }
    const auto sorted = hypercube_sort(eng, cubes, keys);
    const auto hulls = parallel_convex_hull(eng, cubes, sorted);
    for (std::size_t c = 0; c < cubes.size(); ++c) {
        EXPECT_EQ(hulls[c], hull_of_nodes(w.topo.points, w.rings[c].members)) << "ring " << c;
        if (kSizes[c] > 4) {
            EXPECT_EQ(hulls[c].size(), (kSizes[c] + 1) / 2);
        }
    }
}

TEST(MergeHullsProperty, MatchesOracleOnSplitPointSets) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 6 + trial % 30;
        std::vector<Point> pts;
        for (std::size_t i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return pts[a] < pts[b]; });
        const std::size_t split = 3 + trial % (n - 5);
        auto hull_keys = [&](std::size_t lo, std::size_t hi) {
            std::vector<Point> sub;
            for (std::size_t i = lo; i < hi; ++i) sub.push_back(pts[order[i]]);
            std::vector<SortKey> out;
            for (auto i : convex_hull_oracle(sub)) {
                out.push_back({sub[i].x, sub[i].y, static_cast<NodeIndex>(order[lo + i])});
            }
            return out;
        };
        const auto left = hull_keys(0, split);
        const auto right = hull_keys(split, n);
        const auto merged = merge_hulls(left, right);
        std::vector<NodeIndex> got;
        for (const auto& k : merged) got.push_back(k.node);
        std::vector<NodeIndex> expected;
        for (auto i : convex_hull_oracle(pts)) expected.push_back(static_cast<NodeIndex>(i));
        EXPECT_EQ(got, expected) << "trial " << trial;
    }
}

TEST(BroadcastTree, SpansAllNodesWithLogHeight) {
    RingWorld w = ring_world(kSizes);
    RoundEngine eng(w.topo, 1);
    const BroadcastTree t = build_broadcast_tree(eng, 1.0);
    const std::size_t n = w.topo.size();
    int max_depth = 0;
    for (NodeIndex v = 0; v < n; ++v) {
        int depth = 0;
        for (NodeIndex x = v; x != t.root; x = t.parent[x]) {
            ASSERT_NE(t.parent[x], kNoNode);
            EXPECT_TRUE(eng.knows(x, t.parent[x]));
            ++depth;
            ASSERT_LE(depth, static_cast<int>(n));
        }
        max_depth = std::max(max_depth, depth);
        for (NodeIndex c : t.children[v]) EXPECT_EQ(t.parent[c], v);
    }
    EXPECT_EQ(max_depth, t.height);
    EXPECT_LE(t.height, static_cast<int>(ceil_log2(n)));
    EXPECT_LE(t.max_degree, 3);
    const double lg = std::log2(static_cast<double>(n));
    EXPECT_EQ(t.charged_rounds, static_cast<std::int64_t>(std::ceil(lg * lg)));
}

TEST(DistributeHulls, HullNodesLearnEachOtherWithoutDuplicates) {
    RingWorld w = ring_world(kSizes);
    RoundEngine eng(w.topo, 1);
    const BroadcastTree t = build_broadcast_tree(eng, 1.0);
    std::vector<std::vector<NodeIndex>> hulls;
    for (const auto& r : w.rings) hulls.push_back(hull_of_nodes(w.topo.points, r.members));
    const DistributionResult res = distribute_hulls(eng, t, hulls);
    EXPECT_EQ(res.duplicates, 0u);
    std::size_t total = 0;
    for (const auto& h : hulls) total += h.size();
    for (const auto& h : hulls) {
        for (NodeIndex a : h) {
            for (const auto& h2 : hulls) {
                for (NodeIndex b : h2) {
                    if (a != b) {
                        EXPECT_TRUE(eng.knows(a, b));
                    }
                }
            }
        }
    }
    EXPECT_GT(res.rounds, 0);
    EXPECT_LE(res.rounds, static_cast<std::int64_t>(2 * t.height + total + 2));
}

TEST(DominatingSetProperty, ValidOnRandomPaths) {
    std::vector<std::pair<NodeId, Point>> nodes;
    std::vector<std::vector<NodeIndex>> paths;
    std::mt19937_64 rng(4);
    NodeIndex next = 0;
    for (int p = 0; p < 40; ++p) {
        const std::size_t len = 1 + rng() % 60;
        std::vector<NodeIndex> path;
        for (std::size_t i = 0; i < len; ++i) {
            nodes.push_back({static_cast<NodeId>(next), {0.9 * static_cast<double>(i), 3.0 * p}});
            path.push_back(next++);
        }
        paths.push_back(path);
    }
    const HybridTopology topo = build_udg_unchecked(std::map<NodeId, Point>(nodes.begin(), nodes.end()));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        RoundEngine eng(topo, seed);
        const DominatingSetResult res = dominating_set(eng, paths);
        ASSERT_EQ(res.sets.size(), paths.size());
        for (std::size_t i = 0; i < paths.size(); ++i) {
            EXPECT_TRUE(dominates_path(paths[i], res.sets[i]));
            EXPECT_GE(res.sets[i].size(), (paths[i].size() + 2) / 3);
            EXPECT_LE(res.sets[i].size(), paths[i].size());
            EXPECT_TRUE(std::is_sorted(res.sets[i].begin(), res.sets[i].end(), [&](NodeIndex a, NodeIndex b) {
                return std::find(paths[i].begin(), paths[i].end(), a) <
                       std::find(paths[i].begin(), paths[i].end(), b);
            }));
        }
    }
}

TEST(DominatingSet, OracleIsOptimalAndValid) {
    for (std::size_t n = 1; n <= 30; ++n) {
        std::vector<NodeIndex> path(n);
        for (std::size_t i = 0; i < n; ++i) path[i] = static_cast<NodeIndex>(i);
        const auto ds = path_dominating_set_oracle(path);
        EXPECT_TRUE(dominates_path(path, ds));
        EXPECT_EQ(ds.size(), (n + 2) / 3);
    }
    EXPECT_FALSE(dominates_path({0, 1, 2, 3}, {0}));
}
