#pragma once

#include "hybrid/ldel.h"
#include "hybrid/overlay.h"

#include <vector>

namespace hybrid {

enum class RingKind { Unclassified, InnerHole, OuterBoundary, OuterHole };

std::string_view to_string(RingKind k);

/// Boundary cycle of one hole (or the outer boundary) in walk order with the
/// hole on the left. Holes run counterclockwise, the outer boundary clockwise.
struct HoleRing {
    int ring_id = -1;
    std::vector<NodeIndex> members;
    bool virtual_closing = false;  // last->first is the convex hull edge of an outer hole
    std::size_t face = kNoPosition;
    RingKind kind = RingKind::Unclassified;
    double orientation_sum = 0.0;
    double perimeter_length = 0.0;
    double enclosed_area = 0.0;
    double bounding_box_circumference = 0.0;
};

struct Bay {
    NodeIndex hull_a = 0;  // hull node where the bay starts (in ring order)
    NodeIndex hull_b = 0;
    std::size_t start = 0;         // ring position of hull_a
    std::vector<NodeIndex> inner;  // ring nodes strictly between hull_a and hull_b
    /// hull_a, inner..., hull_b: the path on which the dominating set runs.
    std::vector<NodeIndex> path() const;
};

struct HullAbstraction {
    int ring_id = -1;
    std::vector<NodeIndex> hull_nodes;  // counterclockwise, lexicographic minimum first
    std::vector<Bay> bays;
    std::vector<std::vector<NodeIndex>> dominating_sets;  // per bay
    std::vector<int> bay_of_position;                     // per ring position, -1 on hull nodes
};

/// The complete radio-hole abstraction of one network.
struct HoleAbstraction {
    std::vector<HoleRing> rings;
    std::vector<HullAbstraction> hulls;  // one per InnerHole / OuterHole ring
    int outer_ring = -1;

    const HullAbstraction* hull_of_ring(int ring_id) const;
    std::vector<Polygon> hull_polygons(std::span<const Point> points) const;
};

std::vector<NodeIndex> detect_boundary_nodes(const PlanarGraph& g);

/// One ring per non-triangular bounded face plus one for the outer face.
std::vector<HoleRing> form_rings(const PlanarGraph& g, const std::vector<NodeIndex>& boundary);

/// Fills perimeter, area and bounding box from member coordinates.
void measure_ring(HoleRing& ring, std::span<const Point> points);

/// Centralized sum of signed turn angles along a ring (test oracle).
double ring_turn_sum(const HoleRing& ring, std::span<const Point> points);

/// Assigns kind from a turn sum; throws GeometryInconsistency unless it is +-360 within 1e-6.
void apply_orientation(HoleRing& ring, double sum, bool outer_hole_run);

/// Distributed classification via the ring overlay; returns the protocol state per ring.
std::vector<HypercubeOverlay> classify_rings(RoundEngine& engine, std::vector<HoleRing>& rings,
                                             std::vector<PointerJumpingResult>* jumps = nullptr,
                                             bool outer_hole_run = false);

RingSpec ring_spec(const HoleRing& ring);

/// Outer holes of the outer boundary ring given the convex hull of all nodes.
std::vector<HoleRing> detect_outer_holes(const PlanarGraph& g, const HoleRing& outer_ring,
                                         const std::vector<NodeIndex>& hull);
std::vector<HoleRing> detect_outer_holes(const PlanarGraph& g, const HoleRing& outer_ring);

std::vector<Bay> compute_bays(const HoleRing& ring, const std::vector<NodeIndex>& hull);

/// Convex hull (counterclockwise, lexicographic minimum first) of distinct nodes.
std::vector<NodeIndex> hull_of_nodes(std::span<const Point> points, std::vector<NodeIndex> nodes);

/// Positions of each bay's inner nodes on the ring, -1 on hull nodes.
std::vector<int> bay_positions(const HoleRing& ring, const std::vector<Bay>& bays);

/// Optimal dominating set of a path (every third node), used as reference.
std::vector<NodeIndex> path_dominating_set_oracle(const std::vector<NodeIndex>& path);

/// Sequential reference construction of the whole abstraction (rings,
/// classification by turn sum, hulls, outer holes, bays, optimal dominating sets).
HoleAbstraction centralized_abstraction(const PlanarGraph& g);

}  // namespace hybrid
