#pragma once

#include "hybrid/holes.h"
#include "hybrid/ldel.h"
#include "hybrid/simengine.h"

#include <optional>
#include <string>
#include <vector>

namespace hybrid {

inline constexpr double kChewBound = 5.9;
inline constexpr double kVisibilityBound = 17.7;
inline constexpr double kOverlayDelaunayBound = 35.37;

enum class RouteCase { Visible, Case1, Case2, Case3, Case4, Case5 };
enum class Backend { Visibility, OverlayDelaunay };

std::string_view to_string(RouteCase c);
std::string_view to_string(Backend b);
Backend parse_backend(std::string_view s);

struct ChewResult {
    std::vector<NodeIndex> path;
    bool reached = false;
    NodeIndex hole_node = kNoNode;       // first node of the obstructing face
    std::size_t blocking_face = kNoPosition;
    std::vector<std::size_t> corridor;  // faces intersected by the segment, in order
};

/// Online corridor routing toward t along faces intersected by segment s-t.
ChewResult chew_route(const PlanarGraph& g, NodeIndex s, NodeIndex t);

/// Graph over hull vertices used by hull nodes to plan waypoint routes.
struct OverlayGraph {
    std::vector<NodeIndex> nodes;  // graph vertex -> network node
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<Polygon> obstacles;  // hull polygons

    std::size_t vertex_of(NodeIndex v) const;  // kNoPosition when absent
};

OverlayGraph build_visibility_graph(const std::vector<std::vector<NodeIndex>>& hulls, std::span<const Point> points);
OverlayGraph build_overlay_delaunay(const std::vector<std::vector<NodeIndex>>& hulls, std::span<const Point> points);

/// Throws AssumptionViolation when two hull polygons overlap.
void check_hulls_disjoint(const std::vector<Polygon>& hulls);

/// True when the open segment a-b stays out of every obstacle interior.
bool visible(Point a, Point b, const std::vector<Polygon>& obstacles);

struct Waypoint {
    Point p;
    NodeIndex node = kNoNode;
};

/// Minimum-length waypoint sequence from `from` to `to`; endpoints that are
/// not overlay vertices are inserted temporarily with visibility edges.
std::vector<Waypoint> overlay_shortest_path(const OverlayGraph& overlay, std::span<const Point> points,
                                            Waypoint from, Waypoint to);

double waypoint_length(const std::vector<Waypoint>& w);

struct RouteResult {
    NodeId s = 0;
    NodeId t = 0;
    std::vector<NodeId> path;
    std::vector<NodeIndex> path_index;
    double euclidean_length = 0.0;
    double udg_shortest = 0.0;
    double straight_line = 0.0;
    double competitive_ratio = 1.0;
    RouteCase case_taken = RouteCase::Visible;
    std::int64_t rounds_used = 0;
    std::int64_t longrange_msgs = 0;
    std::size_t extreme_points = 0;  // |E_route| for bay routing
    std::vector<double> leg_lengths;  // overlay leg lengths d_m
    double bound = 0.0;               // asserted constant, 0 when the case has none
    bool within_bound = true;
};

/// Read-only routing state built from a finished abstraction.
class Router {
public:
    Router(const PlanarGraph& g, const HybridTopology& topo, const HoleAbstraction& abstraction, Backend backend);

    RouteResult route(RoundEngine& engine, NodeId s, NodeId t) const;
    RouteResult route(NodeIndex s, NodeIndex t) const;
    /// Same-bay routing with extreme points; throws Dispatch when s and t are not in one bay.
    RouteResult route_bay(NodeIndex s, NodeIndex t) const;

    /// Hull (index into abstraction().hulls) whose polygon strictly contains v, or -1.
    int hull_containing(NodeIndex v) const;
    /// (hull, bay) of a node inside a hull, or (-1, -1).
    std::pair<int, int> bay_of(NodeIndex v) const;

    const OverlayGraph& overlay() const { return overlay_; }
    const HoleAbstraction& abstraction() const { return abs_; }
    Backend backend() const { return backend_; }

private:
    struct Leg {
        std::vector<NodeIndex> path;
        bool ok = false;
    };

    Leg robust_leg(NodeIndex u, NodeIndex v) const;
    Leg walk_ring_to(int ring, NodeIndex from, NodeIndex to) const;
    std::vector<NodeIndex> bay_leg(NodeIndex s, NodeIndex t, int hull, int bay, std::size_t& extreme) const;
    std::vector<NodeIndex> case1(NodeIndex s, NodeIndex t, std::vector<double>& legs, bool& visible_direct) const;
    int ring_of_face(std::size_t face) const;
    void finish(RouteResult& r, NodeIndex s, NodeIndex t) const;

    const PlanarGraph& g_;
    const HybridTopology& topo_;
    const HoleAbstraction& abs_;
    Backend backend_;
    OverlayGraph overlay_;
    std::vector<Polygon> hull_polys_;
    std::vector<std::vector<Polygon>> bay_polys_;
    std::vector<int> face_ring_;
};

struct CaseStats {
    std::size_t count = 0;
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
    std::size_t violations = 0;
};

struct CompetitivenessReport {
    std::vector<std::pair<RouteCase, CaseStats>> per_case;
    double min_ratio = 0.0;
};

/// Recomputes d(s,t) on the unit disk graph for every result and aggregates per case.
CompetitivenessReport measure_competitiveness(const HybridTopology& topo, std::vector<RouteResult>& results);

}  // namespace hybrid
