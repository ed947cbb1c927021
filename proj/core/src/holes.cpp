#include "hybrid/holes.h"

#include "hybrid/errors.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace hybrid {

std::string_view to_string(RingKind k) {
    switch (k) {
        case RingKind::Unclassified: return "unclassified";
        case RingKind::InnerHole: return "inner-hole";
        case RingKind::OuterBoundary: return "outer-boundary";
        case RingKind::OuterHole: return "outer-hole";
    }
    return "unknown";
}

std::vector<NodeIndex> Bay::path() const {
    std::vector<NodeIndex> out{hull_a};
    out.insert(out.end(), inner.begin(), inner.end());
    out.push_back(hull_b);
    return out;
}

const HullAbstraction* HoleAbstraction::hull_of_ring(int ring_id) const {
    for (const auto& h : hulls) {
        if (h.ring_id == ring_id) return &h;
    }
    return nullptr;
}

std::vector<Polygon> HoleAbstraction::hull_polygons(std::span<const Point> points) const {
    std::vector<Polygon> out;
    out.reserve(hulls.size());
    for (const auto& h : hulls) {
        Polygon poly;
        for (NodeIndex v : h.hull_nodes) poly.vertices.push_back(points[v]);
        out.push_back(std::move(poly));
    }
    return out;
}

std::vector<NodeIndex> detect_boundary_nodes(const PlanarGraph& g) {
    std::set<NodeIndex> out;
    for (const Face& f : g.faces()) {
        if (f.outer || f.cycle.size() >= 4) out.insert(f.cycle.begin(), f.cycle.end());
    }
    return {out.begin(), out.end()};
}

void measure_ring(HoleRing& ring, std::span<const Point> points) {
    std::vector<Point> pts;
    for (NodeIndex v : ring.members) pts.push_back(points[v]);
    ring.perimeter_length = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) ring.perimeter_length += dist(pts[i], pts[(i + 1) % pts.size()]);
    ring.enclosed_area = std::abs(signed_area(pts));
    double x0 = pts[0].x, x1 = pts[0].x, y0 = pts[0].y, y1 = pts[0].y;
    for (const Point& p : pts) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    ring.bounding_box_circumference = 2.0 * ((x1 - x0) + (y1 - y0));
}

std::vector<HoleRing> form_rings(const PlanarGraph& g, const std::vector<NodeIndex>& boundary) {
    const std::set<NodeIndex> is_boundary(boundary.begin(), boundary.end());
    std::vector<HoleRing> rings;
    auto add = [&](std::size_t face_index) {
        const Face& f = g.faces()[face_index];
        HoleRing ring;
        ring.ring_id = static_cast<int>(rings.size());
        ring.face = face_index;
        ring.members = f.cycle;
        for (std::size_t i = 0; i < ring.members.size(); ++i) {
            const NodeIndex a = ring.members[i];
            const NodeIndex b = ring.members[(i + 1) % ring.members.size()];
            if (!is_boundary.count(a)) throw Error(ErrorKind::EmbeddingCorruption, "ring member is not a boundary node");
            if (!g.has_edge(a, b) || g.next_on_face(a, b) != ring.members[(i + 2) % ring.members.size()]) {
                throw Error(ErrorKind::EmbeddingCorruption, "inconsistent successor chain");
            }
        }
        measure_ring(ring, g.points());
        rings.push_back(std::move(ring));
    };
    for (std::size_t i = 0; i < g.faces().size(); ++i) {
        if (!g.faces()[i].outer && g.faces()[i].cycle.size() >= 4) add(i);
    }
    if (!g.faces().empty()) add(g.outer_face());
    return rings;
}

double ring_turn_sum(const HoleRing& ring, std::span<const Point> points) {
    const auto& m = ring.members;
    const std::size_t k = m.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sum += signed_turn_angle(points[m[(i + k - 1) % k]], points[m[i]], points[m[(i + 1) % k]]);
    }
    return sum;
}

void apply_orientation(HoleRing& ring, double sum, bool outer_hole_run) {
    ring.orientation_sum = sum;
    if (std::abs(sum + 360.0) <= 1e-6) {
        ring.kind = outer_hole_run ? RingKind::OuterHole : RingKind::InnerHole;
    } else if (std::abs(sum - 360.0) <= 1e-6 && !outer_hole_run) {
        ring.kind = RingKind::OuterBoundary;
    } else {
        throw Error(ErrorKind::GeometryInconsistency,
                    "ring " + std::to_string(ring.ring_id) + " turns by " + std::to_string(sum) + " degrees");
    }
}

RingSpec ring_spec(const HoleRing& ring) { return {ring.members, ring.virtual_closing}; }

std::vector<HypercubeOverlay> classify_rings(RoundEngine& engine, std::vector<HoleRing>& rings,
                                             std::vector<PointerJumpingResult>* jumps, bool outer_hole_run) {
    std::vector<RingSpec> specs;
    for (const auto& r : rings) specs.push_back(ring_spec(r));
    const auto angles = exchange_ring_neighbours(engine, specs);
    auto pj = pointer_jumping(engine, specs, angles);
    auto cubes = assign_hypercube_ids(engine, specs, pj);
    for (std::size_t i = 0; i < rings.size(); ++i) apply_orientation(rings[i], cubes[i].angle_sum, outer_hole_run);
    if (jumps) *jumps = std::move(pj);
    return cubes;
}

std::vector<NodeIndex> hull_of_nodes(std::span<const Point> points, std::vector<NodeIndex> nodes) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    std::vector<Point> pts;
    for (NodeIndex v : nodes) pts.push_back(points[v]);
    std::vector<NodeIndex> out;
    for (std::size_t i : convex_hull_oracle(pts)) out.push_back(nodes[i]);
    return out;
}

std::vector<HoleRing> detect_outer_holes(const PlanarGraph& g, const HoleRing& outer_ring,
                                         const std::vector<NodeIndex>& hull) {
    const auto& pts = g.points();
    const auto& m = outer_ring.members;
    const std::size_t k = m.size();
    const std::set<NodeIndex> on_hull(hull.begin(), hull.end());
    std::vector<HoleRing> out;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const NodeIndex a = hull[i];
        const NodeIndex b = hull[(i + 1) % hull.size()];
        if (dist(pts[a], pts[b]) <= 1.0) continue;
        // The clockwise walk meets b before a; find a stretch b ... a free of other hull nodes.
        std::vector<NodeIndex> path;
        for (std::size_t s = 0; s < k && path.empty(); ++s) {
            if (m[s] != b) continue;
            std::vector<NodeIndex> candidate{b};
            for (std::size_t step = 1; step <= k; ++step) {
                const NodeIndex v = m[(s + step) % k];
                candidate.push_back(v);
                if (on_hull.count(v)) break;
            }
            if (candidate.back() == a && candidate.size() >= 3) path = std::move(candidate);
        }
        if (path.empty()) {
            throw Error(ErrorKind::EmbeddingCorruption, "outer boundary misses a long convex hull edge");
        }
        HoleRing ring;
        ring.members = std::move(path);
        ring.virtual_closing = true;
        std::vector<Point> poly;
        for (NodeIndex v : ring.members) poly.push_back(pts[v]);
        if (signed_area(poly) < 0) std::reverse(ring.members.begin(), ring.members.end());
        ring.ring_id = static_cast<int>(out.size());
        measure_ring(ring, pts);
        out.push_back(std::move(ring));
    }
    return out;
}

std::vector<HoleRing> detect_outer_holes(const PlanarGraph& g, const HoleRing& outer_ring) {
    return detect_outer_holes(g, outer_ring, hull_of_nodes(g.points(), outer_ring.members));
}

std::vector<Bay> compute_bays(const HoleRing& ring, const std::vector<NodeIndex>& hull) {
    const std::set<NodeIndex> on_hull(hull.begin(), hull.end());
    const auto& m = ring.members;
    const std::size_t k = m.size();
    std::size_t first = k;
    for (std::size_t i = 0; i < k; ++i) {
        if (!on_hull.count(m[i])) continue;
        if (first == k) first = i;
    }
    if (first == k) throw Error(ErrorKind::InvalidArgument, "hull shares no node with the ring");
    for (NodeIndex h : hull) {
        if (std::find(m.begin(), m.end(), h) == m.end()) throw Error(ErrorKind::InvalidArgument, "hull node off the ring");
    }
    std::vector<Bay> bays;
    Bay current;
    current.hull_a = m[first];
    current.start = first;
    for (std::size_t step = 1; step <= k; ++step) {
        const std::size_t pos = (first + step) % k;
        const NodeIndex v = m[pos];
        if (!on_hull.count(v)) {
            current.inner.push_back(v);
            continue;
        }
        current.hull_b = v;
        if (!current.inner.empty()) bays.push_back(current);
        current = Bay{};
        current.hull_a = v;
        current.start = pos;
    }
    return bays;
}

std::vector<int> bay_positions(const HoleRing& ring, const std::vector<Bay>& bays) {
    const std::size_t k = ring.members.size();
    std::vector<int> out(k, -1);
    for (std::size_t b = 0; b < bays.size(); ++b) {
        for (std::size_t i = 1; i <= bays[b].inner.size(); ++i) out[(bays[b].start + i) % k] = static_cast<int>(b);
    }
    return out;
}

std::vector<NodeIndex> path_dominating_set_oracle(const std::vector<NodeIndex>& path) {
    std::vector<NodeIndex> out;
    for (std::size_t i = 1; i < path.size(); i += 3) out.push_back(path[i]);
    if (!path.empty() && path.size() % 3 == 1) out.push_back(path.back());
    return out;
}

HoleAbstraction centralized_abstraction(const PlanarGraph& g) {
    HoleAbstraction abs;
    const auto& pts = g.points();
    if (g.vertex_count() < 3) return abs;
    abs.rings = form_rings(g, detect_boundary_nodes(g));
    for (auto& r : abs.rings) apply_orientation(r, ring_turn_sum(r, pts), false);
    std::vector<std::vector<NodeIndex>> hulls;
    for (std::size_t i = 0; i < abs.rings.size(); ++i) {
        if (abs.rings[i].kind == RingKind::OuterBoundary) abs.outer_ring = static_cast<int>(i);
    }
    if (abs.outer_ring >= 0) {
        const HoleRing outer = abs.rings[abs.outer_ring];
        for (HoleRing& r : detect_outer_holes(g, outer)) {
            apply_orientation(r, ring_turn_sum(r, pts), true);
            r.ring_id = static_cast<int>(abs.rings.size());
            abs.rings.push_back(std::move(r));
        }
    }
    for (const HoleRing& r : abs.rings) {
        if (r.kind != RingKind::InnerHole && r.kind != RingKind::OuterHole) continue;
        HullAbstraction h;
        h.ring_id = r.ring_id;
        h.hull_nodes = hull_of_nodes(pts, r.members);
        h.bays = compute_bays(r, h.hull_nodes);
        for (const Bay& b : h.bays) h.dominating_sets.push_back(path_dominating_set_oracle(b.path()));
        h.bay_of_position = bay_positions(r, h.bays);
        abs.hulls.push_back(std::move(h));
    }
    return abs;
}

}  // namespace hybrid
