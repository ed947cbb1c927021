#include "hybrid/routing.h"

#include "hybrid/errors.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>

namespace hybrid {

std::size_t OverlayGraph::vertex_of(NodeIndex v) const {
    const auto it = std::find(nodes.begin(), nodes.end(), v);
    return it == nodes.end() ? kNoPosition : static_cast<std::size_t>(it - nodes.begin());
}

void check_hulls_disjoint(const std::vector<Polygon>& hulls) {
    for (std::size_t i = 0; i < hulls.size(); ++i) {
        for (std::size_t j = i + 1; j < hulls.size(); ++j) {
            const auto& a = hulls[i].vertices;
            const auto& b = hulls[j].vertices;
            bool bad = false;
            for (std::size_t x = 0; x < a.size() && !bad; ++x) {
                const Segment ea{a[x], a[(x + 1) % a.size()]};
                if (segment_crosses_polygon_interior(ea, b)) bad = true;
                if (point_in_polygon_strict(a[x], b)) bad = true;
            }
            for (std::size_t y = 0; y < b.size() && !bad; ++y) {
                if (point_in_polygon_strict(b[y], a)) bad = true;
            }
            if (bad) {
                throw Error(ErrorKind::AssumptionViolation,
                            "convex hulls " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
            }
        }
    }
}

bool visible(Point a, Point b, const std::vector<Polygon>& obstacles) {
    for (const auto& poly : obstacles) {
        if (segment_crosses_polygon_interior({a, b}, poly.vertices)) return false;
    }
    return true;
}

namespace {

OverlayGraph collect_vertices(const std::vector<std::vector<NodeIndex>>& hulls, std::span<const Point> points) {
    OverlayGraph g;
    std::set<NodeIndex> seen;
    for (const auto& h : hulls) {
        Polygon poly;
        for (NodeIndex v : h) {
            poly.vertices.push_back(points[v]);
            if (seen.insert(v).second) g.nodes.push_back(v);
        }
        g.obstacles.push_back(std::move(poly));
    }
    std::sort(g.nodes.begin(), g.nodes.end());
    check_hulls_disjoint(g.obstacles);
    return g;
}

std::set<std::pair<std::size_t, std::size_t>> constraint_edges(const OverlayGraph& g,
                                                               const std::vector<std::vector<NodeIndex>>& hulls) {
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (const auto& h : hulls) {
        for (std::size_t i = 0; i < h.size(); ++i) {
            std::size_t a = g.vertex_of(h[i]);
            std::size_t b = g.vertex_of(h[(i + 1) % h.size()]);
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            out.emplace(a, b);
        }
    }
    return out;
}

bool passes_through_vertex(Point a, Point b, std::span<const Point> vertices) {
    for (const Point& v : vertices) {
        if (v == a || v == b) continue;
        const Point c = closest_point_on_segment(v, a, b);
        if (dist(c, v) <= 1e-9) return true;
    }
    return false;
}

}  // namespace

OverlayGraph build_visibility_graph(const std::vector<std::vector<NodeIndex>>& hulls, std::span<const Point> points) {
    OverlayGraph g = collect_vertices(hulls, points);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
            if (visible(points[g.nodes[i]], points[g.nodes[j]], g.obstacles)) g.edges.emplace_back(i, j);
        }
    }
    return g;
}

OverlayGraph build_overlay_delaunay(const std::vector<std::vector<NodeIndex>>& hulls, std::span<const Point> points) {
    OverlayGraph g = collect_vertices(hulls, points);
    const std::size_t nv = g.nodes.size();
    std::vector<Point> vp;
    for (NodeIndex v : g.nodes) vp.push_back(points[v]);
    const auto constraints = constraint_edges(g, hulls);

    // Greedy constrained triangulation: constraints first, then shortest pairs that cross nothing.
    std::vector<std::pair<std::size_t, std::size_t>> chosen(constraints.begin(), constraints.end());
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < nv; ++i) {
        for (std::size_t j = i + 1; j < nv; ++j) {
            if (!constraints.count({i, j})) pairs.emplace_back(dist(vp[i], vp[j]), i, j);
        }
    }
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [len, i, j] : pairs) {
        if (passes_through_vertex(vp[i], vp[j], vp)) continue;
        bool crosses = false;
        for (const auto& [a, b] : chosen) {
            if (segments_properly_intersect({vp[i], vp[j]}, {vp[a], vp[b]})) {
                crosses = true;
                break;
            }
        }
        if (!crosses) chosen.emplace_back(i, j);
    }

    // Lawson flips on unconstrained edges until every one is locally Delaunay.
    std::vector<NodeId> dummy_ids(nv);
    for (std::size_t i = 0; i < nv; ++i) dummy_ids[i] = static_cast<NodeId>(i);
    for (std::size_t guard = 0; guard < 50 * nv + 100; ++guard) {
        std::vector<PlanarEdge> pe;
        for (const auto& [a, b] : chosen) pe.push_back({static_cast<NodeIndex>(a), static_cast<NodeIndex>(b)});
        const PlanarGraph pg(dummy_ids, vp, pe);
        bool flipped = false;
        for (std::size_t e = 0; e < chosen.size() && !flipped; ++e) {
            const auto [a, b] = chosen[e];
            if (constraints.count({a, b})) continue;
            const auto ua = static_cast<NodeIndex>(a);
            const auto ub = static_cast<NodeIndex>(b);
            const std::size_t fl = pg.face_left_of(ua, ub);
            const std::size_t fr = pg.face_left_of(ub, ua);
            if (pg.faces()[fl].outer || pg.faces()[fr].outer) continue;
            if (pg.faces()[fl].cycle.size() != 3 || pg.faces()[fr].cycle.size() != 3) continue;
            const NodeIndex c = pg.next_on_face(ua, ub);
            const NodeIndex d = pg.next_on_face(ub, ua);
            if (!segments_properly_intersect({vp[a], vp[b]}, {vp[c], vp[d]})) continue;
            if (!in_circumcircle(vp[a], vp[b], vp[c], vp[d])) continue;
            chosen[e] = {std::min<std::size_t>(c, d), std::max<std::size_t>(c, d)};
            flipped = true;
        }
        if (!flipped) break;
    }

    for (const auto& [a, b] : chosen) {
        if (!visible(vp[a], vp[b], g.obstacles)) continue;  // diagonals through a hull interior
        g.edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

std::vector<Waypoint> overlay_shortest_path(const OverlayGraph& overlay, std::span<const Point> points,
                                            Waypoint from, Waypoint to) {
    if (from.node != kNoNode) from.p = points[from.node];
    if (to.node != kNoNode) to.p = points[to.node];
    if (from.p == to.p) return {from};

    // Vertices: overlay vertices, then temporary endpoints when needed.
    std::vector<Waypoint> verts;
    for (NodeIndex v : overlay.nodes) verts.push_back({points[v], v});
    const std::size_t base = verts.size();
    auto locate = [&](const Waypoint& w) {
        if (w.node != kNoNode) {
            const std::size_t i = overlay.vertex_of(w.node);
            if (i != kNoPosition) return i;
        }
        verts.push_back(w);
        return verts.size() - 1;
    };
    const std::size_t src = locate(from);
    const std::size_t dst = locate(to);

    std::vector<std::vector<std::size_t>> adj(verts.size());
    for (const auto& [a, b] : overlay.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (std::size_t extra = base; extra < verts.size(); ++extra) {
        for (std::size_t o = 0; o < extra; ++o) {
            if (!visible(verts[extra].p, verts[o].p, overlay.obstacles)) continue;
            adj[extra].push_back(o);
            adj[o].push_back(extra);
        }
    }
    if (src < base && dst < base && visible(from.p, to.p, overlay.obstacles)) {
        adj[src].push_back(dst);
        adj[dst].push_back(src);
    }

    std::vector<double> d(verts.size(), std::numeric_limits<double>::infinity());
    std::vector<std::size_t> parent(verts.size(), kNoPosition);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> q;
    d[src] = 0.0;
    q.emplace(0.0, src);
    while (!q.empty()) {
        const auto [dv, v] = q.top();
        q.pop();
        if (dv > d[v]) continue;
        for (std::size_t w : adj[v]) {
            const double nd = dv + dist(verts[v].p, verts[w].p);
            if (nd < d[w] - 1e-12 || (std::abs(nd - d[w]) <= 1e-12 && v < parent[w])) {
                d[w] = nd;
                parent[w] = v;
                q.emplace(nd, w);
            }
        }
    }
    if (!std::isfinite(d[dst])) throw Error(ErrorKind::NoPath, "overlay graph does not connect the endpoints");
    std::vector<Waypoint> out;
    for (std::size_t v = dst; v != kNoPosition; v = parent[v]) {
        out.push_back(verts[v]);
        if (v == src) break;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

double waypoint_length(const std::vector<Waypoint>& w) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) total += dist(w[i].p, w[i + 1].p);
    return total;
}

}  // namespace hybrid
