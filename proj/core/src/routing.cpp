#include "hybrid/routing.h"

#include "hybrid/errors.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace hybrid {

std::string_view to_string(RouteCase c) {
    switch (c) {
        case RouteCase::Visible: return "visible";
        case RouteCase::Case1: return "case1";
        case RouteCase::Case2: return "case2";
        case RouteCase::Case3: return "case3";
        case RouteCase::Case4: return "case4";
        case RouteCase::Case5: return "case5";
    }
    return "unknown";
}

std::string_view to_string(Backend b) { return b == Backend::Visibility ? "visibility" : "overlay-delaunay"; }

Backend parse_backend(std::string_view s) {
    if (s == "visibility") return Backend::Visibility;
    if (s == "overlay-delaunay") return Backend::OverlayDelaunay;
    throw Error(ErrorKind::InvalidArgument, "unknown backend '" + std::string(s) + "'");
}

namespace {

// One corridor item: the vertices of a face (or an edge lying on the segment)
// and the gate through which the segment leaves it.
struct CorridorItem {
    std::size_t face = kNoPosition;
    std::vector<NodeIndex> vertices;
    bool gate_is_vertex = false;
    NodeIndex w = kNoNode;  // vertex gate
    NodeIndex a = kNoNode;  // edge gate, left of the segment
    NodeIndex b = kNoNode;  // edge gate, right of the segment
};

bool is_triangle(const PlanarGraph& g, std::size_t face) {
    const Face& f = g.faces()[face];
    return !f.outer && f.cycle.size() == 3;
}

bool contains(const std::vector<NodeIndex>& v, NodeIndex x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

ChewResult chew_route(const PlanarGraph& g, NodeIndex s, NodeIndex t) {
    if (s >= g.vertex_count() || t >= g.vertex_count()) throw Error(ErrorKind::Lookup, "route endpoint not in graph");
    ChewResult res;
    res.path.push_back(s);
    if (s == t) {
        res.reached = true;
        return res;
    }
    const auto& pts = g.points();
    const Point S = pts[s];
    const Point T = pts[t];

    std::vector<CorridorItem> items;
    bool at_vertex = true;
    NodeIndex v = s;
    NodeIndex ea = kNoNode;
    NodeIndex eb = kNoNode;
    bool done = false;
    for (std::size_t guard = 0; !done && guard < 4 * g.edges().size() + 8; ++guard) {
        if (at_vertex) {
            const auto rot = g.rotation(v);
            if (rot.empty()) throw Error(ErrorKind::EmbeddingCorruption, "isolated vertex on a route");
            const Point dir = T - pts[v];
            bool through = false;
            for (NodeIndex n : rot) {
                const Point dn = pts[n] - pts[v];
                if (orientation(pts[v], T, pts[n]) == Orientation::Collinear && dot(dn, dir) > 0 &&
                    dot(dn, dn) <= dot(dir, dir) + 1e-12) {
                    CorridorItem it;
                    it.vertices = {v, n};
                    it.gate_is_vertex = true;
                    it.w = n;
                    items.push_back(it);
                    v = n;
                    through = true;
                    break;
                }
            }
            if (through) {
                if (v == t) done = true;
                continue;
            }
            // Wedge between consecutive rotation neighbours containing the direction to t.
            const double ang = std::atan2(dir.y, dir.x);
            std::size_t idx = rot.size() - 1;
            for (std::size_t i = 0; i < rot.size(); ++i) {
                const Point dn = pts[rot[i]] - pts[v];
                if (std::atan2(dn.y, dn.x) < ang) idx = i;
            }
            const NodeIndex right = rot[idx];
            const std::size_t face = g.face_left_of(v, right);
            if (!is_triangle(g, face)) {
                res.blocking_face = face;
                break;
            }
            const NodeIndex left = g.next_on_face(v, right);
            CorridorItem it;
            it.face = face;
            it.vertices = {v, right, left};
            it.a = left;
            it.b = right;
            items.push_back(it);
            ea = left;
            eb = right;
            at_vertex = false;
        } else {
            const std::size_t face = g.face_left_of(ea, eb);
            if (!is_triangle(g, face)) {
                res.blocking_face = face;
                break;
            }
            const NodeIndex c = g.next_on_face(ea, eb);
            CorridorItem it;
            it.face = face;
            it.vertices = {ea, eb, c};
            const Orientation o = orientation(S, T, pts[c]);
            if (c == t || o == Orientation::Collinear) {
                it.gate_is_vertex = true;
                it.w = c;
                items.push_back(it);
                v = c;
                at_vertex = true;
                if (c == t) done = true;
            } else if (o == Orientation::Left) {
                it.a = c;
                it.b = eb;
                items.push_back(it);
                ea = c;
            } else {
                it.a = ea;
                it.b = c;
                items.push_back(it);
                eb = c;
            }
        }
    }
    for (const auto& it : items) {
        if (it.face != kNoPosition) res.corridor.push_back(it.face);
    }
    if (res.blocking_face != kNoPosition) res.corridor.push_back(res.blocking_face);
    if (!done && res.blocking_face == kNoPosition) throw Error(ErrorKind::EmbeddingCorruption, "corridor walk diverged");

    const std::vector<NodeIndex>* blocking =
        res.blocking_face == kNoPosition ? nullptr : &g.faces()[res.blocking_face].cycle;
    NodeIndex u = s;
    std::size_t from = 0;
    for (std::size_t guard = 0; guard <= items.size() + 2; ++guard) {
        if (u == t) {
            res.reached = true;
            return res;
        }
        if (blocking && contains(*blocking, u)) {
            res.hole_node = u;
            return res;
        }
        std::size_t best = kNoPosition;
        for (std::size_t i = from; i < items.size(); ++i) {
            if (contains(items[i].vertices, u)) best = i;
        }
        if (best == kNoPosition) throw Error(ErrorKind::ProtocolBug, "route left its corridor");
        const CorridorItem& it = items[best];
        NodeIndex next;
        if (it.gate_is_vertex) {
            next = it.w;
        } else {
            const Orientation side = orientation(S, T, pts[u]);
            if (side == Orientation::Left) {
                next = it.a;
            } else if (side == Orientation::Right) {
                next = it.b;
            } else {
                // On the segment: follow the shorter arc of the triangle's circumcircle.
                const Point c = circumcenter(pts[it.vertices[0]], pts[it.vertices[1]], pts[it.vertices[2]]);
                next = orientation(S, T, c) == Orientation::Left ? it.b : it.a;
            }
        }
        if (next == u) throw Error(ErrorKind::ProtocolBug, "route stalls");
        res.path.push_back(next);
        u = next;
        from = best;
    }
    throw Error(ErrorKind::ProtocolBug, "route does not terminate");
}

// ---------------------------------------------------------------------------

Router::Router(const PlanarGraph& g, const HybridTopology& topo, const HoleAbstraction& abstraction, Backend backend)
    : g_(g), topo_(topo), abs_(abstraction), backend_(backend) {
    const auto& pts = g_.points();
    std::vector<std::vector<NodeIndex>> hull_lists;
    for (const auto& h : abs_.hulls) hull_lists.push_back(h.hull_nodes);
    overlay_ = backend_ == Backend::Visibility ? build_visibility_graph(hull_lists, pts)
                                                : build_overlay_delaunay(hull_lists, pts);
    hull_polys_ = abs_.hull_polygons(pts);
    for (const auto& h : abs_.hulls) {
        std::vector<Polygon> polys;
        for (const auto& bay : h.bays) {
            Polygon p;
            for (NodeIndex v : bay.path()) p.vertices.push_back(pts[v]);
            polys.push_back(std::move(p));
        }
        bay_polys_.push_back(std::move(polys));
    }
    face_ring_.assign(g_.faces().size(), -1);
    for (const auto& r : abs_.rings) {
        if (r.face != kNoPosition) face_ring_[r.face] = r.ring_id;
    }
}

int Router::ring_of_face(std::size_t face) const { return face < face_ring_.size() ? face_ring_[face] : -1; }

int Router::hull_containing(NodeIndex v) const {
    for (std::size_t h = 0; h < hull_polys_.size(); ++h) {
        if (point_in_polygon_strict(g_.points()[v], hull_polys_[h].vertices)) return static_cast<int>(h);
    }
    return -1;
}

std::pair<int, int> Router::bay_of(NodeIndex v) const {
    const int h = hull_containing(v);
    if (h < 0) return {-1, -1};
    const auto& bays = abs_.hulls[h].bays;
    for (std::size_t b = 0; b < bays.size(); ++b) {
        if (contains(bays[b].inner, v)) return {h, static_cast<int>(b)};
    }
    for (std::size_t b = 0; b < bays.size(); ++b) {
        if (point_in_polygon_strict(g_.points()[v], bay_polys_[h][b].vertices)) return {h, static_cast<int>(b)};
    }
    throw Error(ErrorKind::Dispatch, "node inside a convex hull but in no bay");
}

Router::Leg Router::walk_ring_to(int ring, NodeIndex from, NodeIndex to) const {
    Leg leg;
    const auto& m = abs_.rings.at(ring).members;
    const std::size_t k = m.size();
    const bool closing = abs_.rings.at(ring).virtual_closing;
    const auto pf = std::find(m.begin(), m.end(), from);
    if (pf == m.end()) return leg;
    const std::size_t start = static_cast<std::size_t>(pf - m.begin());
    double best = std::numeric_limits<double>::infinity();
    for (int dirn : {1, -1}) {
        std::vector<NodeIndex> path{from};
        double len = 0.0;
        std::size_t pos = start;
        for (std::size_t step = 0; step < k; ++step) {
            const std::size_t next = dirn > 0 ? (pos + 1) % k : (pos + k - 1) % k;
            // A virtual closing edge is no ad hoc link.
            if (closing && ((dirn > 0 && next == 0) || (dirn < 0 && pos == 0))) break;
            len += dist(g_.points()[m[pos]], g_.points()[m[next]]);
            path.push_back(m[next]);
            pos = next;
            if (m[pos] == to) break;
        }
        if (path.back() == to && len < best) {
            best = len;
            leg.path = path;
            leg.ok = true;
        }
    }
    if (from == to) {
        leg.path = {from};
        leg.ok = true;
    }
    return leg;
}

Router::Leg Router::robust_leg(NodeIndex u, NodeIndex v) const {
    Leg leg;
    leg.path = {u};
    NodeIndex cur = u;
    for (int attempt = 0; attempt < 12; ++attempt) {
        const ChewResult c = chew_route(g_, cur, v);
        leg.path.insert(leg.path.end(), c.path.begin() + 1, c.path.end());
        if (c.reached) {
            leg.ok = true;
            return leg;
        }
        const int ring = ring_of_face(c.blocking_face);
        if (ring < 0) return leg;
        const NodeIndex h = c.hole_node;
        // Walk along the obstructing ring to the node with a clear corridor minimizing walk + remaining distance.
        const auto& m = abs_.rings[ring].members;
        std::vector<std::tuple<double, NodeIndex>> candidates;
        for (NodeIndex w : m) {
            if (w == h) continue;
            const Leg walk = walk_ring_to(ring, h, w);
            if (!walk.ok) continue;
            candidates.emplace_back(path_length(g_.points(), walk.path) + dist(g_.points()[w], g_.points()[v]), w);
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        NodeIndex chosen = kNoNode;
        for (const auto& [score, w] : candidates) {
            if (chew_route(g_, w, v).reached) {
                chosen = w;
                break;
            }
        }
        if (chosen == kNoNode) {
            // No single detour clears the view; move to the ring node closest to the target and retry.
            double bestd = std::numeric_limits<double>::infinity();
            for (const auto& [score, w] : candidates) {
                const double d = dist(g_.points()[w], g_.points()[v]);
                if (d < bestd) {
                    bestd = d;
                    chosen = w;
                }
            }
            if (chosen == kNoNode) return leg;
        }
        const Leg walk = walk_ring_to(ring, h, chosen);
        leg.path.insert(leg.path.end(), walk.path.begin() + 1, walk.path.end());
        cur = chosen;
    }
    return leg;
}

std::vector<NodeIndex> Router::bay_leg(NodeIndex s, NodeIndex t, int hull, int bay, std::size_t& extreme) const {
    extreme = 0;
    const ChewResult direct = chew_route(g_, s, t);
    if (direct.reached) return direct.path;

    const auto& pts = g_.points();
    const HullAbstraction& ha = abs_.hulls[hull];
    const Bay& b = ha.bays[bay];
    const std::vector<NodeIndex> bp = b.path();
    const std::vector<NodeIndex>& ds = ha.dominating_sets.at(bay);

    // First and last crossing of segment st with the bay boundary.
    std::size_t edge_s = kNoPosition;
    std::size_t edge_t = kNoPosition;
    double first = 2.0;
    double last = -1.0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double p = segment_intersection_param({pts[s], pts[t]}, {pts[bp[i]], pts[bp[i + 1]]});
        if (p < 0.0) continue;
        if (p < first) {
            first = p;
            edge_s = i;
        }
        if (p > last) {
            last = p;
            edge_t = i;
        }
    }
    if (edge_s == kNoPosition || ds.empty()) {
        const Leg leg = robust_leg(s, t);
        if (!leg.ok) throw Error(ErrorKind::NoPath, "bay route failed");
        return leg.path;
    }
    auto nearest_ds = [&](std::size_t edge) {
        std::size_t best_idx = kNoPosition;
        std::size_t best_hops = std::numeric_limits<std::size_t>::max();
        for (NodeIndex d : ds) {
            for (std::size_t j = 0; j < bp.size(); ++j) {
                if (bp[j] != d) continue;
                const std::size_t hops = std::min(j > edge ? j - edge : edge - j, j > edge + 1 ? j - edge - 1 : edge + 1 - j);
                if (hops < best_hops ||
                    (hops == best_hops && best_idx != kNoPosition && topo_.ids[d] < topo_.ids[bp[best_idx]])) {
                    best_hops = hops;
                    best_idx = j;
                }
            }
        }
        return best_idx;
    };
    const std::size_t i1 = nearest_ds(edge_s);
    const std::size_t it = nearest_ds(edge_t);

    // Extreme points: convex chain of the boundary stretch between P1 and Pt on the bay side.
    const std::size_t lo = std::min(i1, it);
    const std::size_t hi = std::max(i1, it);
    std::vector<NodeIndex> side{bp[lo], bp[hi]};
    for (std::size_t j = lo + 1; j < hi; ++j) {
        if (orientation(pts[bp[lo]], pts[bp[hi]], pts[bp[j]]) == Orientation::Right) side.push_back(bp[j]);
    }
    std::vector<NodeIndex> chain;
    if (lo == hi) {
        chain = {bp[lo]};
    } else if (side.size() < 3) {
        chain = {bp[lo], bp[hi]};
        if (i1 > it) std::reverse(chain.begin(), chain.end());
    } else {
        const std::vector<NodeIndex> hull_side = hull_of_nodes(pts, side);
        const auto start = std::find(hull_side.begin(), hull_side.end(), bp[lo]);
        std::size_t pos = static_cast<std::size_t>(start - hull_side.begin());
        for (std::size_t step = 0; step < hull_side.size(); ++step) {
            chain.push_back(hull_side[pos]);
            if (hull_side[pos] == bp[hi]) break;
            pos = (pos + 1) % hull_side.size();
        }
        if (i1 > it) std::reverse(chain.begin(), chain.end());
    }

    std::size_t et = chain.size() - 1;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (chew_route(g_, chain[i], t).reached) {
            et = i;
            break;
        }
    }
    extreme = et + 1;

    std::vector<NodeIndex> path = direct.path;
    const NodeIndex h0 = direct.hole_node;
    const Leg to_p1 = walk_ring_to(ha.ring_id, h0, chain[0]);
    const Leg approach = to_p1.ok ? to_p1 : robust_leg(h0, chain[0]);
    if (!approach.ok) throw Error(ErrorKind::NoPath, "bay route cannot reach its first extreme point");
    path.insert(path.end(), approach.path.begin() + 1, approach.path.end());
    for (std::size_t i = 0; i < et; ++i) {
        const Leg leg = robust_leg(chain[i], chain[i + 1]);
        if (!leg.ok) throw Error(ErrorKind::NoPath, "bay route blocked between extreme points");
        path.insert(path.end(), leg.path.begin() + 1, leg.path.end());
    }
    const Leg tail = robust_leg(chain[et], t);
    if (!tail.ok) throw Error(ErrorKind::NoPath, "bay route blocked before the target");
    path.insert(path.end(), tail.path.begin() + 1, tail.path.end());
    return path;
}

std::vector<NodeIndex> Router::case1(NodeIndex s, NodeIndex t, std::vector<double>& legs, bool& visible_direct) const {
    const auto& pts = g_.points();
    const ChewResult direct = chew_route(g_, s, t);
    visible_direct = direct.reached;
    if (direct.reached) return direct.path;

    const NodeIndex h0 = direct.hole_node;
    const int ring = ring_of_face(direct.blocking_face);

    // Hull abstraction responsible for h0: its own hole, or the outer hole whose pocket contains it.
    int hull = -1;
    if (ring >= 0 && abs_.rings[ring].kind == RingKind::InnerHole) {
        for (std::size_t h = 0; h < abs_.hulls.size(); ++h) {
            if (abs_.hulls[h].ring_id == ring) hull = static_cast<int>(h);
        }
    } else {
        for (std::size_t h = 0; h < abs_.hulls.size() && hull < 0; ++h) {
            const auto& r = abs_.rings[abs_.hulls[h].ring_id];
            if (r.kind == RingKind::OuterHole && contains(r.members, h0)) hull = static_cast<int>(h);
        }
    }
    if (hull < 0) {
        const Leg leg = robust_leg(s, t);
        if (!leg.ok) throw Error(ErrorKind::NoPath, "no route around the outer boundary");
        legs.push_back(dist(pts[s], pts[t]));
        return leg.path;
    }

    const HullAbstraction& ha = abs_.hulls[hull];
    std::vector<NodeIndex> exits;
    if (contains(ha.hull_nodes, h0)) {
        exits = {h0};
    } else {
        for (const auto& bay : ha.bays) {
            if (contains(bay.inner, h0)) {
                exits = {bay.hull_a, bay.hull_b};
                break;
            }
        }
    }
    if (exits.empty()) throw Error(ErrorKind::EmbeddingCorruption, "hole node without neighbouring hull nodes");

    double best = std::numeric_limits<double>::infinity();
    std::vector<NodeIndex> best_walk;
    std::vector<Waypoint> best_way;
    for (NodeIndex c : exits) {
        const Leg walk = walk_ring_to(ha.ring_id, h0, c);
        if (!walk.ok) continue;
        const auto way = overlay_shortest_path(overlay_, pts, {pts[c], c}, {pts[t], t});
        const double total = path_length(pts, walk.path) + waypoint_length(way);
        if (total < best) {
            best = total;
            best_walk = walk.path;
            best_way = way;
        }
    }
    if (best_way.empty()) throw Error(ErrorKind::NoPath, "no hull node reachable along the ring");

    std::vector<NodeIndex> path = direct.path;
    path.insert(path.end(), best_walk.begin() + 1, best_walk.end());
    for (std::size_t i = 0; i + 1 < best_way.size(); ++i) {
        legs.push_back(dist(best_way[i].p, best_way[i + 1].p));
        const Leg leg = robust_leg(best_way[i].node, best_way[i + 1].node);
        if (!leg.ok) throw Error(ErrorKind::NoPath, "waypoint leg blocked");
        path.insert(path.end(), leg.path.begin() + 1, leg.path.end());
    }
    return path;
}

RouteResult Router::route_bay(NodeIndex s, NodeIndex t) const {
    const auto [hs, bs] = bay_of(s);
    const auto [ht, bt] = bay_of(t);
    if (hs < 0 || hs != ht || bs != bt) throw Error(ErrorKind::Dispatch, "case5: endpoints are not in one bay");
    RouteResult r;
    r.case_taken = RouteCase::Case5;
    std::size_t extreme = 0;
    r.path_index = s == t ? std::vector<NodeIndex>{s} : bay_leg(s, t, hs, bs, extreme);
    r.extreme_points = extreme;
    r.bound = (2.0 + static_cast<double>(extreme)) * kChewBound;
    finish(r, s, t);
    return r;
}

RouteResult Router::route(NodeIndex s, NodeIndex t) const {
    RouteResult r;
    if (s == t) {
        r.path_index = {s};
        r.case_taken = RouteCase::Visible;
        r.bound = kChewBound;
        finish(r, s, t);
        return r;
    }
    const auto& pts = g_.points();
    const double case1_bound = backend_ == Backend::Visibility ? kVisibilityBound : kOverlayDelaunayBound;
    const ChewResult direct = chew_route(g_, s, t);
    if (direct.reached) {
        r.path_index = direct.path;
        r.case_taken = RouteCase::Visible;
        r.bound = kChewBound;
        finish(r, s, t);
        return r;
    }
    const auto [hs, bs] = bay_of(s);
    const auto [ht, bt] = bay_of(t);
    bool vis = false;
    try {
        if (hs < 0 && ht < 0) {
            r.case_taken = RouteCase::Case1;
            r.path_index = case1(s, t, r.leg_lengths, vis);
            r.bound = case1_bound;
        } else if (hs >= 0 && hs == ht && bs == bt) {
            RouteResult b = route_bay(s, t);
            return b;
        } else {
            // Leave the source bay and enter the target bay through the hull nodes
            // minimizing the bay detours plus the overlay distance between them.
            r.case_taken = hs >= 0 && ht >= 0 ? RouteCase::Case4 : (hs >= 0 ? RouteCase::Case2 : RouteCase::Case3);
            std::vector<NodeIndex> xs{s};
            std::vector<NodeIndex> ys{t};
            if (hs >= 0) xs = {abs_.hulls[hs].bays[bs].hull_a, abs_.hulls[hs].bays[bs].hull_b};
            if (ht >= 0) ys = {abs_.hulls[ht].bays[bt].hull_a, abs_.hulls[ht].bays[bt].hull_b};
            NodeIndex x = kNoNode;
            NodeIndex y = kNoNode;
            double best_cost = std::numeric_limits<double>::infinity();
            for (NodeIndex cx : xs) {
                for (NodeIndex cy : ys) {
                    double mid = 0.0;
                    if (cx != cy) {
                        try {
                            mid = waypoint_length(overlay_shortest_path(overlay_, pts, {pts[cx], cx}, {pts[cy], cy}));
                        } catch (const Error& e) {
                            if (e.kind() != ErrorKind::NoPath) throw;
                            continue;
                        }
                    }
                    const double cost = dist(pts[s], pts[cx]) + mid + dist(pts[cy], pts[t]);
                    if (cost < best_cost) {
                        best_cost = cost;
                        x = cx;
                        y = cy;
                    }
                }
            }
            if (x == kNoNode) throw Error(ErrorKind::NoPath, "no overlay connection between the bays");
            std::vector<NodeIndex> path{s};
            std::size_t e1 = 0;
            std::size_t e2 = 0;
            if (hs >= 0) {
                const auto p = bay_leg(s, x, hs, bs, e1);
                path.insert(path.end(), p.begin() + 1, p.end());
            }
            const auto mid = case1(x, y, r.leg_lengths, vis);
            path.insert(path.end(), mid.begin() + 1, mid.end());
            if (ht >= 0) {
                const auto p = bay_leg(y, t, ht, bt, e2);
                path.insert(path.end(), p.begin() + 1, p.end());
            }
            r.path_index = std::move(path);
            r.extreme_points = e1 + e2;
            r.bound = 0.0;
        }
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(to_string(r.case_taken)) + " route " + std::to_string(topo_.ids[s]) + "->" +
                                  std::to_string(topo_.ids[t]) + ": " + e.what());
    }
    finish(r, s, t);
    return r;
}

RouteResult Router::route(RoundEngine& engine, NodeId s, NodeId t) const {
    if (engine.in_phase()) throw Error(ErrorKind::NotReady, "route query during a protocol phase");
    const NodeIndex si = topo_.index_of(s);
    const NodeIndex ti = topo_.index_of(t);
    std::int64_t lr = 0;
    if (si != ti) {
        if (!engine.knows(si, ti)) throw Error(ErrorKind::IllegalSend, "source does not know the destination id");
        // Ask t for its position over the long-range link.
        engine.send(si, ti, Channel::LongRange, "position-request");
        engine.step_round([&](NodeIndex v, std::span<const Message> inbox) {
            for (const Message& m : inbox) {
                if (m.tag == "position-request") {
                    Payload p;
                    p.put(topo_.points[v]);
                    engine.send(v, m.src_index, Channel::LongRange, "position-reply", std::move(p));
                }
            }
        });
        engine.step_round([](NodeIndex, std::span<const Message>) {});
        lr = 2;
    }
    RouteResult r = route(si, ti);
    r.longrange_msgs = lr;
    r.rounds_used = (si == ti ? 0 : 2) + static_cast<std::int64_t>(r.path_index.size()) - 1;
    return r;
}

void Router::finish(RouteResult& r, NodeIndex s, NodeIndex t) const {
    const auto& pts = g_.points();
    for (std::size_t i = 0; i + 1 < r.path_index.size(); ++i) {
        if (!g_.has_edge(r.path_index[i], r.path_index[i + 1])) {
            throw Error(ErrorKind::ProtocolBug, "route uses a link outside LDel2");
        }
    }
    if (r.path_index.empty() || r.path_index.front() != s || r.path_index.back() != t) {
        throw Error(ErrorKind::ProtocolBug, "route does not connect its endpoints");
    }
    r.s = topo_.ids[s];
    r.t = topo_.ids[t];
    r.path.clear();
    for (NodeIndex v : r.path_index) r.path.push_back(topo_.ids[v]);
    r.euclidean_length = path_length(pts, r.path_index);
    r.straight_line = dist(pts[s], pts[t]);
    r.udg_shortest = s == t ? 0.0 : shortest_path_lengths(topo_.points, topo_.adhoc, s)[t];
    r.competitive_ratio = r.udg_shortest > 0 ? r.euclidean_length / r.udg_shortest : 1.0;
    r.rounds_used = 2 + static_cast<std::int64_t>(r.path_index.size()) - 1;
    r.longrange_msgs = 2;
    switch (r.case_taken) {
        case RouteCase::Visible:
            r.within_bound = r.euclidean_length <= kChewBound * r.straight_line + 1e-9;
            break;
        case RouteCase::Case1:
        case RouteCase::Case5:
            r.within_bound = r.competitive_ratio <= r.bound + 1e-9;
            break;
        default:
            r.within_bound = true;
    }
}

CompetitivenessReport measure_competitiveness(const HybridTopology& topo, std::vector<RouteResult>& results) {
    std::map<RouteCase, CaseStats> stats;
    CompetitivenessReport rep;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    for (auto& r : results) {
        const NodeIndex s = topo.index_of(r.s);
        const NodeIndex t = topo.index_of(r.t);
        r.udg_shortest = s == t ? 0.0 : shortest_path_lengths(topo.points, topo.adhoc, s)[t];
        r.competitive_ratio = r.udg_shortest > 0 ? r.euclidean_length / r.udg_shortest : 1.0;
        auto& cs = stats[r.case_taken];
        cs.count += 1;
        cs.max_ratio = std::max(cs.max_ratio, r.competitive_ratio);
        cs.mean_ratio += r.competitive_ratio;
        if (!r.within_bound) cs.violations += 1;
        rep.min_ratio = std::min(rep.min_ratio, r.competitive_ratio);
    }
    for (auto& [c, cs] : stats) {
        if (cs.count) cs.mean_ratio /= static_cast<double>(cs.count);
        rep.per_case.emplace_back(c, cs);
    }
    if (results.empty()) rep.min_ratio = 1.0;
    return rep;
}

}  // namespace hybrid
