#include "hybrid/ldel.h"

#include "hybrid/errors.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>

namespace hybrid {

PlanarGraph::PlanarGraph(std::vector<NodeId> ids, std::vector<Point> points, std::vector<PlanarEdge> edges)
    : ids_(std::move(ids)), points_(std::move(points)), edges_(std::move(edges)) {
    adjacency_.assign(points_.size(), {});
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        auto& e = edges_[i];
        if (e.a == e.b || e.a >= points_.size() || e.b >= points_.size()) {
            throw Error(ErrorKind::InvalidArgument, "bad planar edge");
        }
        if (e.a > e.b) std::swap(e.a, e.b);
        if (!edge_index_.emplace(key(e.a, e.b), i).second) {
            throw Error(ErrorKind::InvalidArgument, "duplicate planar edge");
        }
        adjacency_[e.a].push_back(e.b);
        adjacency_[e.b].push_back(e.a);
    }
    rotation_ = adjacency_;
    for (NodeIndex v = 0; v < points_.size(); ++v) {
        std::sort(adjacency_[v].begin(), adjacency_[v].end());
        const Point c = points_[v];
        std::sort(rotation_[v].begin(), rotation_[v].end(), [&](NodeIndex p, NodeIndex q) {
            const Point dp = points_[p] - c;
            const Point dq = points_[q] - c;
            return std::atan2(dp.y, dp.x) < std::atan2(dq.y, dq.x);
        });
    }
    build_faces();
}

bool PlanarGraph::has_edge(NodeIndex a, NodeIndex b) const {
    if (a > b) std::swap(a, b);
    return edge_index_.count(key(a, b)) != 0;
}

EdgeKind PlanarGraph::edge_kind(NodeIndex a, NodeIndex b) const {
    if (a > b) std::swap(a, b);
    const auto it = edge_index_.find(key(a, b));
    if (it == edge_index_.end()) throw Error(ErrorKind::Lookup, "no such edge");
    return edges_[it->second].kind;
}

std::size_t PlanarGraph::face_left_of(NodeIndex a, NodeIndex b) const {
    const auto it = half_edge_face_.find(key(a, b));
    if (it == half_edge_face_.end()) throw Error(ErrorKind::Lookup, "no such half-edge");
    return it->second;
}

NodeIndex PlanarGraph::next_on_face(NodeIndex a, NodeIndex b) const {
    const auto& rot = rotation_[b];
    const auto it = std::find(rot.begin(), rot.end(), a);
    if (it == rot.end()) throw Error(ErrorKind::EmbeddingCorruption, "half-edge missing from rotation");
    // The neighbor just clockwise of a around b keeps the face on the left.
    return it == rot.begin() ? rot.back() : *(it - 1);
}

void PlanarGraph::build_faces() {
    faces_.clear();
    half_edge_face_.clear();
    for (NodeIndex u = 0; u < points_.size(); ++u) {
        for (NodeIndex v : rotation_[u]) {
            if (half_edge_face_.count(key(u, v))) continue;
            Face face;
            NodeIndex a = u;
            NodeIndex b = v;
            const std::size_t id = faces_.size();
            std::size_t guard = 0;
            do {
                if (!half_edge_face_.emplace(key(a, b), id).second) {
                    throw Error(ErrorKind::EmbeddingCorruption, "half-edge visited twice");
                }
                face.cycle.push_back(a);
                const NodeIndex c = next_on_face(a, b);
                a = b;
                b = c;
                if (++guard > 2 * edges_.size() + 2) {
                    throw Error(ErrorKind::EmbeddingCorruption, "face walk does not close");
                }
            } while (a != u || b != v);
            std::vector<Point> pts;
            pts.reserve(face.cycle.size());
            for (NodeIndex x : face.cycle) pts.push_back(points_[x]);
            face.signed_area = signed_area(pts);
            faces_.push_back(std::move(face));
        }
    }
    if (faces_.empty()) return;
    outer_face_ = 0;
    for (std::size_t i = 1; i < faces_.size(); ++i) {
        if (faces_[i].signed_area < faces_[outer_face_].signed_area) outer_face_ = i;
    }
    faces_[outer_face_].outer = true;
}

std::vector<std::pair<NodeIndex, NodeIndex>> local_triangle_acceptance(const HybridTopology& topo, NodeIndex u) {
    const std::vector<NodeIndex> hood = two_hop_neighborhood(topo, u);
    const auto& nbrs = topo.adhoc[u];
    const auto& pts = topo.points;
    std::vector<std::pair<NodeIndex, NodeIndex>> out;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
            const NodeIndex v = nbrs[i];
            const NodeIndex w = nbrs[j];
            if (!topo.adhoc_adjacent(v, w)) continue;
            if (orientation(pts[u], pts[v], pts[w]) == Orientation::Collinear) continue;
            const Point c = circumcenter(pts[u], pts[v], pts[w]);
            const double r = dist(c, pts[u]);
            bool empty = true;
            for (NodeIndex x : hood) {
                if (x == v || x == w) continue;
                if (dist(c, pts[x]) > r + 1e-9) continue;
                if (in_circumcircle(pts[u], pts[v], pts[w], pts[x])) {
                    empty = false;
                    break;
                }
            }
            if (empty) out.emplace_back(v, w);
        }
    }
    return out;
}

std::vector<NodeIndex> local_gabriel_neighbors(const HybridTopology& topo, NodeIndex u) {
    std::vector<NodeIndex> out;
    const auto& pts = topo.points;
    for (NodeIndex v : topo.adhoc[u]) {
        bool empty = true;
        const Point mid = 0.5 * (pts[u] + pts[v]);
        const double r = 0.5 * dist(pts[u], pts[v]);
        // Anything inside the diametral disk is within |uv| of u, hence a neighbor.
        for (NodeIndex x : topo.adhoc[u]) {
            if (x == v) continue;
            if (dist(mid, pts[x]) < r - kGeomEpsilon) {
                empty = false;
                break;
            }
        }
        if (empty) out.push_back(v);
    }
    return out;
}

namespace {

std::uint64_t edge_key(NodeIndex a, NodeIndex b) {
    if (a > b) std::swap(a, b);
    return (std::uint64_t{a} << 32) | b;
}

struct Candidate {
    NodeIndex a;
    NodeIndex b;
    bool gabriel = false;
    double support_radius = std::numeric_limits<double>::infinity();
};

}  // namespace

PlanarGraph build_ldel2(const HybridTopology& topo) {
    if (!is_connected(topo.adhoc)) throw Error(ErrorKind::Connectivity, "unit disk graph is disconnected");
    const std::size_t n = topo.size();
    const auto& pts = topo.points;

    std::vector<std::set<std::pair<NodeIndex, NodeIndex>>> accepted(n);
    for (NodeIndex u = 0; u < n; ++u) {
        const auto local = local_triangle_acceptance(topo, u);
        accepted[u].insert(local.begin(), local.end());
    }

    std::map<std::uint64_t, Candidate> candidates;
    auto touch = [&](NodeIndex a, NodeIndex b) -> Candidate& {
        if (a > b) std::swap(a, b);
        auto [it, inserted] = candidates.try_emplace(edge_key(a, b), Candidate{a, b});
        return it->second;
    };

    for (NodeIndex u = 0; u < n; ++u) {
        for (const auto& [v, w] : accepted[u]) {
            if (u > v) continue;  // visit each triangle from its smallest corner
            if (!accepted[v].count({u, w}) || !accepted[w].count({u, v})) continue;
            const double r = circumradius(pts[u], pts[v], pts[w]);
            for (auto [p, q] : {std::pair{u, v}, std::pair{v, w}, std::pair{u, w}}) {
                Candidate& c = touch(p, q);
                c.support_radius = std::min(c.support_radius, r);
            }
        }
        for (NodeIndex v : local_gabriel_neighbors(topo, u)) touch(u, v).gabriel = true;
    }

    // Crossing resolution. Two crossing unit edges always have an endpoint adjacent
    // to both endpoints of the other, so scanning edges at UDG neighbors suffices.
    std::vector<std::vector<std::uint64_t>> incident(n);
    for (const auto& [k, c] : candidates) {
        incident[c.a].push_back(k);
        incident[c.b].push_back(k);
    }
    auto loses = [&](const Candidate& x, const Candidate& y) {
        // true when x is discarded in favour of y
        if (x.gabriel != y.gabriel) return !x.gabriel;
        if (x.support_radius != y.support_radius) return x.support_radius > y.support_radius;
        return edge_key(x.a, x.b) > edge_key(y.a, y.b);
    };
    std::set<std::uint64_t> removed;
    for (const auto& [k, c] : candidates) {
        std::set<std::uint64_t> nearby;
        for (NodeIndex end : {c.a, c.b}) {
            for (NodeIndex x : topo.adhoc[end]) nearby.insert(incident[x].begin(), incident[x].end());
        }
        for (std::uint64_t other_key : nearby) {
            if (other_key <= k) continue;
            const Candidate& o = candidates.at(other_key);
            if (!segments_properly_intersect({pts[c.a], pts[c.b]}, {pts[o.a], pts[o.b]})) continue;
            if (c.gabriel && o.gabriel) {
                throw Error(ErrorKind::GeometryInconsistency, "two Gabriel edges cross");
            }
            removed.insert(loses(c, o) ? k : other_key);
        }
    }

    std::vector<PlanarEdge> edges;
    for (const auto& [k, c] : candidates) {
        if (removed.count(k)) continue;
        edges.push_back({c.a, c.b, c.gabriel ? EdgeKind::Gabriel : EdgeKind::Triangle});
    }
    return PlanarGraph(topo.ids, topo.points, std::move(edges));
}

std::vector<std::vector<NodeIndex>> faces_of(const PlanarGraph& g) {
    std::vector<std::vector<NodeIndex>> out;
    for (const Face& f : g.faces()) {
        if (!f.outer) out.push_back(f.cycle);
    }
    if (!g.faces().empty()) out.push_back(g.faces()[g.outer_face()].cycle);
    return out;
}

std::size_t count_crossings(const PlanarGraph& g) {
    const auto& e = g.edges();
    const auto& p = g.points();
    std::size_t count = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        for (std::size_t j = i + 1; j < e.size(); ++j) {
            if (segments_properly_intersect({p[e[i].a], p[e[i].b]}, {p[e[j].a], p[e[j].b]})) ++count;
        }
    }
    return count;
}

}  // namespace hybrid
