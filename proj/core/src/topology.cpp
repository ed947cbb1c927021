#include "hybrid/topology.h"

#include "hybrid/errors.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <string>

namespace hybrid {

NodeIndex HybridTopology::index_of(NodeId id) const {
    const auto it = lookup_.find(id);
    if (it == lookup_.end()) {
        throw Error(ErrorKind::Lookup, "unknown node id " + std::to_string(id));
    }
    return it->second;
}

bool HybridTopology::adhoc_adjacent(NodeIndex a, NodeIndex b) const {
    const auto& nbrs = adhoc.at(a);
    return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

std::size_t HybridTopology::adhoc_edge_count() const {
    std::size_t total = 0;
    for (const auto& nbrs : adhoc) total += nbrs.size();
    return total / 2;
}

void HybridTopology::rebuild_lookup() {
    lookup_.clear();
    for (std::size_t i = 0; i < ids.size(); ++i) lookup_.emplace(ids[i], static_cast<NodeIndex>(i));
}

namespace {

struct CellKey {
    std::int64_t cx;
    std::int64_t cy;
    bool operator==(const CellKey&) const = default;
};

struct CellHash {
    std::size_t operator()(const CellKey& k) const noexcept {
        return std::hash<std::int64_t>{}(k.cx * 73856093LL ^ k.cy * 19349663LL);
    }
};

}  // namespace

HybridTopology build_udg_unchecked(const std::map<NodeId, Point>& points) {
    if (points.empty()) throw Error(ErrorKind::InvalidArgument, "empty node set");

    HybridTopology topo;
    topo.ids.reserve(points.size());
    topo.points.reserve(points.size());
    std::set<Point> seen;
    for (const auto& [id, p] : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw Error(ErrorKind::InvalidArgument, "non-finite coordinate for node " + std::to_string(id));
        }
        if (!seen.insert(p).second) {
            throw Error(ErrorKind::InvalidArgument, "duplicate position for node " + std::to_string(id));
        }
        topo.ids.push_back(id);
        topo.points.push_back(p);
    }
    topo.rebuild_lookup();

    // Bucket into unit cells so only the 3x3 neighborhood is scanned.
    std::unordered_map<CellKey, std::vector<NodeIndex>, CellHash> cells;
    auto key_of = [](Point p) {
        return CellKey{static_cast<std::int64_t>(std::floor(p.x)), static_cast<std::int64_t>(std::floor(p.y))};
    };
    for (NodeIndex i = 0; i < topo.points.size(); ++i) cells[key_of(topo.points[i])].push_back(i);

    topo.adhoc.assign(topo.points.size(), {});
    for (NodeIndex i = 0; i < topo.points.size(); ++i) {
        const CellKey k = key_of(topo.points[i]);
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                const auto it = cells.find(CellKey{k.cx + dx, k.cy + dy});
                if (it == cells.end()) continue;
                for (NodeIndex j : it->second) {
                    if (j != i && dist(topo.points[i], topo.points[j]) <= 1.0) topo.adhoc[i].push_back(j);
                }
            }
        }
        std::sort(topo.adhoc[i].begin(), topo.adhoc[i].end());
    }
    return topo;
}

HybridTopology build_udg(const std::map<NodeId, Point>& points) {
    HybridTopology topo = build_udg_unchecked(points);
    if (!is_connected(topo.adhoc)) {
        throw Error(ErrorKind::Connectivity, "unit disk graph is disconnected");
    }
    return topo;
}

bool is_connected(const Adjacency& adjacency) {
    if (adjacency.empty()) return true;
    std::vector<char> seen(adjacency.size(), 0);
    std::vector<NodeIndex> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const NodeIndex v = stack.back();
        stack.pop_back();
        for (NodeIndex w : adjacency[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == adjacency.size();
}

std::vector<NodeIndex> two_hop_neighborhood(const HybridTopology& topo, NodeIndex v) {
    if (v >= topo.size()) throw Error(ErrorKind::Lookup, "node index out of range");
    std::vector<NodeIndex> out;
    for (NodeIndex w : topo.adhoc[v]) {
        out.push_back(w);
        for (NodeIndex x : topo.adhoc[w]) {
            if (x != v) out.push_back(x);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

struct DijkstraResult {
    std::vector<double> dist;
    std::vector<NodeIndex> parent;
};

DijkstraResult dijkstra(std::span<const Point> points, const Adjacency& adjacency, NodeIndex source,
                        NodeIndex stop_at) {
    DijkstraResult r;
    r.dist.assign(adjacency.size(), std::numeric_limits<double>::infinity());
    r.parent.assign(adjacency.size(), kNoNode);
    using Item = std::pair<double, NodeIndex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    r.dist[source] = 0.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
        const auto [d, v] = queue.top();
        queue.pop();
        if (d > r.dist[v]) continue;
        if (v == stop_at) break;
        for (NodeIndex w : adjacency[v]) {
            const double nd = d + dist(points[v], points[w]);
            if (nd < r.dist[w] || (nd == r.dist[w] && v < r.parent[w])) {
                r.dist[w] = nd;
                r.parent[w] = v;
                queue.emplace(nd, w);
            }
        }
    }
    return r;
}

}  // namespace

std::vector<double> shortest_path_lengths(std::span<const Point> points, const Adjacency& adjacency,
                                          NodeIndex source) {
    return dijkstra(points, adjacency, source, kNoNode).dist;
}

std::vector<NodeIndex> shortest_path(std::span<const Point> points, const Adjacency& adjacency,
                                     NodeIndex source, NodeIndex target) {
    const DijkstraResult r = dijkstra(points, adjacency, source, target);
    if (!std::isfinite(r.dist[target])) return {};
    std::vector<NodeIndex> path{target};
    while (path.back() != source) path.push_back(r.parent[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
}

double path_length(std::span<const Point> points, std::span<const NodeIndex> path) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) total += dist(points[path[i]], points[path[i + 1]]);
    return total;
}

}  // namespace hybrid
