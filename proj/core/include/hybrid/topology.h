#pragma once

#include "hybrid/geometry.h"

#include <cstdint>
#include <limits>
#include <map>
#include <unordered_map>
#include <vector>

namespace hybrid {

/// External identity of a node (a phone number in the model).
using NodeId = std::int64_t;
/// Dense position of a node inside one topology; index order equals NodeId order.
using NodeIndex = std::uint32_t;

inline constexpr NodeIndex kNoNode = std::numeric_limits<NodeIndex>::max();

using Adjacency = std::vector<std::vector<NodeIndex>>;

/// Node set plus unit-disk ad hoc links. The knowledge relation E starts as
/// the symmetric closure of the ad hoc links and is evolved by RoundEngine.
struct HybridTopology {
    std::vector<NodeId> ids;
    std::vector<Point> points;
    Adjacency adhoc;  // sorted neighbor lists

    std::size_t size() const { return ids.size(); }
    NodeIndex index_of(NodeId id) const;
    bool contains(NodeId id) const { return lookup_.count(id) != 0; }
    bool adhoc_adjacent(NodeIndex a, NodeIndex b) const;
    std::size_t adhoc_edge_count() const;

    void rebuild_lookup();

private:
    std::unordered_map<NodeId, NodeIndex> lookup_;
};

/// Unit disk graph over the given nodes. Throws Connectivity when the graph
/// is disconnected and InvalidArgument on empty, non-finite or duplicate input.
HybridTopology build_udg(const std::map<NodeId, Point>& points);

/// Same as build_udg but without the connectivity requirement.
HybridTopology build_udg_unchecked(const std::map<NodeId, Point>& points);

bool is_connected(const Adjacency& adjacency);

/// Nodes within two unit-disk hops of v, excluding v, sorted.
std::vector<NodeIndex> two_hop_neighborhood(const HybridTopology& topo, NodeIndex v);

/// Euclidean-weighted single-source shortest path lengths.
std::vector<double> shortest_path_lengths(std::span<const Point> points, const Adjacency& adjacency,
                                          NodeIndex source);

/// Euclidean-weighted shortest path; empty when unreachable.
std::vector<NodeIndex> shortest_path(std::span<const Point> points, const Adjacency& adjacency,
                                     NodeIndex source, NodeIndex target);

double path_length(std::span<const Point> points, std::span<const NodeIndex> path);

}  // namespace hybrid
