#pragma once

#include "hybrid/topology.h"

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace hybrid {

enum class EdgeKind { Gabriel, Triangle };

struct PlanarEdge {
    NodeIndex a = 0;  // a < b
    NodeIndex b = 0;
    EdgeKind kind = EdgeKind::Gabriel;
};

struct Face {
    std::vector<NodeIndex> cycle;  // bounded: counterclockwise, outer: clockwise
    bool outer = false;
    double signed_area = 0.0;
};

/// Plane embedding of LDel^2 over the vertices of a topology. Vertex indices
/// coincide with the topology's NodeIndex values.
class PlanarGraph {
public:
    PlanarGraph() = default;
    PlanarGraph(std::vector<NodeId> ids, std::vector<Point> points, std::vector<PlanarEdge> edges);

    std::size_t vertex_count() const { return points_.size(); }
    const std::vector<NodeId>& ids() const { return ids_; }
    const std::vector<Point>& points() const { return points_; }
    const std::vector<PlanarEdge>& edges() const { return edges_; }
    const std::vector<Face>& faces() const { return faces_; }
    std::size_t outer_face() const { return outer_face_; }

    /// Neighbors of v sorted counterclockwise by polar angle.
    std::span<const NodeIndex> rotation(NodeIndex v) const { return rotation_[v]; }
    /// Neighbor lists sorted by index, usable with the graph utilities.
    const Adjacency& adjacency() const { return adjacency_; }

    bool has_edge(NodeIndex a, NodeIndex b) const;
    EdgeKind edge_kind(NodeIndex a, NodeIndex b) const;
    /// Face lying to the left of the directed edge a->b.
    std::size_t face_left_of(NodeIndex a, NodeIndex b) const;
    /// Successor of the half-edge a->b along its left face.
    NodeIndex next_on_face(NodeIndex a, NodeIndex b) const;

private:
    static std::uint64_t key(NodeIndex a, NodeIndex b) { return (std::uint64_t{a} << 32) | b; }
    void build_faces();

    std::vector<NodeId> ids_;
    std::vector<Point> points_;
    std::vector<PlanarEdge> edges_;
    Adjacency adjacency_;
    Adjacency rotation_;
    std::vector<Face> faces_;
    std::size_t outer_face_ = 0;
    std::unordered_map<std::uint64_t, std::size_t> edge_index_;
    std::unordered_map<std::uint64_t, std::size_t> half_edge_face_;
};

/// Triangles (v, w) with v < w such that u, v, w form a triangle of unit
/// sides whose circumcircle is empty of u's 2-hop neighborhood. This is the
/// only information node u derives locally; it uses only that neighborhood.
std::vector<std::pair<NodeIndex, NodeIndex>> local_triangle_acceptance(const HybridTopology& topo, NodeIndex u);

/// Gabriel neighbors of u, computed from u's 1-hop neighborhood.
std::vector<NodeIndex> local_gabriel_neighbors(const HybridTopology& topo, NodeIndex u);

PlanarGraph build_ldel2(const HybridTopology& topo);

/// Bounded faces counterclockwise followed by the clockwise outer face.
std::vector<std::vector<NodeIndex>> faces_of(const PlanarGraph& g);

/// Number of properly crossing edge pairs (quadratic scan).
std::size_t count_crossings(const PlanarGraph& g);

}  // namespace hybrid
