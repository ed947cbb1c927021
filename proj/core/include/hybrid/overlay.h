#pragma once

#include "hybrid/simengine.h"

#include <bit>
#include <compare>
#include <cstdint>
#include <limits>
#include <vector>

namespace hybrid {

inline constexpr std::size_t kNoPosition = std::numeric_limits<std::size_t>::max();

/// Smallest d with 2^d >= k (0 for k <= 1).
inline std::size_t ceil_log2(std::size_t k) { return k <= 1 ? 0 : std::bit_width(k - 1); }

/// Identity of one ring participant: a node together with its predecessor on
/// the ring. A node that borders several faces runs one participant per face.
struct ParticipantKey {
    NodeId node = 0;
    NodeId pred = 0;
    friend auto operator<=>(const ParticipantKey&, const ParticipantKey&) = default;
};

/// Cyclic node sequence on which the overlay protocols run. Consecutive
/// members are joined by ad hoc links; with virtual_closing the last->first
/// link is a long-range link between nodes that already know each other.
struct RingSpec {
    std::vector<NodeIndex> members;
    bool virtual_closing = false;
};

struct JumpEdge {
    std::size_t from_position = 0;
    std::size_t to_position = 0;
    NodeIndex from = 0;
    NodeIndex to = 0;
    ParticipantKey ell;  // minimum key bridged, i.e. over (from, to]
    int level = 0;       // bridges 2^(level+1) ring positions
    double angle_sum = 0.0;
};

struct PointerJumpingResult {
    std::size_t k = 0;
    int jump_rounds = 0;
    ParticipantKey leader;
    std::size_t leader_position = 0;
    std::vector<JumpEdge> jump_edges;
    /// succ[p][j] / pred[p][j]: ring position of succ_j / pred_j of participant p.
    std::vector<std::vector<std::size_t>> succ;
    std::vector<std::vector<std::size_t>> pred;
    std::vector<std::vector<double>> succ_angle;  // angle sum over (p, succ_j]
    std::vector<ParticipantKey> known_leader;  // per position
    std::vector<std::size_t> known_k;          // per position
    std::vector<std::uint64_t> messages_per_position;
    std::vector<double> turn_angle;  // local turn angle at each position
};

struct HypercubeOverlay {
    int dimension = 0;
    std::size_t k = 0;
    NodeIndex leader = 0;
    std::vector<std::uint32_t> id_of_position;
    std::vector<std::size_t> position_of_slot;  // kNoPosition for virtual slots
    std::vector<NodeIndex> host_of_slot;
    double angle_sum = 0.0;  // total signed turn angle, known to every participant

    std::size_t slot_count() const { return host_of_slot.size(); }
    bool is_virtual(std::size_t slot) const { return position_of_slot[slot] == kNoPosition; }
};

struct SortKey {
    double x = std::numeric_limits<double>::infinity();
    double y = std::numeric_limits<double>::infinity();
    NodeIndex node = kNoNode;

    bool infinite() const { return node == kNoNode; }
    friend bool operator<(const SortKey& a, const SortKey& b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.node < b.node;
    }
    friend bool operator==(const SortKey&, const SortKey&) = default;
};

/// Exchange of keys and turn angles between ring neighbours (one round).
/// Returns the local turn angle per position for every ring.
std::vector<std::vector<double>> exchange_ring_neighbours(RoundEngine& engine, const std::vector<RingSpec>& rings);

/// Pointer jumping on all rings in parallel. Each participant learns the
/// leader, k and its jump table.
std::vector<PointerJumpingResult> pointer_jumping(RoundEngine& engine, const std::vector<RingSpec>& rings,
                                                  const std::vector<std::vector<double>>& turn_angles);

/// Token pass that sums the turn angles, then recursive hypercube ID
/// distribution along jump edges and wiring of virtual padding slots.
std::vector<HypercubeOverlay> assign_hypercube_ids(RoundEngine& engine, const std::vector<RingSpec>& rings,
                                                   const std::vector<PointerJumpingResult>& jumps);

/// Bitonic sort; keys[c][slot] is the key held by hypercube slot `slot` of cube c.
/// Returns the sorted keys per slot, ascending by slot id.
std::vector<std::vector<SortKey>> hypercube_sort(RoundEngine& engine, const std::vector<HypercubeOverlay>& cubes,
                                                 std::vector<std::vector<SortKey>> keys, int* stages = nullptr);

/// Divide-and-conquer hull over sorted slots. Every slot ends up with the full
/// hull; the returned list is counterclockwise starting at the lexicographic minimum.
std::vector<std::vector<NodeIndex>> parallel_convex_hull(RoundEngine& engine,
                                                         const std::vector<HypercubeOverlay>& cubes,
                                                         const std::vector<std::vector<SortKey>>& sorted);

/// Merges two x-separated counterclockwise hulls (left strictly precedes right
/// in (x, y) order) via their common tangents.
std::vector<SortKey> merge_hulls(const std::vector<SortKey>& left, const std::vector<SortKey>& right);

struct BroadcastTree {
    NodeIndex root = 0;
    std::vector<NodeIndex> parent;  // kNoNode at the root
    std::vector<std::vector<NodeIndex>> children;
    int height = 0;
    int max_degree = 0;
    std::int64_t charged_rounds = 0;
};

BroadcastTree build_broadcast_tree(RoundEngine& engine, double c1 = 1.0);

struct DistributionResult {
    std::int64_t rounds = 0;
    std::uint64_t deliveries = 0;  // reference deliveries summed over nodes
    std::uint64_t duplicates = 0;
};

/// Floods every hull node's reference over the tree so that all hull nodes
/// end up knowing each other.
DistributionResult distribute_hulls(RoundEngine& engine, const BroadcastTree& tree,
                                    const std::vector<std::vector<NodeIndex>>& hulls);

struct DominatingSetResult {
    std::vector<std::vector<NodeIndex>> sets;  // per path, in path order
    std::int64_t rounds = 0;
};

/// Randomized dominating set on paths (maximum degree 2), all paths in parallel.
DominatingSetResult dominating_set(RoundEngine& engine, const std::vector<std::vector<NodeIndex>>& paths);

bool dominates_path(const std::vector<NodeIndex>& path, const std::vector<NodeIndex>& set);

}  // namespace hybrid
