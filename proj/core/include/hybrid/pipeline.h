#pragma once

#include "hybrid/holes.h"
#include "hybrid/ldel.h"
#include "hybrid/overlay.h"
#include "hybrid/routing.h"
#include "hybrid/simengine.h"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hybrid {

struct PipelineConfig {
    std::uint64_t seed = 1;
    Backend backend = Backend::Visibility;
    double c1 = 1.0;  // broadcast tree rounds per log2^2 n
    double c2 = 10.0;  // total abstraction rounds per log2^2 n
    double c3 = 10.0;  // recompute rounds per log2^2 n
    double c_longrange = 8.0;  // long-range messages per node per log2^2 n
    bool transcript = false;
    std::vector<std::pair<NodeId, NodeId>> queries;
    std::size_t sampled_queries = 0;  // used when queries is empty
};

/// One evaluated bound; every report lists all of them.
struct BoundCheck {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool ok = true;
};

struct RingSummary {
    int ring_id = -1;
    RingKind kind = RingKind::Unclassified;
    std::size_t size = 0;
    double orientation_sum = 0.0;
    double shoelace_area = 0.0;  // signed, of the member sequence
    double perimeter = 0.0;
    double area = 0.0;
    double bbox_circumference = 0.0;
    std::size_t hull_size = 0;
    std::size_t bay_count = 0;
    int jump_rounds = 0;
    std::uint64_t max_jump_msgs = 0;  // per participant
    bool hull_exact = false;
};

struct StorageClass {
    std::size_t nodes = 0;
    std::size_t max_refs = 0;
    double mean_refs = 0.0;
    double bound = 0.0;
};

/// Persisted references per node, split into the three node classes.
struct StorageAudit {
    StorageClass hull;
    StorageClass boundary;
    StorageClass other;
    std::size_t total_hull_size = 0;
    double max_perimeter = 0.0;
    std::vector<std::size_t> refs_per_node;
};

struct MessageStats {
    std::uint64_t max_adhoc = 0;
    std::uint64_t max_longrange = 0;
    double mean_adhoc = 0.0;
    double mean_longrange = 0.0;
};

struct ExperimentReport {
    std::size_t node_count = 0;
    std::uint64_t seed = 0;
    Backend backend = Backend::Visibility;
    std::vector<PhaseMetrics> phases;
    std::int64_t total_rounds = 0;
    std::vector<PhaseMetrics> recompute_phases;
    std::int64_t recompute_rounds = 0;
    MessageStats messages;
    std::vector<RingSummary> rings;
    std::vector<RouteResult> routes;
    CompetitivenessReport competitiveness;
    StorageAudit storage;
    std::vector<BoundCheck> checks;

    bool all_ok() const;
};

/// Runs the distributed abstraction protocols on one topology and answers
/// route queries against the result.
class Pipeline {
public:
    Pipeline(HybridTopology topo, PipelineConfig config);
    ~Pipeline();

    /// All phases in order: LDel2, rings, pointer jumping, hypercube ids,
    /// sort, hull, outer holes, broadcast tree, hull distribution, dominating sets.
    void build();
    bool built() const { return graph_ != nullptr; }

    std::vector<RouteResult> run_queries(const std::vector<std::pair<NodeId, NodeId>>& queries);
    std::vector<std::pair<NodeId, NodeId>> sample_queries(std::size_t count) const;

    /// Re-runs every phase except the broadcast tree, optionally after moving nodes.
    void periodic_recompute(const std::map<NodeId, Point>& moved = {});

    ExperimentReport report() const;

    const HybridTopology& topology() const { return engine_->topology(); }
    const PlanarGraph& graph() const;
    const HoleAbstraction& abstraction() const { return abstraction_; }
    const BroadcastTree& tree() const { return tree_; }
    const RoundEngine& engine() const { return *engine_; }
    const Router& router() const;
    const PipelineConfig& config() const { return config_; }
    const std::vector<TranscriptRecord>& transcript() const { return transcript_; }

private:
    void run_phases(bool with_tree, const std::string& prefix);
    template <class F>
    void phase(const std::string& name, F&& body);

    PipelineConfig config_;
    std::unique_ptr<RoundEngine> engine_;
    std::unique_ptr<PlanarGraph> graph_;
    HoleAbstraction abstraction_;
    BroadcastTree tree_;
    std::unique_ptr<Router> router_;
    std::vector<RingSummary> summaries_;
    std::vector<PhaseMetrics> build_phases_;
    std::vector<PhaseMetrics> recompute_phases_;
    std::uint64_t distribution_duplicates_ = 0;
    std::vector<RouteResult> routes_;
    std::vector<TranscriptRecord> transcript_;
    std::vector<NodeMetrics> build_metrics_;
    std::size_t invalid_dominating_sets_ = 0;
    bool recomputed_ = false;
};

/// Generates nothing; builds the abstraction for topo, runs the configured
/// queries and returns the report.
ExperimentReport run_pipeline(const HybridTopology& topo, const PipelineConfig& config);

}  // namespace hybrid
