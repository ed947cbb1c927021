#include "hybrid/pipeline.h"

#include "hybrid/errors.h"
#include "hybrid/log.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace hybrid {

bool ExperimentReport::all_ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.ok; });
}

namespace {

double log2_squared(std::size_t n) {
    const double l = std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
    return l * l;
}

// Each node enters the hull computation once per ring, at its first occurrence.
std::vector<std::vector<SortKey>> hull_keys(const std::vector<HoleRing>& rings, const std::vector<HypercubeOverlay>& cubes,
                                            std::span<const Point> pts) {
    std::vector<std::vector<SortKey>> keys(cubes.size());
    for (std::size_t c = 0; c < cubes.size(); ++c) {
        const auto& m = rings[c].members;
        std::set<NodeIndex> seen;
        keys[c].resize(cubes[c].slot_count());
        for (std::size_t slot = 0; slot < cubes[c].slot_count(); ++slot) {
            const std::size_t pos = cubes[c].position_of_slot[slot];
            if (pos == kNoPosition || !seen.insert(m[pos]).second) continue;
            keys[c][slot] = SortKey{pts[m[pos]].x, pts[m[pos]].y, m[pos]};
        }
    }
    return keys;
}

void tally(StorageClass& c, std::size_t refs) {
    c.nodes += 1;
    c.max_refs = std::max(c.max_refs, refs);
    c.mean_refs += static_cast<double>(refs);
}

}  // namespace

Pipeline::Pipeline(HybridTopology topo, PipelineConfig config)
    : config_(std::move(config)), engine_(std::make_unique<RoundEngine>(std::move(topo), config_.seed)) {
    engine_->enable_transcript(config_.transcript);
}

Pipeline::~Pipeline() = default;

const PlanarGraph& Pipeline::graph() const {
    if (!graph_) throw Error(ErrorKind::NotReady, "abstraction not built");
    return *graph_;
}

const Router& Pipeline::router() const {
    if (!router_) throw Error(ErrorKind::NotReady, "abstraction not built");
    return *router_;
}

template <class F>
void Pipeline::phase(const std::string& name, F&& body) {
    engine_->begin_phase(name);
    try {
        body();
    } catch (const Error& e) {
        if (engine_->in_phase()) engine_->end_phase();
        throw Error(e.kind(), "phase " + name + ": " + e.what());
    }
    const PhaseMetrics m = engine_->end_phase();
    log(LogLevel::Debug, "phase " + name + ": " + std::to_string(m.rounds) + " rounds");
}

void Pipeline::build() {
    if (built()) throw Error(ErrorKind::InvalidArgument, "pipeline already built");
    run_phases(true, "");
    build_phases_ = engine_->phases();
    build_metrics_ = engine_->node_metrics();
    transcript_ = engine_->transcript();
}

void Pipeline::run_phases(bool with_tree, const std::string& prefix) {
    RoundEngine& eng = *engine_;
    const HybridTopology& topo = eng.topology();
    router_.reset();
    summaries_.clear();
    abstraction_ = HoleAbstraction{};

    phase(prefix + "ldel", [&] {
        // Local construction from 2-hop information, charged as five rounds.
        eng.charge_rounds(5);
        graph_ = std::make_unique<PlanarGraph>(build_ldel2(topo));
    });
    const auto& pts = graph_->points();

    std::vector<HoleRing> rings;
    phase(prefix + "rings", [&] { rings = form_rings(*graph_, detect_boundary_nodes(*graph_)); });

    std::vector<RingSpec> specs;
    std::vector<PointerJumpingResult> pj;
    std::vector<HypercubeOverlay> cubes;
    std::vector<std::vector<SortKey>> sorted;
    std::vector<std::vector<NodeIndex>> ring_hulls;
    phase(prefix + "pointer-jumping", [&] {
        for (const auto& r : rings) specs.push_back(ring_spec(r));
        const auto angles = exchange_ring_neighbours(eng, specs);
        pj = pointer_jumping(eng, specs, angles);
    });
    phase(prefix + "hypercube-ids", [&] {
        cubes = assign_hypercube_ids(eng, specs, pj);
        for (std::size_t i = 0; i < rings.size(); ++i) apply_orientation(rings[i], cubes[i].angle_sum, false);
    });
    phase(prefix + "sort", [&] { sorted = hypercube_sort(eng, cubes, hull_keys(rings, cubes, pts)); });
    phase(prefix + "hull", [&] { ring_hulls = parallel_convex_hull(eng, cubes, sorted); });

    phase(prefix + "outer-holes", [&] {
        int outer = -1;
        for (std::size_t i = 0; i < rings.size(); ++i) {
            if (rings[i].kind != RingKind::OuterBoundary) continue;
            if (outer >= 0) throw Error(ErrorKind::GeometryInconsistency, "more than one outer boundary");
            outer = static_cast<int>(i);
        }
        if (outer < 0) throw Error(ErrorKind::GeometryInconsistency, "no outer boundary");
        abstraction_.outer_ring = outer;
        std::vector<HoleRing> holes = detect_outer_holes(*graph_, rings[outer], ring_hulls[outer]);
        if (holes.empty()) return;
        for (auto& h : holes) h.ring_id = static_cast<int>(rings.size() + static_cast<std::size_t>(h.ring_id));
        std::vector<RingSpec> hole_specs;
        for (const auto& r : holes) hole_specs.push_back(ring_spec(r));
        const auto angles = exchange_ring_neighbours(eng, hole_specs);
        auto hole_pj = pointer_jumping(eng, hole_specs, angles);
        auto hole_cubes = assign_hypercube_ids(eng, hole_specs, hole_pj);
        for (std::size_t i = 0; i < holes.size(); ++i) apply_orientation(holes[i], hole_cubes[i].angle_sum, true);
        auto hole_sorted = hypercube_sort(eng, hole_cubes, hull_keys(holes, hole_cubes, pts));
        auto hole_hulls = parallel_convex_hull(eng, hole_cubes, hole_sorted);
        for (std::size_t i = 0; i < holes.size(); ++i) {
            rings.push_back(std::move(holes[i]));
            pj.push_back(std::move(hole_pj[i]));
            ring_hulls.push_back(std::move(hole_hulls[i]));
        }
    });

    abstraction_.rings = rings;
    for (const HoleRing& r : rings) {
        if (r.kind != RingKind::InnerHole && r.kind != RingKind::OuterHole) continue;
        HullAbstraction h;
        h.ring_id = r.ring_id;
        h.hull_nodes = ring_hulls[static_cast<std::size_t>(r.ring_id)];
        h.bays = compute_bays(r, h.hull_nodes);
        h.bay_of_position = bay_positions(r, h.bays);
        abstraction_.hulls.push_back(std::move(h));
    }

    if (with_tree) phase(prefix + "broadcast-tree", [&] { tree_ = build_broadcast_tree(eng, config_.c1); });

    phase(prefix + "hull-distribution", [&] {
        std::vector<std::vector<NodeIndex>> hulls;
        for (const auto& h : abstraction_.hulls) hulls.push_back(h.hull_nodes);
        distribution_duplicates_ = distribute_hulls(eng, tree_, hulls).duplicates;
    });

    phase(prefix + "dominating-set", [&] {
        std::vector<std::vector<NodeIndex>> paths;
        for (const auto& h : abstraction_.hulls) {
            for (const auto& b : h.bays) paths.push_back(b.path());
        }
        const DominatingSetResult ds = dominating_set(eng, paths);
        std::size_t next = 0;
        invalid_dominating_sets_ = 0;
        for (auto& h : abstraction_.hulls) {
            h.dominating_sets.clear();
            for (std::size_t b = 0; b < h.bays.size(); ++b, ++next) {
                if (!dominates_path(paths[next], ds.sets[next])) ++invalid_dominating_sets_;
                h.dominating_sets.push_back(ds.sets[next]);
            }
        }
    });

    for (const HoleRing& r : rings) {
        RingSummary s;
        s.ring_id = r.ring_id;
        s.kind = r.kind;
        s.size = r.members.size();
        s.orientation_sum = r.orientation_sum;
        std::vector<Point> poly;
        for (NodeIndex v : r.members) poly.push_back(pts[v]);
        s.shoelace_area = signed_area(poly);
        s.perimeter = r.perimeter_length;
        s.area = r.enclosed_area;
        s.bbox_circumference = r.bounding_box_circumference;
        const auto& hull = ring_hulls[static_cast<std::size_t>(r.ring_id)];
        s.hull_size = hull.size();
        if (const HullAbstraction* h = abstraction_.hull_of_ring(r.ring_id)) s.bay_count = h->bays.size();
        const auto& p = pj[static_cast<std::size_t>(r.ring_id)];
        s.jump_rounds = p.jump_rounds;
        for (auto m : p.messages_per_position) s.max_jump_msgs = std::max(s.max_jump_msgs, m);
        try {
            s.hull_exact = hull == hull_of_nodes(pts, r.members);
        } catch (const Error&) {
            s.hull_exact = false;
        }
        summaries_.push_back(s);
    }

    router_ = std::make_unique<Router>(*graph_, eng.topology(), abstraction_, config_.backend);
}

std::vector<std::pair<NodeId, NodeId>> Pipeline::sample_queries(std::size_t count) const {
    const auto& ids = topology().ids;
    std::vector<std::pair<NodeId, NodeId>> out;
    if (ids.size() < 2) return out;
    std::mt19937_64 rng(config_.seed * 0x9E3779B97F4A7C15ULL + 17);
    std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
    while (out.size() < count) {
        const std::size_t a = pick(rng);
        const std::size_t b = pick(rng);
        if (a != b) out.emplace_back(ids[a], ids[b]);
    }
    return out;
}

std::vector<RouteResult> Pipeline::run_queries(const std::vector<std::pair<NodeId, NodeId>>& queries) {
    if (!router_) throw Error(ErrorKind::NotReady, "abstraction not built");
    std::vector<RouteResult> out;
    for (const auto& [s, t] : queries) {
        const NodeIndex si = topology().index_of(s);
        const NodeIndex ti = topology().index_of(t);
        if (si != ti) engine_->grant_knowledge(si, ti);
        out.push_back(router_->route(*engine_, s, t));
    }
    routes_.insert(routes_.end(), out.begin(), out.end());
    return out;
}

void Pipeline::periodic_recompute(const std::map<NodeId, Point>& moved) {
    if (!built()) throw Error(ErrorKind::NotReady, "recompute before the first build");
    const HybridTopology& old = topology();
    std::map<NodeId, Point> nodes;
    for (std::size_t i = 0; i < old.size(); ++i) nodes.emplace(old.ids[i], old.points[i]);
    for (const auto& [id, p] : moved) {
        auto it = nodes.find(id);
        if (it == nodes.end()) throw Error(ErrorKind::Lookup, "unknown node " + std::to_string(id));
        it->second = p;
    }
    HybridTopology topo = build_udg(nodes);
    router_.reset();
    engine_ = std::make_unique<RoundEngine>(std::move(topo), config_.seed);
    engine_->enable_transcript(config_.transcript);
    // The overlay tree is persistent long-range knowledge and survives movement.
    for (std::size_t v = 0; v < tree_.parent.size(); ++v) {
        if (tree_.parent[v] == kNoNode) continue;
        engine_->grant_knowledge(static_cast<NodeIndex>(v), tree_.parent[v]);
        engine_->grant_knowledge(tree_.parent[v], static_cast<NodeIndex>(v));
    }
    run_phases(false, "recompute/");
    recompute_phases_ = engine_->phases();
    recomputed_ = true;
    transcript_.insert(transcript_.end(), engine_->transcript().begin(), engine_->transcript().end());
}

ExperimentReport Pipeline::report() const {
    if (!built()) throw Error(ErrorKind::NotReady, "abstraction not built");
    ExperimentReport rep;
    const HybridTopology& topo = topology();
    const std::size_t n = topo.size();
    const double l2 = log2_squared(n);
    rep.node_count = n;
    rep.seed = config_.seed;
    rep.backend = config_.backend;
    rep.phases = build_phases_;
    for (const auto& p : build_phases_) rep.total_rounds += p.rounds;
    rep.recompute_phases = recompute_phases_;
    for (const auto& p : recompute_phases_) rep.recompute_rounds += p.rounds;
    for (const auto& m : build_metrics_) {
        rep.messages.max_adhoc = std::max(rep.messages.max_adhoc, m.adhoc_msgs);
        rep.messages.max_longrange = std::max(rep.messages.max_longrange, m.longrange_msgs);
        rep.messages.mean_adhoc += static_cast<double>(m.adhoc_msgs);
        rep.messages.mean_longrange += static_cast<double>(m.longrange_msgs);
    }
    if (n) {
        rep.messages.mean_adhoc /= static_cast<double>(n);
        rep.messages.mean_longrange /= static_cast<double>(n);
    }
    rep.rings = summaries_;
    rep.routes = routes_;
    rep.competitiveness = measure_competitiveness(topo, rep.routes);

    // Storage: tree links, ring neighbours per participation, bay endpoints and
    // dominating set for bay nodes, and every hull reference for hull nodes.
    StorageAudit& st = rep.storage;
    std::vector<std::size_t> refs(n, 0);
    std::vector<int> cls(n, 0);  // 0 other, 1 boundary, 2 hull
    for (std::size_t v = 0; v < tree_.parent.size() && v < n; ++v) {
        refs[v] += tree_.children[v].size() + (tree_.parent[v] == kNoNode ? 0 : 1);
    }
    std::size_t max_ring = 0;
    for (const auto& r : abstraction_.rings) {
        max_ring = std::max(max_ring, r.members.size());
        st.max_perimeter = std::max(st.max_perimeter, r.perimeter_length);
        for (NodeIndex v : r.members) {
            refs[v] += 2;
            cls[v] = std::max(cls[v], 1);
        }
    }
    for (const auto& h : abstraction_.hulls) st.total_hull_size += h.hull_nodes.size();
    for (const auto& h : abstraction_.hulls) {
        for (std::size_t b = 0; b < h.bays.size(); ++b) {
            for (NodeIndex v : h.bays[b].inner) refs[v] += 2 + h.dominating_sets[b].size();
        }
        for (NodeIndex v : h.hull_nodes) {
            if (cls[v] < 2) refs[v] += st.total_hull_size;
            cls[v] = 2;
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        tally(cls[v] == 2 ? st.hull : cls[v] == 1 ? st.boundary : st.other, refs[v]);
    }
    for (StorageClass* c : {&st.hull, &st.boundary, &st.other}) {
        if (c->nodes) c->mean_refs /= static_cast<double>(c->nodes);
    }
    st.hull.bound = 4.0 * static_cast<double>(st.total_hull_size);
    st.boundary.bound = 16.0 + static_cast<double>(max_ring);
    st.other.bound = 16.0;
    st.refs_per_node = refs;

    auto check = [&](std::string name, double measured, double bound) {
        rep.checks.push_back({std::move(name), measured, bound, measured <= bound + 1e-9});
    };
    check("total-rounds", static_cast<double>(rep.total_rounds), config_.c2 * l2);
    double jump_ratio = 0.0;
    double jump_msg_ratio = 0.0;
    std::size_t hull_mismatch = 0;
    std::size_t orientation_bad = 0;
    for (const auto& s : summaries_) {
        const double levels = static_cast<double>(ceil_log2(s.size) + 1);
        jump_ratio = std::max(jump_ratio, s.jump_rounds / levels);
        jump_msg_ratio = std::max(jump_msg_ratio, static_cast<double>(s.max_jump_msgs) / (2.0 * levels));
        if (!s.hull_exact) ++hull_mismatch;
        const bool hole = s.kind == RingKind::InnerHole || s.kind == RingKind::OuterHole;
        const double expected = hole ? -360.0 : 360.0;
        const bool sign_ok = hole ? s.shoelace_area > 0 : s.shoelace_area < 0;
        if (std::abs(s.orientation_sum - expected) > 1e-6 || !sign_ok) ++orientation_bad;
    }
    check("pointer-jumping-rounds", jump_ratio, 1.0);
    check("pointer-jumping-messages", jump_msg_ratio, 1.0);
    check("longrange-per-node", static_cast<double>(rep.messages.max_longrange), config_.c_longrange * l2);
    check("hull-exactness", static_cast<double>(hull_mismatch), 0.0);
    check("orientation", static_cast<double>(orientation_bad), 0.0);
    check("distribution-duplicates", static_cast<double>(distribution_duplicates_), 0.0);
    check("dominating-set", static_cast<double>(invalid_dominating_sets_), 0.0);
    check("storage-hull", static_cast<double>(st.hull.max_refs), st.hull.nodes ? st.hull.bound : 0.0);
    check("storage-boundary", static_cast<double>(st.boundary.max_refs), st.boundary.bound);
    check("storage-other", static_cast<double>(st.other.max_refs), st.other.bound);
    if (!rep.routes.empty()) {
        double violations = 0;
        for (const auto& r : rep.routes) violations += r.within_bound ? 0 : 1;
        check("route-bounds", violations, 0.0);
    }
    if (recomputed_) check("recompute-rounds", static_cast<double>(rep.recompute_rounds), config_.c3 * l2);
    return rep;
}

ExperimentReport run_pipeline(const HybridTopology& topo, const PipelineConfig& config) {
    Pipeline p(topo, config);
    p.build();
    auto queries = config.queries.empty() ? p.sample_queries(config.sampled_queries) : config.queries;
    p.run_queries(queries);
    return p.report();
}

}  // namespace hybrid
