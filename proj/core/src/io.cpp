#include "hybrid/io.h"

#include "hybrid/errors.h"

#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>

namespace hybrid {

using Json = nlohmann::ordered_json;

namespace {

Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::Io, std::string("malformed JSON: ") + e.what());
    }
}

template <class T>
T field(const Json& j, const char* key) {
    if (!j.contains(key)) throw Error(ErrorKind::InvalidArgument, std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("field '") + key + "': " + e.what());
    }
}

template <class T>
T field_or(const Json& j, const char* key, T fallback) {
    return j.contains(key) ? field<T>(j, key) : fallback;
}

void reject_unknown(const Json& j, std::initializer_list<const char*> known) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw Error(ErrorKind::InvalidArgument, "unknown key '" + key + "'");
    }
}

std::vector<NodeId> ids_of(const std::vector<NodeIndex>& v, const HybridTopology& topo) {
    std::vector<NodeId> out;
    out.reserve(v.size());
    for (NodeIndex x : v) out.push_back(topo.ids[x]);
    return out;
}

std::vector<NodeIndex> indices_of(const Json& j, const HybridTopology& topo) {
    std::vector<NodeIndex> out;
    for (const auto& id : j) out.push_back(topo.index_of(id.get<NodeId>()));
    return out;
}

RingKind parse_kind(const std::string& s) {
    for (RingKind k : {RingKind::Unclassified, RingKind::InnerHole, RingKind::OuterBoundary, RingKind::OuterHole}) {
        if (to_string(k) == s) return k;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown ring kind '" + s + "'");
}

RouteCase parse_case(const std::string& s) {
    for (RouteCase c : {RouteCase::Visible, RouteCase::Case1, RouteCase::Case2, RouteCase::Case3, RouteCase::Case4,
                        RouteCase::Case5}) {
        if (to_string(c) == s) return c;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown route case '" + s + "'");
}

Json phase_json(const PhaseMetrics& p) {
    return Json{{"name", p.name},
                {"rounds", p.rounds},
                {"charged_rounds", p.charged_rounds},
                {"adhoc_msgs", p.adhoc_msgs},
                {"longrange_msgs", p.longrange_msgs},
                {"max_per_node_msgs", p.max_per_node_msgs},
                {"max_per_node_longrange", p.max_per_node_longrange}};
}

Json storage_json(const StorageClass& c) {
    return Json{{"nodes", c.nodes}, {"max_refs", c.max_refs}, {"mean_refs", c.mean_refs}, {"bound", c.bound}};
}

Json route_json(const RouteResult& r) {
    return Json{{"s", r.s},
                {"t", r.t},
                {"case", std::string(to_string(r.case_taken))},
                {"path", r.path},
                {"euclidean_length", r.euclidean_length},
                {"udg_shortest", r.udg_shortest},
                {"straight_line", r.straight_line},
                {"competitive_ratio", r.competitive_ratio},
                {"rounds_used", r.rounds_used},
                {"longrange_msgs", r.longrange_msgs},
                {"extreme_points", r.extreme_points},
                {"leg_lengths", r.leg_lengths},
                {"bound", r.bound},
                {"within_bound", r.within_bound}};
}

}  // namespace

std::string scenario_to_json(const HybridTopology& topo) {
    Json nodes = Json::array();
    for (std::size_t i = 0; i < topo.size(); ++i) {
        nodes.push_back(Json{{"id", topo.ids[i]}, {"x", topo.points[i].x}, {"y", topo.points[i].y}});
    }
    return Json{{"nodes", nodes}, {"radius", 1.0}}.dump(2) + "\n";
}

HybridTopology scenario_from_json(const std::string& text) {
    const Json j = parse(text);
    if (field_or<double>(j, "radius", 1.0) != 1.0) throw Error(ErrorKind::InvalidArgument, "radius must be 1.0");
    std::map<NodeId, Point> nodes;
    for (const auto& n : field<Json>(j, "nodes")) {
        const NodeId id = field<NodeId>(n, "id");
        if (!nodes.emplace(id, Point{field<double>(n, "x"), field<double>(n, "y")}).second) {
            throw Error(ErrorKind::InvalidArgument, "duplicate node id " + std::to_string(id));
        }
    }
    return build_udg(nodes);
}

ScenarioSpec scenario_spec_from_json(const std::string& text) {
    const Json j = parse(text);
    reject_unknown(j, {"seed", "node_count", "region", "obstacles", "density", "jitter", "mode", "spacing", "retry_cap",
                       "require_disjoint_hulls"});
    ScenarioSpec s;
    s.seed = field_or<std::uint64_t>(j, "seed", s.seed);
    s.node_count = field_or<std::size_t>(j, "node_count", s.node_count);
    if (j.contains("region")) {
        const Json& r = j.at("region");
        s.region = {field<double>(r, "x0"), field<double>(r, "y0"), field<double>(r, "x1"), field<double>(r, "y1")};
    }
    if (j.contains("obstacles")) {
        for (const auto& poly : j.at("obstacles")) {
            Polygon p;
            for (const auto& v : poly) p.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
            s.obstacles.push_back(std::move(p));
        }
    }
    s.density = field_or<double>(j, "density", s.density);
    s.jitter = field_or<double>(j, "jitter", s.jitter);
    if (j.contains("mode")) s.mode = parse_sampling_mode(field<std::string>(j, "mode"));
    s.spacing = field_or<double>(j, "spacing", s.spacing);
    s.retry_cap = field_or<int>(j, "retry_cap", s.retry_cap);
    s.require_disjoint_hulls = field_or<bool>(j, "require_disjoint_hulls", s.require_disjoint_hulls);
    return s;
}

std::string scenario_spec_to_json(const ScenarioSpec& s) {
    Json obstacles = Json::array();
    for (const auto& p : s.obstacles) {
        Json poly = Json::array();
        for (const auto& v : p.vertices) poly.push_back({v.x, v.y});
        obstacles.push_back(poly);
    }
    return Json{{"seed", s.seed},
                {"node_count", s.node_count},
                {"region", {{"x0", s.region.x0}, {"y0", s.region.y0}, {"x1", s.region.x1}, {"y1", s.region.y1}}},
                {"obstacles", obstacles},
                {"density", s.density},
                {"jitter", s.jitter},
                {"mode", std::string(to_string(s.mode))},
                {"spacing", s.spacing},
                {"retry_cap", s.retry_cap},
                {"require_disjoint_hulls", s.require_disjoint_hulls}}
               .dump(2) +
           "\n";
}

PipelineConfig config_from_json(const std::string& text) {
    const Json j = parse(text);
    reject_unknown(j, {"seed", "backend", "c1", "c2", "c3", "c_longrange", "transcript", "queries", "sampled_queries"});
    PipelineConfig c;
    c.seed = field_or<std::uint64_t>(j, "seed", c.seed);
    if (j.contains("backend")) c.backend = parse_backend(field<std::string>(j, "backend"));
    c.c1 = field_or<double>(j, "c1", c.c1);
    c.c2 = field_or<double>(j, "c2", c.c2);
    c.c3 = field_or<double>(j, "c3", c.c3);
    c.c_longrange = field_or<double>(j, "c_longrange", c.c_longrange);
    c.transcript = field_or<bool>(j, "transcript", c.transcript);
    c.sampled_queries = field_or<std::size_t>(j, "sampled_queries", c.sampled_queries);
    if (j.contains("queries")) c.queries = queries_from_json(j.at("queries").dump());
    return c;
}

std::vector<std::pair<NodeId, NodeId>> queries_from_json(const std::string& text) {
    const Json j = parse(text);
    if (!j.is_array()) throw Error(ErrorKind::InvalidArgument, "query batch must be a list");
    std::vector<std::pair<NodeId, NodeId>> out;
    for (const auto& q : j) out.emplace_back(field<NodeId>(q, "s"), field<NodeId>(q, "t"));
    return out;
}

std::string queries_to_json(const std::vector<std::pair<NodeId, NodeId>>& queries) {
    Json j = Json::array();
    for (const auto& [s, t] : queries) j.push_back(Json{{"s", s}, {"t", t}});
    return j.dump(2) + "\n";
}

std::string graph_to_json(const PlanarGraph& g) {
    const auto& ids = g.ids();
    Json vertices = Json::array();
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        vertices.push_back(Json{{"id", ids[i]}, {"x", g.points()[i].x}, {"y", g.points()[i].y}});
    }
    Json edges = Json::array();
    for (const auto& e : g.edges()) {
        edges.push_back(
            Json{{"a", ids[e.a]}, {"b", ids[e.b]}, {"kind", e.kind == EdgeKind::Gabriel ? "gabriel" : "triangle"}});
    }
    Json faces = Json::array();
    for (const auto& f : g.faces()) {
        Json cycle = Json::array();
        for (NodeIndex v : f.cycle) cycle.push_back(ids[v]);
        faces.push_back(Json{{"cycle", cycle}, {"outer", f.outer}, {"signed_area", f.signed_area}});
    }
    return Json{{"vertices", vertices}, {"edges", edges}, {"faces", faces}}.dump(2) + "\n";
}

std::string abstraction_to_json(const HoleAbstraction& abs, const HybridTopology& topo) {
    Json rings = Json::array();
    for (const auto& r : abs.rings) {
        rings.push_back(Json{{"ring_id", r.ring_id},
                             {"kind", std::string(to_string(r.kind))},
                             {"members", ids_of(r.members, topo)},
                             {"virtual_closing", r.virtual_closing},
                             {"orientation_sum", r.orientation_sum},
                             {"perimeter", r.perimeter_length},
                             {"area", r.enclosed_area},
                             {"bbox_circumference", r.bounding_box_circumference}});
    }
    Json hulls = Json::array();
    for (const auto& h : abs.hulls) {
        Json bays = Json::array();
        for (std::size_t b = 0; b < h.bays.size(); ++b) {
            const Bay& bay = h.bays[b];
            bays.push_back(Json{{"hull_a", topo.ids[bay.hull_a]},
                                {"hull_b", topo.ids[bay.hull_b]},
                                {"start", bay.start},
                                {"inner", ids_of(bay.inner, topo)},
                                {"dominating_set", b < h.dominating_sets.size()
                                                       ? Json(ids_of(h.dominating_sets[b], topo))
                                                       : Json::array()}});
        }
        hulls.push_back(Json{{"ring_id", h.ring_id}, {"hull_nodes", ids_of(h.hull_nodes, topo)}, {"bays", bays}});
    }
    return Json{{"outer_ring", abs.outer_ring}, {"rings", rings}, {"hulls", hulls}}.dump(2) + "\n";
}

HoleAbstraction abstraction_from_json(const std::string& text, const HybridTopology& topo) {
    const Json j = parse(text);
    HoleAbstraction abs;
    abs.outer_ring = field_or<int>(j, "outer_ring", -1);
    for (const auto& r : field<Json>(j, "rings")) {
        HoleRing ring;
        ring.ring_id = field<int>(r, "ring_id");
        ring.kind = parse_kind(field<std::string>(r, "kind"));
        ring.members = indices_of(field<Json>(r, "members"), topo);
        ring.virtual_closing = field_or<bool>(r, "virtual_closing", false);
        ring.orientation_sum = field_or<double>(r, "orientation_sum", 0.0);
        measure_ring(ring, topo.points);
        abs.rings.push_back(std::move(ring));
    }
    for (const auto& h : field<Json>(j, "hulls")) {
        HullAbstraction ha;
        ha.ring_id = field<int>(h, "ring_id");
        ha.hull_nodes = indices_of(field<Json>(h, "hull_nodes"), topo);
        for (const auto& b : field<Json>(h, "bays")) {
            Bay bay;
            bay.hull_a = topo.index_of(field<NodeId>(b, "hull_a"));
            bay.hull_b = topo.index_of(field<NodeId>(b, "hull_b"));
            bay.start = field<std::size_t>(b, "start");
            bay.inner = indices_of(field<Json>(b, "inner"), topo);
            ha.bays.push_back(std::move(bay));
            ha.dominating_sets.push_back(indices_of(field_or<Json>(b, "dominating_set", Json::array()), topo));
        }
        abs.hulls.push_back(std::move(ha));
    }
    return abs;
}

std::string report_to_json(const ExperimentReport& r) {
    Json phases = Json::array();
    for (const auto& p : r.phases) phases.push_back(phase_json(p));
    Json recompute = Json::array();
    for (const auto& p : r.recompute_phases) recompute.push_back(phase_json(p));
    Json rings = Json::array();
    for (const auto& s : r.rings) {
        rings.push_back(Json{{"ring_id", s.ring_id},
                             {"kind", std::string(to_string(s.kind))},
                             {"size", s.size},
                             {"orientation_sum", s.orientation_sum},
                             {"shoelace_area", s.shoelace_area},
                             {"perimeter", s.perimeter},
                             {"area", s.area},
                             {"bbox_circumference", s.bbox_circumference},
                             {"hull_size", s.hull_size},
                             {"bay_count", s.bay_count},
                             {"jump_rounds", s.jump_rounds},
                             {"max_jump_msgs", s.max_jump_msgs},
                             {"hull_exact", s.hull_exact}});
    }
    Json cases = Json::array();
    for (const auto& [c, st] : r.competitiveness.per_case) {
        cases.push_back(Json{{"case", std::string(to_string(c))},
                             {"count", st.count},
                             {"max_ratio", st.max_ratio},
                             {"mean_ratio", st.mean_ratio},
                             {"violations", st.violations}});
    }
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        checks.push_back(Json{{"name", c.name},
                              {"measured", c.measured},
                              {"bound", c.bound},
                              {"ratio", c.bound > 0 ? c.measured / c.bound : 0.0},
                              {"ok", c.ok}});
    }
    Json routes = Json::array();
    for (const auto& rr : r.routes) routes.push_back(route_json(rr));
    const Json j{{"node_count", r.node_count},
                 {"seed", r.seed},
                 {"backend", std::string(to_string(r.backend))},
                 {"total_rounds", r.total_rounds},
                 {"phases", phases},
                 {"recompute_rounds", r.recompute_rounds},
                 {"recompute_phases", recompute},
                 {"messages",
                  {{"max_adhoc", r.messages.max_adhoc},
                   {"max_longrange", r.messages.max_longrange},
                   {"mean_adhoc", r.messages.mean_adhoc},
                   {"mean_longrange", r.messages.mean_longrange}}},
                 {"rings", rings},
                 {"competitiveness", {{"per_case", cases}, {"min_ratio", r.competitiveness.min_ratio}}},
                 {"storage",
                  {{"hull", storage_json(r.storage.hull)},
                   {"boundary", storage_json(r.storage.boundary)},
                   {"other", storage_json(r.storage.other)},
                   {"total_hull_size", r.storage.total_hull_size},
                   {"max_perimeter", r.storage.max_perimeter}}},
                 {"checks", checks},
                 {"all_ok", r.all_ok()},
                 {"routes", routes}};
    return j.dump(2) + "\n";
}

std::vector<RouteResult> routes_from_json(const std::string& text, const HybridTopology& topo) {
    const Json j = parse(text);
    const Json& list = j.is_array() ? j : field<Json>(j, "routes");
    std::vector<RouteResult> out;
    for (const auto& r : list) {
        RouteResult rr;
        rr.s = field<NodeId>(r, "s");
        rr.t = field<NodeId>(r, "t");
        rr.path = field<std::vector<NodeId>>(r, "path");
        for (NodeId id : rr.path) rr.path_index.push_back(topo.index_of(id));
        rr.case_taken = parse_case(field_or<std::string>(r, "case", "visible"));
        rr.euclidean_length = field_or<double>(r, "euclidean_length", 0.0);
        rr.udg_shortest = field_or<double>(r, "udg_shortest", 0.0);
        rr.straight_line = field_or<double>(r, "straight_line", 0.0);
        rr.competitive_ratio = field_or<double>(r, "competitive_ratio", 1.0);
        rr.within_bound = field_or<bool>(r, "within_bound", true);
        out.push_back(std::move(rr));
    }
    return out;
}

std::string transcript_to_jsonl(const std::vector<TranscriptRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += Json{{"round", r.round},
                    {"src", r.src},
                    {"dst", r.dst},
                    {"channel", std::string(to_string(r.channel))},
                    {"bytes", r.bytes},
                    {"tag", r.tag}}
                   .dump();
        out += '\n';
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << content;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace hybrid
