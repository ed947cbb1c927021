// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include "support.h"

#include "hybrid/io.h"
#include "hybrid/pipeline.h"
#include "hybrid/scenario.h"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

using namespace hybrid;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Outcome& o) {
    std::printf("%s  %2d %-22s %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Scenario {
    std::unique_ptr<Pipeline> pipeline;
    ExperimentReport report;
};

}  // namespace

int main() {
    const auto t_start = std::chrono::steady_clock::now();

    // Twenty generated scenarios, n from 100 to 2000.
    std::vector<Scenario> scenarios;
    for (std::size_t i = 0; i < 20; ++i) {
        const std::size_t n = 100 + 100 * i;
        PipelineConfig config;
        config.seed = i + 1;
        auto p = std::make_unique<Pipeline>(testing::obstacle_scenario(n, i + 1, 1 + static_cast<int>(i % 3)), config);
        p->build();
        p->run_queries(p->sample_queries(150));
        Scenario s;
        s.report = p->report();
        s.pipeline = std::move(p);
        scenarios.push_back(std::move(s));
    }

    // 1. Spanner: Dijkstra in LDel2 versus UDG on 100 pairs per scenario.
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::size_t pairs = 0, violations = 0;
        double worst = 0.0;
        for (const auto& s : scenarios) {
            const auto& topo = s.pipeline->topology();
            const auto& g = s.pipeline->graph();
            for (const auto& [a, b] : s.pipeline->sample_queries(100)) {
                const NodeIndex u = topo.index_of(a);
                const NodeIndex v = topo.index_of(b);
                const double d_udg = shortest_path_lengths(topo.points, topo.adhoc, u)[v];
                const double d_ldel = shortest_path_lengths(g.points(), g.adjacency(), u)[v];
                const double ratio = d_ldel / d_udg;
                worst = std::max(worst, ratio);
                if (ratio > 1.998 + 1e-12) ++violations;
                ++pairs;
            }
        }
        const double secs = seconds_since(t0);
        report(1, "spanner", {violations == 0 && secs < 120.0,
                              fmt("max ratio %.4f (bound 1.998), %.0f pairs, %.0f violations, %.1f s", worst,
                                  static_cast<double>(pairs), static_cast<double>(violations), secs)});
    }

    // 2 and 3. Chew bound on visible pairs; case-1 bounds for both overlay backends.
    {
        std::size_t visible = 0, visible_bad = 0;
        double visible_worst = 0.0;
        std::map<Backend, std::size_t> case1, case1_bad;
        std::map<Backend, double> case1_worst;
        for (const auto& s : scenarios) {
            const auto& topo = s.pipeline->topology();
            const Router delaunay(s.pipeline->graph(), topo, s.pipeline->abstraction(), Backend::OverlayDelaunay);
            for (const auto& [a, b] : s.pipeline->sample_queries(150)) {
                const NodeIndex u = topo.index_of(a);
                const NodeIndex v = topo.index_of(b);
                for (const Router* r : {&s.pipeline->router(), &delaunay}) {
                    const RouteResult res = r->route(u, v);
                    if (res.case_taken == RouteCase::Visible && r == &s.pipeline->router()) {
                        ++visible;
                        visible_worst = std::max(visible_worst, res.euclidean_length / res.straight_line);
                        if (res.euclidean_length > kChewBound * res.straight_line + 1e-9) ++visible_bad;
                    }
                    if (res.case_taken == RouteCase::Case1) {
                        const Backend be = r->backend();
                        ++case1[be];
                        case1_worst[be] = std::max(case1_worst[be], res.competitive_ratio);
                        if (!res.within_bound) ++case1_bad[be];
                    }
                }
            }
        }
        report(2, "chew-bound", {visible >= 500 && visible_bad == 0,
                                 fmt("max |path|/|st| %.3f (bound 5.9), %.0f visible pairs, %.0f violations",
                                     visible_worst, static_cast<double>(visible), static_cast<double>(visible_bad))});
        const auto vis = Backend::Visibility;
        const auto del = Backend::OverlayDelaunay;
        const bool ok3 = case1[vis] >= 500 && case1[del] >= 500 && case1_bad[vis] == 0 && case1_bad[del] == 0;
        report(3, "competitiveness",
               {ok3, fmt("visibility max %.3f (17.7) over %.0f, overlay-delaunay max %.3f (35.37) over %.0f",
                         case1_worst[vis], static_cast<double>(case1[vis]), case1_worst[del],
                         static_cast<double>(case1[del])) +
                         fmt(", violations %.0f/%.0f", static_cast<double>(case1_bad[vis]),
                             static_cast<double>(case1_bad[del]))});
    }

    // 4. Same-bay routing on the bay fixtures.
    {
        std::size_t pairs = 0, bad = 0, with_extremes = 0;
        double worst = 0.0;
        for (const char* name : {"comb-bay", "cross-bays"}) {
            Pipeline p(make_fixture(name), {});
            p.build();
            const Router& r = p.router();
            std::map<std::pair<int, int>, std::vector<NodeIndex>> bays;
            for (NodeIndex v = 0; v < p.topology().size(); ++v) {
                const auto key = r.bay_of(v);
                if (key.first >= 0) bays[key].push_back(v);
            }
            for (const auto& [key, nodes] : bays) {
                for (NodeIndex s : nodes) {
                    for (NodeIndex t : nodes) {
                        if (s == t) continue;
                        const RouteResult res = r.route_bay(s, t);
                        ++pairs;
                        if (res.extreme_points > 0) ++with_extremes;
                        worst = std::max(worst, res.competitive_ratio / res.bound);
                        if (!res.within_bound) ++bad;
                    }
                }
            }
        }
        report(4, "bay-routing", {pairs > 0 && bad == 0,
                                  fmt("%.0f same-bay pairs (%.0f via extreme points), max ratio/bound %.3f, "
                                      "%.0f violations",
                                      static_cast<double>(pairs), static_cast<double>(with_extremes), worst,
                                      static_cast<double>(bad))});
    }

    // 5 and 6. Hull exactness and ring orientation on every ring.
    {
        std::size_t rings = 0, mismatch = 0, orient_bad = 0;
        for (const auto& s : scenarios) {
            for (const auto& ring : s.report.rings) {
                ++rings;
                if (!ring.hull_exact) ++mismatch;
                const bool hole = ring.kind == RingKind::InnerHole || ring.kind == RingKind::OuterHole;
                const bool sign_ok = hole ? ring.shoelace_area > 0 : ring.shoelace_area < 0;
                if (std::abs(ring.orientation_sum - (hole ? -360.0 : 360.0)) > 1e-6 || !sign_ok) ++orient_bad;
            }
        }
        report(5, "hull-exactness", {mismatch == 0, fmt("%.0f rings, %.0f mismatches", static_cast<double>(rings),
                                                        static_cast<double>(mismatch))});
        report(6, "hole-classification",
               {orient_bad == 0, fmt("%.0f rings, %.0f outside 1e-6 of +-360 or disagreeing with shoelace",
                                     static_cast<double>(rings), static_cast<double>(orient_bad))});
    }

    // 7 and 8. Round scaling, pointer jumping, message work.
    {
        auto mean_rounds = [](std::size_t n, std::vector<ExperimentReport>& out) {
            double sum = 0;
            for (std::uint64_t seed = 1; seed <= 3; ++seed) {
                PipelineConfig config;
                config.seed = seed;
                Pipeline p(testing::obstacle_scenario(n, seed, 2), config);
                p.build();
                out.push_back(p.report());
                sum += static_cast<double>(out.back().total_rounds);
            }
            return sum / 3.0;
        };
        std::vector<ExperimentReport> reports;
        for (const auto& s : scenarios) reports.push_back(s.report);
        const double r512 = mean_rounds(512, reports);
        const double r2048 = mean_rounds(2048, reports);
        const double bound = std::pow(std::log2(2048.0) / std::log2(512.0), 2) * 1.5;
        double jump_ratio = 0, msg_ratio = 0, lr_ratio = 0;
        const double c = PipelineConfig{}.c_longrange;
        for (const auto& rep : reports) {
            for (const auto& ring : rep.rings) {
                const double levels = static_cast<double>(ceil_log2(ring.size) + 1);
                jump_ratio = std::max(jump_ratio, ring.jump_rounds / levels);
                msg_ratio = std::max(msg_ratio, static_cast<double>(ring.max_jump_msgs) / (2 * levels));
            }
            const double l = std::log2(static_cast<double>(rep.node_count));
            lr_ratio = std::max(lr_ratio, static_cast<double>(rep.messages.max_longrange) / (l * l));
        }
        report(7, "round-bounds",
               {r2048 / r512 <= bound && jump_ratio <= 1.0,
                fmt("rounds(2048)/rounds(512) = %.0f/%.0f = %.3f (bound %.3f)", r2048, r512, r2048 / r512, bound) +
                    fmt(", max jump rounds/(ceil(log2 k)+1) %.3f", jump_ratio)});
        report(8, "message-work", {msg_ratio <= 1.0 && lr_ratio <= c,
                                   fmt("max pj msgs/(2(ceil(log2 k)+1)) %.3f, max long-range/log2^2 n %.3f (c = %.0f)",
                                       msg_ratio, lr_ratio, c)});
    }

    // 9. Storage audit.
    {
        std::size_t bad = 0;
        double hull_ratio = 0, other_max = 0, boundary_max = 0;
        for (const auto& s : scenarios) {
            const auto& st = s.report.storage;
            if (st.hull.nodes) hull_ratio = std::max(hull_ratio, st.hull.max_refs / static_cast<double>(st.total_hull_size));
            other_max = std::max(other_max, static_cast<double>(st.other.max_refs));
            boundary_max = std::max(boundary_max, static_cast<double>(st.boundary.max_refs));
            for (const auto& c : s.report.checks) {
                if (c.name.rfind("storage-", 0) == 0 && !c.ok) ++bad;
            }
        }
        report(9, "storage-audit",
               {bad == 0, fmt("hull refs <= %.3f x sum of hull sizes (bound 4), boundary max %.0f, other max %.0f, "
                              "%.0f failed checks",
                              hull_ratio, boundary_max, other_max, static_cast<double>(bad))});
    }

    // 10. Dominating sets: 100 seeds per bay.
    {
        std::size_t bays = 0, invalid = 0;
        double worst = 0.0;
        for (const char* name : {"comb-bay", "cross-bays", "cshape-40"}) {
            Pipeline p(make_fixture(name), {});
            p.build();
            std::vector<std::vector<NodeIndex>> paths;
            for (const auto& h : p.abstraction().hulls) {
                for (const auto& b : h.bays) paths.push_back(b.path());
            }
            for (const auto& path : paths) {
                ++bays;
                double total = 0;
                for (std::uint64_t seed = 1; seed <= 100; ++seed) {
                    RoundEngine engine(p.topology(), seed);
                    const auto ds = dominating_set(engine, {path});
                    if (!dominates_path(path, ds.sets[0])) ++invalid;
                    total += static_cast<double>(ds.sets[0].size());
                }
                const double optimum = std::ceil(static_cast<double>(path.size()) / 3.0);
                worst = std::max(worst, total / 100.0 / optimum);
            }
        }
        report(10, "dominating-set",
               {bays > 0 && invalid == 0 && worst <= 3.0,
                fmt("%.0f bays x 100 seeds, %.0f invalid, worst mean size / ceil(m/3) = %.3f (bound 3)",
                    static_cast<double>(bays), static_cast<double>(invalid), worst)});
    }

    // 11. Determinism of report and transcript files.
    {
        const auto dir = std::filesystem::temp_directory_path() / "hybrid_acceptance";
        std::filesystem::create_directories(dir);
        const HybridTopology topo = testing::obstacle_scenario(512, 3, 2);
        for (int run = 0; run < 2; ++run) {
            PipelineConfig config;
            config.seed = 7;
            config.transcript = true;
            Pipeline p(topo, config);
            p.build();
            p.run_queries(p.sample_queries(50));
            write_file(dir / ("report" + std::to_string(run) + ".json"), report_to_json(p.report()));
            write_file(dir / ("transcript" + std::to_string(run) + ".jsonl"), transcript_to_jsonl(p.transcript()));
        }
        const std::string r0 = read_file(dir / "report0.json");
        const std::string t0 = read_file(dir / "transcript0.jsonl");
        const bool same = r0 == read_file(dir / "report1.json") && t0 == read_file(dir / "transcript1.jsonl");
        report(11, "determinism", {same && !t0.empty(), fmt("report %.0f bytes, transcript %.0f bytes, identical: ",
                                                            static_cast<double>(r0.size()),
                                                            static_cast<double>(t0.size())) +
                                                            (same ? "yes" : "no")});
    }

    std::printf("%s: %d failing criteria, %.1f s\n", failures ? "FAILED" : "ALL PASS", failures,
                seconds_since(t_start));
    return failures ? 1 : 0;
}
