#include "hybrid/errors.h"
#include "hybrid/io.h"
#include "hybrid/log.h"
#include "hybrid/pipeline.h"
#include "hybrid/scenario.h"
#include "hybrid/svg.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

using namespace hybrid;

namespace {

struct RunOptions {
    std::string topo;
    std::string config;
    std::string queries;
    std::string backend;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> sample;
    std::string report;
    std::string abstraction;
    std::string transcript;
    std::string graph;
    bool recompute = false;
};

PipelineConfig load_config(const RunOptions& o) {
    PipelineConfig c = o.config.empty() ? PipelineConfig{} : config_from_json(read_file(o.config));
    if (!o.backend.empty()) c.backend = parse_backend(o.backend);
    if (o.seed) c.seed = *o.seed;
    if (o.sample) c.sampled_queries = *o.sample;
    if (!o.queries.empty()) c.queries = queries_from_json(read_file(o.queries));
    if (!o.transcript.empty()) c.transcript = true;
    return c;
}

int cmd_gen(const std::string& spec_path, const std::string& fixture, std::optional<std::uint64_t> seed,
            const std::string& out) {
    HybridTopology topo;
    if (!fixture.empty()) {
        topo = make_fixture(fixture);
    } else {
        ScenarioSpec spec = spec_path.empty() ? ScenarioSpec{} : scenario_spec_from_json(read_file(spec_path));
        if (seed) spec.seed = *seed;
        topo = generate_scenario(spec);
    }
    const std::string text = scenario_to_json(topo);
    if (out.empty()) {
        std::cout << text;
    } else {
        write_file(out, text);
    }
    log(LogLevel::Info, "generated " + std::to_string(topo.size()) + " nodes");
    return 0;
}

int cmd_run(const RunOptions& o) {
    const HybridTopology topo = scenario_from_json(read_file(o.topo));
    const PipelineConfig config = load_config(o);
    Pipeline p(topo, config);
    p.build();
    p.run_queries(config.queries.empty() ? p.sample_queries(config.sampled_queries) : config.queries);
    if (o.recompute) p.periodic_recompute();
    const ExperimentReport rep = p.report();
    const std::string text = report_to_json(rep);
    if (o.report.empty()) {
        std::cout << text;
    } else {
        write_file(o.report, text);
    }
    if (!o.abstraction.empty()) write_file(o.abstraction, abstraction_to_json(p.abstraction(), p.topology()));
    if (!o.transcript.empty()) write_file(o.transcript, transcript_to_jsonl(p.transcript()));
    if (!o.graph.empty()) write_file(o.graph, graph_to_json(p.graph()));
    for (const auto& c : rep.checks) {
        log(c.ok ? LogLevel::Info : LogLevel::Error,
            c.name + ": " + std::to_string(c.measured) + " / " + std::to_string(c.bound) + (c.ok ? "" : " VIOLATED"));
    }
    return rep.all_ok() ? 0 : 1;
}

int cmd_route(const RunOptions& o, NodeId s, NodeId t) {
    const HybridTopology topo = scenario_from_json(read_file(o.topo));
    PipelineConfig config = load_config(o);
    Pipeline p(topo, config);
    p.build();
    const RouteResult r = p.run_queries({{s, t}}).front();
    ExperimentReport one;
    one.routes = {r};
    const auto j = nlohmann::ordered_json::parse(report_to_json(one));
    std::cout << j.at("routes").at(0).dump(2) << "\n";
    return r.within_bound ? 0 : 1;
}

int cmd_render(const std::string& topo_path, const std::string& abs_path, const std::string& routes_path,
               const std::string& out) {
    const HybridTopology topo = scenario_from_json(read_file(topo_path));
    const HoleAbstraction abs = abs_path.empty() ? centralized_abstraction(build_ldel2(topo))
                                                 : abstraction_from_json(read_file(abs_path), topo);
    const std::vector<RouteResult> routes =
        routes_path.empty() ? std::vector<RouteResult>{} : routes_from_json(read_file(routes_path), topo);
    render_svg(topo, abs, routes, out);
    return 0;
}

int cmd_bench(const std::vector<std::size_t>& sizes, std::size_t seeds, unsigned threads, std::size_t queries) {
    struct Job {
        std::size_t n;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t n : sizes) {
        for (std::uint64_t s = 1; s <= seeds; ++s) jobs.push_back({n, s});
    }
    std::vector<nlohmann::ordered_json> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> all_ok{true};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            ScenarioSpec spec;
            spec.seed = jobs[i].seed;
            spec.node_count = jobs[i].n;
            const double side = std::sqrt(static_cast<double>(jobs[i].n) / 4.0);
            spec.region = {0.0, 0.0, side, side};
            spec.spacing = 0.35;
            auto& row = rows[i];
            row["n"] = jobs[i].n;
            row["seed"] = jobs[i].seed;
            try {
                PipelineConfig config;
                config.seed = jobs[i].seed;
                config.sampled_queries = queries;
                const ExperimentReport rep = run_pipeline(generate_scenario(spec), config);
                row["nodes"] = rep.node_count;
                row["total_rounds"] = rep.total_rounds;
                row["max_longrange_per_node"] = rep.messages.max_longrange;
                row["all_ok"] = rep.all_ok();
                if (!rep.all_ok()) all_ok = false;
            } catch (const Error& e) {
                row["error"] = e.what();
                all_ok = false;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < std::max(1u, threads); ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    std::cout << nlohmann::ordered_json(rows).dump(2) << "\n";
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid ad hoc network abstraction and routing"};
    app.require_subcommand(1);

    std::string spec_path, fixture, out;
    std::optional<std::uint64_t> gen_seed;
    auto* gen = app.add_subcommand("gen", "Generate a scenario");
    gen->add_option("--spec", spec_path, "Scenario spec JSON");
    gen->add_option("--fixture", fixture, "Named built-in network");
    gen->add_option("--seed", gen_seed, "Override the spec seed");
    gen->add_option("--out", out, "Output topology JSON (stdout when omitted)");

    RunOptions ro;
    auto add_run_options = [&](CLI::App* c) {
        c->add_option("--topo", ro.topo, "Topology JSON")->required();
        c->add_option("--config", ro.config, "Pipeline config JSON");
        c->add_option("--backend", ro.backend, "visibility or overlay-delaunay");
        c->add_option("--seed", ro.seed, "Override the config seed");
    };
    auto* run = app.add_subcommand("run", "Build the abstraction and run a query batch");
    add_run_options(run);
    run->add_option("--queries", ro.queries, "Query batch JSON");
    run->add_option("--sample", ro.sample, "Number of random queries when no batch is given");
    run->add_option("--report", ro.report, "Report JSON (stdout when omitted)");
    run->add_option("--abstraction", ro.abstraction, "Write the abstraction JSON");
    run->add_option("--transcript", ro.transcript, "Write the message transcript (JSON lines)");
    run->add_option("--graph", ro.graph, "Write the LDel2 graph dump");
    run->add_flag("--recompute", ro.recompute, "Run one periodic recompute after the queries");

    NodeId src = 0, dst = 0;
    auto* route = app.add_subcommand("route", "Route a single query");
    add_run_options(route);
    route->add_option("--s", src, "Source id")->required();
    route->add_option("--t", dst, "Target id")->required();

    std::string r_topo, r_abs, r_routes, r_out;
    auto* render = app.add_subcommand("render", "Render topology, abstraction and routes to SVG");
    render->add_option("--topo", r_topo, "Topology JSON")->required();
    render->add_option("--abstraction", r_abs, "Abstraction JSON");
    render->add_option("--routes", r_routes, "Report or route list JSON");
    render->add_option("--out", r_out, "Output SVG")->required();

    std::vector<std::size_t> sizes{512, 2048};
    std::size_t seeds = 1, bench_queries = 20;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    auto* bench = app.add_subcommand("bench", "Pipeline round counts over generated scenarios");
    bench->add_option("--sizes", sizes, "Node counts")->delimiter(',');
    bench->add_option("--seeds", seeds, "Seeds per size");
    bench->add_option("--threads", threads, "Worker threads");
    bench->add_option("--queries", bench_queries, "Sampled queries per scenario");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*gen) return cmd_gen(spec_path, fixture, gen_seed, out);
        if (*run) return cmd_run(ro);
        if (*route) return cmd_route(ro, src, dst);
        if (*render) return cmd_render(r_topo, r_abs, r_routes, r_out);
        if (*bench) return cmd_bench(sizes, seeds, threads, bench_queries);
    } catch (const Error& e) {
        log(LogLevel::Error, std::string(to_string(e.kind())) + ": " + e.what());
        return 2;
    }
    return 2;
}
