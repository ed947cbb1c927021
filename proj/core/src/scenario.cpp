#include "hybrid/scenario.h"

#include "hybrid/errors.h"
#include "hybrid/holes.h"
#include "hybrid/ldel.h"
#include "hybrid/routing.h"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <unordered_map>

namespace hybrid {

std::string_view to_string(SamplingMode m) { return m == SamplingMode::GridJitter ? "grid" : "poisson"; }

SamplingMode parse_sampling_mode(std::string_view s) {
    if (s == "grid") return SamplingMode::GridJitter;
    if (s == "poisson") return SamplingMode::PoissonDisk;
    throw Error(ErrorKind::InvalidArgument, "unknown sampling mode '" + std::string(s) + "'");
}

Polygon rectangle(double x0, double y0, double x1, double y1) { return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}}; }

namespace {

bool blocked(Point p, const std::vector<Polygon>& obstacles) {
    for (const Polygon& o : obstacles) {
        if (point_in_polygon_strict(p, o.vertices) || point_on_polygon_boundary(p, o.vertices)) return true;
    }
    return false;
}

std::vector<Point> sample_grid(const ScenarioSpec& spec, double spacing, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> jit(-spec.jitter, spec.jitter);
    const Rect& r = spec.region;
    const auto nx = static_cast<std::size_t>(std::floor((r.x1 - r.x0) / spacing + 1e-9)) + 1;
    const auto ny = static_cast<std::size_t>(std::floor((r.y1 - r.y0) / spacing + 1e-9)) + 1;
    std::vector<Point> out;
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const Point base{r.x0 + static_cast<double>(i) * spacing, r.y0 + static_cast<double>(j) * spacing};
            if (blocked(base, spec.obstacles)) continue;
            // Jitter that leaves the region is mirrored back inside.
            double x = base.x + jit(rng);
            double y = base.y + jit(rng);
            if (x < r.x0 || x > r.x1) x = 2.0 * base.x - x;
            if (y < r.y0 || y > r.y1) y = 2.0 * base.y - y;
            if (blocked({x, y}, spec.obstacles)) continue;
            out.push_back({x, y});
        }
    }
    return out;
}

// Dart throwing with a bucket grid of cell size equal to the exclusion radius.
std::vector<Point> sample_poisson(const ScenarioSpec& spec, std::size_t target, double radius, std::mt19937_64& rng) {
    const Rect& r = spec.region;
    std::uniform_real_distribution<double> ux(r.x0, r.x1);
    std::uniform_real_distribution<double> uy(r.y0, r.y1);
    std::uniform_real_distribution<double> jit(-spec.jitter, spec.jitter);
    std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets;
    auto key = [&](std::int64_t cx, std::int64_t cy) { return cx * 1000003 + cy; };
    auto cell = [&](double v, double origin) { return static_cast<std::int64_t>(std::floor((v - origin) / radius)); };
    std::vector<Point> out;
    const std::size_t attempts = 60 * target + 1000;
    for (std::size_t a = 0; a < attempts && out.size() < target; ++a) {
        const Point p{ux(rng), uy(rng)};
        if (blocked(p, spec.obstacles)) continue;
        const std::int64_t cx = cell(p.x, r.x0);
        const std::int64_t cy = cell(p.y, r.y0);
        bool ok = true;
        for (std::int64_t dx = -1; dx <= 1 && ok; ++dx) {
            for (std::int64_t dy = -1; dy <= 1 && ok; ++dy) {
                auto it = buckets.find(key(cx + dx, cy + dy));
                if (it == buckets.end()) continue;
                for (std::size_t q : it->second) {
                    if (dist(out[q], p) < radius) {
                        ok = false;
                        break;
                    }
                }
            }
        }
        if (!ok) continue;
        buckets[key(cx, cy)].push_back(out.size());
        out.push_back(p);
    }
    for (Point& p : out) {
        p.x += jit(rng);
        p.y += jit(rng);
    }
    return out;
}

}  // namespace

HybridTopology generate_scenario(const ScenarioSpec& spec) {
    const double area = spec.region.area();
    if (!(area > 0.0)) throw Error(ErrorKind::Generation, "empty region");
    if (spec.node_count < 2) throw Error(ErrorKind::Generation, "need at least two nodes");
    const double density = spec.density > 0.0 ? spec.density : static_cast<double>(spec.node_count) / area;
    if (area * density < static_cast<double>(spec.node_count) * (1.0 - 1e-9)) {
        throw Error(ErrorKind::Generation, "density too low: region holds " + std::to_string(area * density) +
                                               " nodes, " + std::to_string(spec.node_count) + " requested");
    }
    double spacing = spec.spacing > 0.0 ? spec.spacing
                                        : (spec.mode == SamplingMode::GridJitter ? 1.0 / std::sqrt(density)
                                                                                 : 0.7 / std::sqrt(density));
    std::size_t target = spec.node_count;
    std::string diagnostics;
    for (int attempt = 0; attempt <= spec.retry_cap; ++attempt) {
        std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                          static_cast<std::uint32_t>(attempt)};
        std::mt19937_64 rng(seq);
        const std::vector<Point> pts = spec.mode == SamplingMode::GridJitter ? sample_grid(spec, spacing, rng)
                                                                             : sample_poisson(spec, target, spacing, rng);
        std::map<NodeId, Point> nodes;
        for (std::size_t i = 0; i < pts.size(); ++i) nodes.emplace(static_cast<NodeId>(i), pts[i]);
        if (nodes.size() < 2) {
            diagnostics += "attempt " + std::to_string(attempt) + ": no room outside obstacles; ";
            continue;
        }
        HybridTopology topo = build_udg_unchecked(nodes);
        if (!is_connected(topo.adhoc)) {
            diagnostics += "attempt " + std::to_string(attempt) + ": disconnected (" + std::to_string(nodes.size()) +
                           " nodes, spacing " + std::to_string(spacing) + "); ";
            spacing *= 0.93;
            if (spec.mode == SamplingMode::PoissonDisk) target = target + target / 12 + 1;
            continue;
        }
        if (spec.require_disjoint_hulls) {
            try {
                const PlanarGraph g = build_ldel2(topo);
                const HoleAbstraction abs = centralized_abstraction(g);
                check_hulls_disjoint(abs.hull_polygons(g.points()));
            } catch (const Error& e) {
                diagnostics += "attempt " + std::to_string(attempt) + ": " + e.what() + "; ";
                continue;
            }
        }
        return topo;
    }
    throw Error(ErrorKind::Generation, "retry cap exceeded: " + diagnostics);
}

std::vector<std::string> fixture_names() {
    return {"grid36-hole4", "two-holes", "cshape-40", "tshape", "cross-bays", "comb-bay"};
}

HybridTopology make_fixture(std::string_view name) {
    ScenarioSpec spec;
    spec.seed = 1;
    spec.mode = SamplingMode::GridJitter;
    spec.require_disjoint_hulls = false;
    spec.retry_cap = 0;
    if (name == "grid36-hole4") {
        spec.region = {0.0, 0.0, 3.5, 3.5};
        spec.spacing = 0.7;
        spec.obstacles = {rectangle(1.05, 1.05, 2.45, 2.45)};
    } else if (name == "two-holes") {
        spec.region = {0.0, 0.0, 7.0, 3.5};
        spec.spacing = 0.7;
        spec.obstacles = {rectangle(1.05, 1.05, 2.45, 2.45), rectangle(4.55, 1.05, 5.95, 2.45)};
    } else if (name == "cshape-40") {
        // Two concentric arcs of 20 nodes each; the opening faces +x.
        const double half_mouth = std::asin(1.5 / 2.6);
        std::map<NodeId, Point> nodes;
        NodeId id = 0;
        for (double radius : {2.0, 2.6}) {
            for (int i = 0; i < 20; ++i) {
                const double a = half_mouth + (2.0 * std::numbers::pi - 2.0 * half_mouth) * i / 19.0;
                nodes.emplace(id++, Point{radius * std::cos(a), radius * std::sin(a)});
            }
        }
        return build_udg(nodes);
    } else if (name == "tshape") {
        spec.region = {0.0, 0.0, 4.8, 3.6};
        spec.spacing = 0.6;
        spec.obstacles = {rectangle(-1.0, -1.0, 1.5, 2.7), rectangle(3.3, -1.0, 5.8, 2.7)};
    } else if (name == "cross-bays") {
        spec.region = {0.0, 0.0, 9.0, 9.0};
        spec.spacing = 0.5;
        spec.obstacles = {rectangle(1.6, 3.6, 7.4, 5.4), rectangle(3.6, 1.6, 5.4, 7.4)};
    } else if (name == "comb-bay") {
        spec.region = {0.0, 0.0, 10.0, 10.0};
        spec.spacing = 0.5;
        spec.obstacles = {rectangle(2.0, 1.0, 3.0, 9.0), rectangle(2.9, 7.8, 8.0, 9.0), rectangle(2.9, 1.0, 8.0, 2.2),
                          rectangle(2.9, 4.4, 5.5, 5.6)};
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown fixture '" + std::string(name) + "'");
    }
    return generate_scenario(spec);
}

}  // namespace hybrid
