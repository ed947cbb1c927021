#pragma once

#include "hybrid/geometry.h"
#include "hybrid/topology.h"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hybrid {

struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 10.0;
    double y1 = 10.0;
    double area() const { return (x1 - x0) * (y1 - y0); }
};

enum class SamplingMode { GridJitter, PoissonDisk };

std::string_view to_string(SamplingMode m);
SamplingMode parse_sampling_mode(std::string_view s);

struct ScenarioSpec {
    std::uint64_t seed = 1;
    std::size_t node_count = 100;
    Rect region;
    std::vector<Polygon> obstacles;
    double density = 0.0;  // nodes per unit area; 0 derives it from node_count
    double jitter = 1e-6;
    SamplingMode mode = SamplingMode::PoissonDisk;
    double spacing = 0.0;  // grid spacing or Poisson-disk radius; 0 derives it from density
    int retry_cap = 25;
    bool require_disjoint_hulls = true;
};

/// Samples nodes outside the obstacles, ids 0..n-1 in generation order.
/// Retries with denser sampling until the unit disk graph is connected and
/// (optionally) the hole hulls are pairwise disjoint.
HybridTopology generate_scenario(const ScenarioSpec& spec);

/// Named hand-built networks used by tests and the acceptance gate.
std::vector<std::string> fixture_names();
HybridTopology make_fixture(std::string_view name);

/// Axis-aligned rectangle polygon, counterclockwise.
Polygon rectangle(double x0, double y0, double x1, double y1);

}  // namespace hybrid
