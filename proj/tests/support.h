#pragma once

#include "hybrid/errors.h"
#include "hybrid/scenario.h"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace hybrid::testing {

/// Generated network with rectangular obstacles. Even variants sample a
/// jittered grid (spacing 0.6, jitter 0.05), odd ones a Poisson-disk set
/// (radius 0.35). Obstacle layouts whose hole hulls overlap are redrawn.
inline HybridTopology obstacle_scenario(std::size_t n, std::uint64_t seed, int obstacles = 2) {
    std::string last;
    for (std::uint64_t layout = 0; layout < 50; ++layout) {
        ScenarioSpec spec;
        spec.seed = seed * 1000 + layout;
        spec.node_count = n;
        const bool grid = seed % 2 == 0;
        spec.mode = grid ? SamplingMode::GridJitter : SamplingMode::PoissonDisk;
        spec.spacing = grid ? 0.6 : 0.35;
        spec.jitter = grid ? 0.05 : 1e-6;
        const double side = grid ? 0.6 * std::sqrt(static_cast<double>(n)) : std::sqrt(static_cast<double>(n) / 4.0);
        spec.region = {0.0, 0.0, side, side};
        spec.retry_cap = 4;
        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> size(1.2, 2.6);
        for (int i = 0; i < obstacles; ++i) {
            const double w = size(rng);
            const double h = size(rng);
            if (side < w + 3.0 || side < h + 3.0) break;
            std::uniform_real_distribution<double> px(1.5, side - 1.5 - w);
            std::uniform_real_distribution<double> py(1.5, side - 1.5 - h);
            const double x = px(rng);
            const double y = py(rng);
            spec.obstacles.push_back(rectangle(x, y, x + w, y + h));
        }
        try {
            return generate_scenario(spec);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Generation) throw;
            last = e.what();
        }
    }
    throw Error(ErrorKind::Generation, "no valid obstacle layout: " + last);
}

}  // namespace hybrid::testing
