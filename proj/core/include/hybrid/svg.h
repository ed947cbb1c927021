#pragma once

#include "hybrid/holes.h"
#include "hybrid/routing.h"
#include "hybrid/topology.h"

#include <filesystem>
#include <string>
#include <vector>

namespace hybrid {

/// Layered drawing: UDG edges, LDel2 edges, hole rings, hulls, bays, nodes and
/// one polyline per route. Output bytes depend only on the inputs.
std::string svg_document(const HybridTopology& topo, const HoleAbstraction& abstraction,
                         const std::vector<RouteResult>& routes);

void render_svg(const HybridTopology& topo, const HoleAbstraction& abstraction, const std::vector<RouteResult>& routes,
                const std::filesystem::path& out);

}  // namespace hybrid
