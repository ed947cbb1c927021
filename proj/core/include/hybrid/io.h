#pragma once

#include "hybrid/holes.h"
#include "hybrid/pipeline.h"
#include "hybrid/routing.h"
#include "hybrid/scenario.h"
#include "hybrid/simengine.h"
#include "hybrid/topology.h"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace hybrid {

/// Scenario file: {"nodes": [{"id", "x", "y"}], "radius": 1.0}.
std::string scenario_to_json(const HybridTopology& topo);
HybridTopology scenario_from_json(const std::string& text);

ScenarioSpec scenario_spec_from_json(const std::string& text);
std::string scenario_spec_to_json(const ScenarioSpec& spec);

/// Pipeline configuration; unknown keys are rejected.
PipelineConfig config_from_json(const std::string& text);

/// Query batch: [{"s": id, "t": id}, ...].
std::vector<std::pair<NodeId, NodeId>> queries_from_json(const std::string& text);
std::string queries_to_json(const std::vector<std::pair<NodeId, NodeId>>& queries);

/// Vertices, edges with their kind, and faces by node id.
std::string graph_to_json(const PlanarGraph& g);

std::string abstraction_to_json(const HoleAbstraction& abs, const HybridTopology& topo);
HoleAbstraction abstraction_from_json(const std::string& text, const HybridTopology& topo);

std::string report_to_json(const ExperimentReport& report);
/// Route records of a report (or a bare list of route records).
std::vector<RouteResult> routes_from_json(const std::string& text, const HybridTopology& topo);

/// One JSON object per line: {round, src, dst, channel, bytes, tag}.
std::string transcript_to_jsonl(const std::vector<TranscriptRecord>& records);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace hybrid
