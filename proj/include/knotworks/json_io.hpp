#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "knotworks/async_sim.hpp"
#include "knotworks/bead_reversal.hpp"
#include "knotworks/detection.hpp"
#include "knotworks/edge_reversal.hpp"
#include "knotworks/orientation.hpp"
#include "knotworks/resource_order.hpp"
#include "knotworks/wait_models.hpp"

namespace knotworks {

// All documents carry a top-level "format": "knotworks/1". Parsers accept a
// missing format field but reject any other value; unknown extra fields
// (e.g. "description") are ignored. Emitted JSON uses insertion order, so
// identical inputs serialize byte-identically.
using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatTag = "knotworks/1";

// Reads and parses a file; parse errors and format mismatches become
// InputError.
Json load_json_file(const std::string& path);
void check_format(const Json& j);

Graph parse_graph(const Json& j);
Json graph_to_json(const Graph& g);

Digraph parse_digraph(const Json& j);
Json digraph_to_json(const Digraph& d);

WaitCondition parse_condition(const Json& j);
Json condition_to_json(const WaitCondition& cond);

// {"vertices": ..., "arcs": ..., "conditions": {vertex: condition, ...}};
// vertices without an entry default to AND.
WaitForGraph parse_wait_for_graph(const Json& j);
Json wait_for_graph_to_json(const WaitForGraph& w);

// {"graph": <graph>, "directions": [[tail, head], ...]}.
AcyclicOrientation parse_orientation(const Json& j);
// Directions only, for when the graph travels separately.
AcyclicOrientation parse_orientation_over(const Json& directions,
                                          std::shared_ptr<const Graph> graph);
Json orientation_to_json(const AcyclicOrientation& orientation);

// {"rates": {process: rate, ...}} — every graph vertex must be covered.
RateVector parse_rates(const Json& j, const Graph& g);
Json rates_to_json(const RateVector& rates, const Graph& g);

// {"beads": [{"edge": [a, b], "at_i": n, "at_j": n}, ...]} — at_i counts the
// beads on the side of the first endpoint listed; every edge appears once.
BeadPlacement parse_beads(const Json& j, const Graph& g);
Json beads_to_json(const BeadPlacement& p, const Graph& g);

// {"processes": [...], "resources": [...], "needs": {process: [resource...]}}.
ResourceSystem parse_resource_system(const Json& j);
Json resource_system_to_json(const ResourceSystem& sys);

Coloring parse_coloring(const Json& j, const Graph& g);
Json coloring_to_json(const Coloring& coloring, const Graph& g);

struct Scenario {
  ResourceSystem system;
  PolicySpec policy;
  Workload workload;
  std::uint64_t seed = 0;
  std::int64_t max_events = 0;
};

// Scenario files drive `asim run`: system + policy + per-process demand
// scripts + seed + event budget. The policy's orientation may be given as
// "directions" or as "auto" for the deterministic defaults.
Scenario parse_scenario(const Json& j);

Json verdict_to_json(const Verdict& verdict, const Digraph& w, const std::string& model);

Json placement_report_to_json(const PlacementReport& report, const Graph& g);
Json ratio_report_to_json(const RatioReport& report, const Graph& g,
                          const RateVector& rates);
Json smer_trace_summary_to_json(const SmerTrace& trace, const Graph& g);

Json ser_trace_summary_to_json(const SerTrace& trace);
Json interleaved_coloring_to_json(const InterleavedColoring& coloring, const Graph& g);

Json sim_trace_summary_to_json(const SimTrace& trace, const ResourceSystem& sys);
Json sim_event_to_json(const SimEvent& event, const ResourceSystem& sys);

}  // namespace knotworks
