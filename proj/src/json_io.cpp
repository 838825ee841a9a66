#include "knotworks/json_io.hpp"

#include <algorithm>
#include <fstream>

namespace knotworks {

namespace {

const Json& require_field(const Json& j, const char* key) {
  if (!j.is_object()) throw InputError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("missing field \"") + key + "\"");
  return *it;
}

std::vector<VertexId> parse_id_array(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<VertexId> out;
  for (const auto& entry : j) {
    if (!entry.is_string()) throw InputError(std::string(what) + " entries must be strings");
    out.push_back(entry.get<std::string>());
  }
  return out;
}

std::pair<VertexId, VertexId> parse_id_pair(const Json& j, const char* what) {
  auto ids = parse_id_array(j, what);
  if (ids.size() != 2) throw InputError(std::string(what) + " must name two vertices");
  return {ids[0], ids[1]};
}

std::int64_t parse_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  check_format(j);
  return j;
}

void check_format(const Json& j) {
  if (!j.is_object()) return;
  auto it = j.find("format");
  if (it == j.end()) return;
  if (!it->is_string() || it->get<std::string>() != kFormatTag)
    throw InputError("unsupported format tag, expected \"" + std::string(kFormatTag) + "\"");
}

Graph parse_graph(const Json& j) {
  check_format(j);
  Graph g(parse_id_array(require_field(j, "vertices"), "vertices"));
  for (const auto& entry : require_field(j, "edges")) {
    auto [a, b] = parse_id_pair(entry, "edge");
    g.add_edge(a, b);
  }
  return g;
}

Json graph_to_json(const Graph& g) {
  Json j;
  j["format"] = kFormatTag;
  j["vertices"] = g.vertices();
  Json edges = Json::array();
  for (auto [lo, hi] : g.edges()) edges.push_back({g.id_of(lo), g.id_of(hi)});
  j["edges"] = std::move(edges);
  return j;
}

Digraph parse_digraph(const Json& j) {
  check_format(j);
  Digraph d(parse_id_array(require_field(j, "vertices"), "vertices"));
  for (const auto& entry : require_field(j, "arcs")) {
    auto [from, to] = parse_id_pair(entry, "arc");
    d.add_arc(from, to);
  }
  return d;
}

Json digraph_to_json(const Digraph& d) {
  Json j;
  j["format"] = kFormatTag;
  j["vertices"] = d.vertices();
  Json arcs = Json::array();
  for (auto [from, to] : d.arcs()) arcs.push_back({d.id_of(from), d.id_of(to)});
  j["arcs"] = std::move(arcs);
  return j;
}

WaitCondition parse_condition(const Json& j) {
  std::string model = require_field(j, "model").get<std::string>();
  if (model == "and") return AndCondition{};
  if (model == "or") return OrCondition{};
  if (model == "xy") {
    XOutOfYCondition cond;
    cond.x = static_cast<int>(parse_int(require_field(j, "x"), "x"));
    return cond;
  }
  if (model == "andor") {
    AndOrCondition cond;
    for (const auto& subset : require_field(j, "subsets"))
      cond.subsets.push_back(make_vertex_set(parse_id_array(subset, "subset")));
    std::sort(cond.subsets.begin(), cond.subsets.end());
    return cond;
  }
  if (model == "dxy") {
    DisjXYCondition cond;
    for (const auto& pair : require_field(j, "pairs")) {
      DisjXYCondition::Pair p;
      p.x = static_cast<int>(parse_int(require_field(pair, "x"), "x"));
      p.q = make_vertex_set(parse_id_array(require_field(pair, "q"), "q"));
      cond.pairs.push_back(std::move(p));
    }
    return cond;
  }
  throw InputError("unknown wait model \"" + model + "\"");
}

Json condition_to_json(const WaitCondition& cond) {
  Json j;
  switch (model_of(cond)) {
    case WaitModel::and_model:
      j["model"] = "and";
      break;
    case WaitModel::or_model:
      j["model"] = "or";
      break;
    case WaitModel::x_out_of_y:
      j["model"] = "xy";
      j["x"] = std::get<XOutOfYCondition>(cond).x;
      break;
    case WaitModel::and_or:
      j["model"] = "andor";
      j["subsets"] = std::get<AndOrCondition>(cond).subsets;
      break;
    case WaitModel::disj_x_out_of_y: {
      j["model"] = "dxy";
      Json pairs = Json::array();
      for (const auto& p : std::get<DisjXYCondition>(cond).pairs) {
        Json pair;
        pair["x"] = p.x;
        pair["q"] = p.q;
        pairs.push_back(std::move(pair));
      }
      j["pairs"] = std::move(pairs);
      break;
    }
  }
  return j;
}

WaitForGraph parse_wait_for_graph(const Json& j) {
  Digraph d = parse_digraph(j);
  std::vector<WaitCondition> conditions(d.vertex_count(), AndCondition{});
  if (j.contains("conditions")) {
    const Json& map = j.at("conditions");
    if (!map.is_object()) throw InputError("conditions must be an object");
    for (const auto& [vertex, cond] : map.items())
      conditions.at(d.index_of(vertex)) = parse_condition(cond);
  }
  return WaitForGraph(std::move(d), std::move(conditions));
}

Json wait_for_graph_to_json(const WaitForGraph& w) {
  Json j = digraph_to_json(w.digraph());
  Json conditions = Json::object();
  for (int v = 0; v < static_cast<int>(w.digraph().vertex_count()); ++v)
    if (!std::holds_alternative<AndCondition>(w.condition(v)))
      conditions[w.digraph().id_of(v)] = condition_to_json(w.condition(v));
  if (!conditions.empty()) j["conditions"] = std::move(conditions);
  return j;
}

AcyclicOrientation parse_orientation(const Json& j) {
  check_format(j);
  auto graph = std::make_shared<const Graph>(parse_graph(require_field(j, "graph")));
  return parse_orientation_over(require_field(j, "directions"), graph);
}

AcyclicOrientation parse_orientation_over(const Json& directions,
                                          std::shared_ptr<const Graph> graph) {
  if (!directions.is_array()) throw InputError("directions must be an array");
  std::vector<std::pair<VertexId, VertexId>> arcs;
  for (const auto& entry : directions) arcs.push_back(parse_id_pair(entry, "direction"));
  return AcyclicOrientation::from_arcs(std::move(graph), arcs);
}

Json orientation_to_json(const AcyclicOrientation& orientation) {
  Json j;
  j["format"] = kFormatTag;
  j["graph"] = graph_to_json(orientation.graph());
  j["graph"].erase("format");
  Json directions = Json::array();
  for (std::size_t e = 0; e < orientation.graph().edge_count(); ++e)
    directions.push_back({orientation.graph().id_of(orientation.tail_of(static_cast<int>(e))),
                          orientation.graph().id_of(orientation.head_of(static_cast<int>(e)))});
  j["directions"] = std::move(directions);
  return j;
}

RateVector parse_rates(const Json& j, const Graph& g) {
  const Json& map = require_field(j, "rates");
  if (!map.is_object()) throw InputError("rates must be an object");
  RateVector rates;
  rates.rates.assign(g.vertex_count(), 0);
  for (const auto& [id, value] : map.items())
    rates.rates.at(g.index_of(id)) = parse_int(value, "rate");
  validate_rates(g, rates);
  return rates;
}

Json rates_to_json(const RateVector& rates, const Graph& g) {
  Json map = Json::object();
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    map[g.id_of(static_cast<int>(v))] = rates.rates.at(v);
  return map;
}

BeadPlacement parse_beads(const Json& j, const Graph& g) {
  const Json& list = require_field(j, "beads");
  if (!list.is_array()) throw InputError("beads must be an array");
  BeadPlacement p;
  p.at_lo.assign(g.edge_count(), -1);
  p.at_hi.assign(g.edge_count(), -1);
  for (const auto& entry : list) {
    auto [a, b] = parse_id_pair(require_field(entry, "edge"), "edge");
    int ia = g.index_of(a), ib = g.index_of(b);
    int e = g.edge_index(ia, ib);
    if (p.at_lo[e] >= 0) throw InputError("edge " + a + "-" + b + " listed twice");
    std::int64_t at_i = parse_int(require_field(entry, "at_i"), "at_i");
    std::int64_t at_j = parse_int(require_field(entry, "at_j"), "at_j");
    bool first_is_lo = g.edges()[e].first == ia;
    p.at_lo[e] = first_is_lo ? at_i : at_j;
    p.at_hi[e] = first_is_lo ? at_j : at_i;
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    if (p.at_lo[e] < 0) {
      auto [lo, hi] = g.edges()[e];
      throw InputError("no bead counts for edge " + g.id_of(lo) + "-" + g.id_of(hi));
    }
  return p;
}

Json beads_to_json(const BeadPlacement& p, const Graph& g) {
  Json list = Json::array();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto [lo, hi] = g.edges()[e];
    Json entry;
    entry["edge"] = {g.id_of(lo), g.id_of(hi)};
    entry["at_i"] = p.at_lo.at(e);
    entry["at_j"] = p.at_hi.at(e);
    list.push_back(std::move(entry));
  }
  return list;
}

ResourceSystem parse_resource_system(const Json& j) {
  check_format(j);
  auto processes = parse_id_array(require_field(j, "processes"), "processes");
  auto resources = parse_id_array(require_field(j, "resources"), "resources");
  const Json& needs = require_field(j, "needs");
  if (!needs.is_object()) throw InputError("needs must be an object");
  std::vector<std::vector<VertexId>> by_process(processes.size());
  for (std::size_t i = 0; i < processes.size(); ++i) {
    auto it = needs.find(processes[i]);
    if (it == needs.end())
      throw InputError("needs missing for process " + processes[i]);
    by_process[i] = parse_id_array(*it, "needs entry");
  }
  return ResourceSystem(std::move(processes), std::move(resources), std::move(by_process));
}

Json resource_system_to_json(const ResourceSystem& sys) {
  Json j;
  j["format"] = kFormatTag;
  j["processes"] = sys.processes();
  j["resources"] = sys.resources();
  Json needs = Json::object();
  for (int i = 0; i < static_cast<int>(sys.process_count()); ++i) {
    std::vector<VertexId> ids;
    for (int r : sys.needs(i)) ids.push_back(sys.resources()[r]);
    needs[sys.processes()[i]] = std::move(ids);
  }
  j["needs"] = std::move(needs);
  return j;
}

Coloring parse_coloring(const Json& j, const Graph& g) {
  const Json& map = require_field(j, "colors");
  if (!map.is_object()) throw InputError("colors must be an object");
  Coloring coloring;
  coloring.color.assign(g.vertex_count(), -1);
  for (const auto& [id, value] : map.items()) {
    int c = static_cast<int>(parse_int(value, "color"));
    coloring.color.at(g.index_of(id)) = c;
    coloring.num_colors = std::max(coloring.num_colors, c + 1);
  }
  validate_coloring(g, coloring);
  return coloring;
}

Json coloring_to_json(const Coloring& coloring, const Graph& g) {
  Json j;
  j["format"] = kFormatTag;
  Json map = Json::object();
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    map[g.id_of(static_cast<int>(v))] = coloring.color.at(v);
  j["colors"] = std::move(map);
  j["num_colors"] = coloring.num_colors;
  return j;
}

Scenario parse_scenario(const Json& j) {
  check_format(j);
  ResourceSystem system = parse_resource_system(require_field(j, "system"));
  Graph conflict = build_conflict_graph(system);

  const Json& policy_json = require_field(j, "policy");
  PolicySpec policy;
  std::string kind = require_field(policy_json, "kind").get<std::string>();
  if (kind == "naive") {
    policy.kind = PolicyKind::naive;
  } else if (kind == "edge_reversal") {
    policy.kind = PolicyKind::edge_reversal;
    if (policy_json.contains("orientation") && policy_json.at("orientation") != "auto")
      policy.process_priorities = parse_orientation_over(
          require_field(policy_json.at("orientation"), "directions"),
          std::make_shared<const Graph>(conflict));
    else
      policy.process_priorities = default_process_priorities(conflict);
  } else if (kind == "acquisition_order") {
    policy.kind = PolicyKind::acquisition_order;
    Graph resource_graph = build_resource_graph(system);
    if (policy_json.contains("orientation") && policy_json.at("orientation") != "auto")
      policy.resource_priorities = parse_orientation_over(
          require_field(policy_json.at("orientation"), "directions"),
          std::make_shared<const Graph>(resource_graph));
    else
      policy.resource_priorities = default_resource_priorities(resource_graph);
  } else {
    throw InputError("unknown policy kind \"" + kind + "\"");
  }

  Workload workload;
  workload.episodes.resize(system.process_count());
  const Json& scripts = require_field(j, "workload");
  if (!scripts.is_object()) throw InputError("workload must be an object");
  for (const auto& [process, episodes] : scripts.items()) {
    int p = system.process_index(process);
    if (!episodes.is_array()) throw InputError("workload entries must be arrays");
    for (const auto& episode : episodes) {
      std::vector<int> set;
      for (const auto& id : parse_id_array(episode, "episode"))
        set.push_back(system.resource_index(id));
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
      workload.episodes[p].push_back(std::move(set));
    }
  }
  if (j.contains("loop")) {
    if (!j.at("loop").is_boolean()) throw InputError("loop must be a boolean");
    workload.loop = j.at("loop").get<bool>();
  }

  Scenario scenario{std::move(system), std::move(policy), std::move(workload), 0, 0};
  scenario.seed = static_cast<std::uint64_t>(parse_int(require_field(j, "seed"), "seed"));
  scenario.max_events = parse_int(require_field(j, "max_events"), "max_events");
  if (scenario.max_events < 1) throw InputError("max_events must be positive");
  return scenario;
}

Json verdict_to_json(const Verdict& verdict, const Digraph& w, const std::string& model) {
  Json j;
  j["format"] = kFormatTag;
  j["model"] = model;
  j["deadlocked"] = verdict.deadlocked;
  j["deadlocked_set"] = ids_of(w, verdict.deadlocked_set);
  if (std::holds_alternative<CycleWitness>(verdict.witness)) {
    Json witness;
    witness["type"] = "cycle";
    witness["vertices"] = ids_of(w, std::get<CycleWitness>(verdict.witness).vertices);
    j["witness"] = std::move(witness);
  } else if (std::holds_alternative<KnotWitness>(verdict.witness)) {
    Json witness;
    witness["type"] = "knot";
    witness["vertices"] = ids_of(w, std::get<KnotWitness>(verdict.witness).vertices);
    j["witness"] = std::move(witness);
  } else if (std::holds_alternative<YxKnotWitness>(verdict.witness)) {
    Json witness;
    witness["type"] = "yx_knot";
    witness["vertices"] = ids_of(w, std::get<YxKnotWitness>(verdict.witness).vertices);
    j["witness"] = std::move(witness);
  } else if (std::holds_alternative<BKnotWitness>(verdict.witness)) {
    const auto& b = std::get<BKnotWitness>(verdict.witness);
    Json witness;
    witness["type"] = "b_knot";
    Json arcs = Json::array();
    for (auto [from, to] : b.b_subgraph_arcs)
      arcs.push_back({w.id_of(from), w.id_of(to)});
    witness["b_subgraph"] = std::move(arcs);
    witness["knot"] = ids_of(w, b.knot);
    j["witness"] = std::move(witness);
  } else if (std::holds_alternative<WitnessBudgetExceeded>(verdict.witness)) {
    Json witness;
    witness["type"] = "budget_exceeded";
    witness["examined"] = std::get<WitnessBudgetExceeded>(verdict.witness).budget;
    j["witness"] = std::move(witness);
  }
  return j;
}

Json placement_report_to_json(const PlacementReport& report, const Graph& g) {
  Json j;
  j["format"] = kFormatTag;
  j["valid"] = report.valid;
  Json cycles = Json::array();
  for (const auto& check : report.cycles) {
    Json entry;
    entry["cycle"] = ids_of(g, check.cycle.vertices);
    entry["sigma"] = check.sigma;
    entry["rho"] = check.rho;
    entry["ok"] = check.ok;
    cycles.push_back(std::move(entry));
  }
  j["cycles"] = std::move(cycles);
  return j;
}

Json ratio_report_to_json(const RatioReport& report, const Graph& g,
                          const RateVector& rates) {
  Json j;
  j["format"] = kFormatTag;
  j["all_compliant"] = report.all_compliant;
  Json edges = Json::array();
  for (const auto& ratio : report.edges) {
    auto [lo, hi] = g.edges().at(ratio.edge);
    Json entry;
    entry["edge"] = {g.id_of(lo), g.id_of(hi)};
    entry["operations"] = {ratio.lo_operations, ratio.hi_operations};
    if (ratio.hi_operations > 0)
      entry["ratio"] = to_fraction_string(Rational(ratio.lo_operations, ratio.hi_operations));
    entry["expected"] = to_fraction_string(Rational(rates.rates.at(hi), rates.rates.at(lo)));
    entry["compliant"] = ratio.compliant;
    edges.push_back(std::move(entry));
  }
  j["edges"] = std::move(edges);
  return j;
}

Json smer_trace_summary_to_json(const SmerTrace& trace, const Graph& g) {
  Json j;
  j["format"] = kFormatTag;
  j["steps"] = trace.placements.size();
  j["period_found"] = trace.period_found;
  if (trace.period_found) {
    j["tail_start"] = trace.tail_start;
    j["period"] = trace.period;
    Json operations = Json::object();
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
      operations[g.id_of(static_cast<int>(v))] = trace.operations_per_period.at(v);
    j["operations_per_period"] = std::move(operations);
  }
  j["first_cyclic_step"] = trace.first_cyclic_step;
  return j;
}

Json ser_trace_summary_to_json(const SerTrace& trace) {
  Json j;
  j["format"] = kFormatTag;
  j["p"] = trace.period;
  j["m"] = trace.sinks_per_period;
  j["conc"] = to_fraction_string(conc_simulated(trace));
  j["tail_start"] = trace.tail_start;
  return j;
}

Json interleaved_coloring_to_json(const InterleavedColoring& coloring, const Graph& g) {
  Json j;
  j["format"] = kFormatTag;
  j["total_colors"] = coloring.total_colors;
  j["per_vertex"] = coloring.per_vertex;
  Json map = Json::object();
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    map[g.id_of(static_cast<int>(v))] = coloring.colors.at(v);
  j["colors"] = std::move(map);
  return j;
}

Json sim_event_to_json(const SimEvent& event, const ResourceSystem& sys) {
  Json j;
  j["i"] = event.index;
  j["type"] = event.type;
  j["process"] = event.process >= 0 ? Json(sys.processes().at(event.process)) : Json();
  if (event.message) {
    const Message& msg = *event.message;
    Json m;
    switch (msg.kind) {
      case MessageKind::request: m["kind"] = "request"; break;
      case MessageKind::grant: m["kind"] = "grant"; break;
      case MessageKind::release: m["kind"] = "release"; break;
    }
    m["from"] = sys.processes().at(msg.sender);
    m["to"] = sys.processes().at(msg.receiver);
    m["resource"] = sys.resources().at(msg.resource);
    m["sent_at"] = msg.send_index;
    j["message"] = std::move(m);
  }
  if (event.episode >= 0) j["episode"] = event.episode;
  if (event.chain >= 0) j["chain"] = event.chain;
  return j;
}

Json sim_trace_summary_to_json(const SimTrace& trace, const ResourceSystem& sys) {
  Json j;
  j["format"] = kFormatTag;
  j["outcome"] = trace.outcome;
  j["events"] = trace.event_count;
  Json episodes = Json::object();
  for (std::size_t p = 0; p < sys.process_count(); ++p)
    episodes[sys.processes().at(p)] = trace.episodes_completed.at(p);
  j["episodes_completed"] = std::move(episodes);
  WaitStats stats = measure_waits(trace);
  j["max_chain"] = stats.max_chain;
  if (trace.final_wfg) {
    Json wfg = wait_for_graph_to_json(*trace.final_wfg);
    wfg.erase("format");
    j["final_wfg"] = std::move(wfg);
  }
  return j;
}

}  // namespace knotworks
