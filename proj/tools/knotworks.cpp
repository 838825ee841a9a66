// Command-line front end: deadlock detection on wait-for graphs, synchronous
// edge/bead reversal analyses, resource-system derivations, and the seeded
// event simulator. stdout carries a single JSON document exactly when the
// exit code is 0 or 1; human-readable summaries go to stderr.
//
// Exit codes: 0 ok, 1 deadlock found / placement invalid, 2 input error,
// 3 budget exceeded (all caps are configurable switches).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "knotworks/json_io.hpp"

namespace kw = knotworks;

namespace {

constexpr int kOk = 0;
constexpr int kDomainVerdict = 1;
constexpr int kInputError = 2;
constexpr int kBudgetExceeded = 3;
constexpr int kInternalError = 70;

void emit(const kw::Json& payload) { std::cout << payload.dump(2) << std::endl; }

int run_detect(const std::string& model, const std::string& input, bool want_witness,
               std::int64_t budget) {
  kw::WaitForGraph w = kw::parse_wait_for_graph(kw::load_json_file(input));
  kw::Verdict verdict;
  if (model == "and") {
    verdict = kw::detect_and(w);
  } else if (model == "or") {
    verdict = kw::detect_or(w);
  } else if (model == "xy") {
    verdict = kw::detect_xy(w);
  } else if (model == "andor") {
    verdict = kw::detect_andor(w, {budget, want_witness});
  } else if (model == "dxy") {
    verdict = kw::detect_dxy(w, {budget, want_witness});
  } else {
    throw kw::InputError("unknown model \"" + model + "\"");
  }
  if (want_witness && std::holds_alternative<kw::WitnessBudgetExceeded>(verdict.witness))
    throw kw::BudgetExceeded("b-knot witness search exceeded the budget of " +
                             std::to_string(budget) + " b-subgraphs");
  emit(kw::verdict_to_json(verdict, w.digraph(), model));
  std::cerr << (verdict.deadlocked ? "deadlock found" : "no deadlock") << " ("
            << verdict.deadlocked_set.size() << " of " << w.digraph().vertex_count()
            << " processes stuck)\n";
  return verdict.deadlocked ? kDomainVerdict : kOk;
}

kw::AcyclicOrientation load_orientation(const std::string& graph_path,
                                        const std::string& orientation_path) {
  auto graph = std::make_shared<const kw::Graph>(
      kw::parse_graph(kw::load_json_file(graph_path)));
  kw::Json j = kw::load_json_file(orientation_path);
  if (j.contains("graph")) {
    kw::AcyclicOrientation orientation = kw::parse_orientation(j);
    if (!(orientation.graph() == *graph))
      throw kw::InputError("orientation file is over a different graph");
    return orientation;
  }
  if (!j.contains("directions"))
    throw kw::InputError("orientation file needs a \"directions\" array");
  return kw::parse_orientation_over(j.at("directions"), graph);
}

void write_ser_trace(const kw::SerTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw kw::InputError("cannot write " + path);
  for (std::size_t s = 0; s < trace.states.size(); ++s) {
    kw::Json line;
    line["step"] = s;
    kw::Json orientation = kw::orientation_to_json(trace.orientation_at(static_cast<int>(s)));
    line["directions"] = orientation.at("directions");
    out << line.dump() << "\n";
  }
}

int run_ser(const std::string& sub, const std::string& graph_path,
            const std::string& orientation_path, bool exact, bool has_seed,
            std::uint64_t seed, const std::string& trace_path) {
  if (sub == "simulate" || sub == "coloring") {
    kw::AcyclicOrientation w0 = load_orientation(graph_path, orientation_path);
    kw::SerTrace trace = kw::run_until_period(w0);
    if (!trace_path.empty()) write_ser_trace(trace, trace_path);
    if (sub == "simulate") {
      emit(kw::ser_trace_summary_to_json(trace));
      std::cerr << "p=" << trace.period << " m=" << trace.sinks_per_period
                << " conc=" << kw::to_fraction_string(kw::conc_simulated(trace)) << "\n";
    } else {
      auto coloring = kw::extract_interleaved_coloring(trace);
      emit(kw::interleaved_coloring_to_json(coloring, w0.graph()));
      std::cerr << coloring.per_vertex << "-tuple coloring with "
                << coloring.total_colors << " colors\n";
    }
    return kOk;
  }
  if (sub == "concurrency") {
    kw::AcyclicOrientation w0 = load_orientation(graph_path, orientation_path);
    kw::Rational conc = kw::conc_structural(w0);
    kw::Json j;
    j["format"] = kw::kFormatTag;
    j["conc"] = kw::to_fraction_string(conc);
    j["method"] = "structural";
    emit(j);
    std::cerr << "conc=" << kw::to_fraction_string(conc) << "\n";
    return kOk;
  }
  if (sub == "optimize") {
    kw::Graph g = kw::parse_graph(kw::load_json_file(graph_path));
    kw::OptimalResult result = [&] {
      if (exact) return kw::optimal_orientation_exact(g);
      if (!has_seed)
        throw kw::InputError("heuristic optimize needs an explicit --seed");
      kw::HeuristicOptions options;
      options.seed = seed;
      return kw::optimal_orientation_heuristic(g, options);
    }();
    kw::Json j;
    j["format"] = kw::kFormatTag;
    j["mode"] = exact ? "exact" : "heuristic";
    j["conc"] = kw::to_fraction_string(result.conc);
    j["chi_bar"] = kw::to_fraction_string(
        kw::Rational(result.conc.denominator(), result.conc.numerator()));
    kw::Json orientation = kw::orientation_to_json(result.orientation);
    orientation.erase("format");
    j["orientation"] = std::move(orientation);
    emit(j);
    std::cerr << "best conc=" << kw::to_fraction_string(result.conc) << "\n";
    return kOk;
  }
  throw kw::InputError("unknown ser subcommand \"" + sub + "\"");
}

int run_smer(const std::string& sub, const std::string& graph_path,
             const std::string& rates_path, const std::string& beads_path,
             std::size_t horizon) {
  kw::Graph g = kw::parse_graph(kw::load_json_file(graph_path));
  kw::RateVector rates = kw::parse_rates(kw::load_json_file(rates_path), g);

  if (sub == "validate") {
    kw::BeadPlacement p = kw::parse_beads(kw::load_json_file(beads_path), g);
    kw::PlacementReport report = kw::validate_placement(g, rates, p);
    emit(kw::placement_report_to_json(report, g));
    std::cerr << (report.valid ? "placement valid" : "placement invalid") << " ("
              << report.cycles.size() << " simple cycles checked)\n";
    return report.valid ? kOk : kDomainVerdict;
  }
  if (sub == "simulate" || sub == "ratios") {
    kw::BeadPlacement p = kw::parse_beads(kw::load_json_file(beads_path), g);
    kw::SmerTrace trace = kw::run_smer(g, rates, p, horizon);
    if (sub == "simulate") {
      emit(kw::smer_trace_summary_to_json(trace, g));
      std::cerr << (trace.period_found
                        ? "period " + std::to_string(trace.period)
                        : "no period within the horizon")
                << "\n";
      return kOk;
    }
    if (!trace.period_found)
      throw kw::BudgetExceeded("no period within a horizon of " +
                               std::to_string(horizon) + " steps");
    kw::RatioReport report = kw::ratio_compliance(g, rates, trace);
    emit(kw::ratio_report_to_json(report, g, rates));
    std::cerr << (report.all_compliant ? "all edges ratio-compliant"
                                       : "ratio violation present")
              << "\n";
    return kOk;
  }
  throw kw::InputError("unknown smer subcommand \"" + sub + "\"");
}

int run_resources(const std::string& sub, const std::string& system_path, bool exact,
                  const std::string& coloring_path) {
  kw::ResourceSystem sys = kw::parse_resource_system(kw::load_json_file(system_path));
  kw::Graph g = kw::build_conflict_graph(sys);
  if (!g.is_connected())
    throw kw::InputError("the conflict graph is not connected; split the system");

  if (sub == "build-g") {
    emit(kw::graph_to_json(g));
    std::cerr << g.vertex_count() << " processes, " << g.edge_count() << " edges\n";
    return kOk;
  }
  kw::Graph h = kw::build_resource_graph(sys);
  if (sub == "build-h") {
    emit(kw::graph_to_json(h));
    std::cerr << h.vertex_count() << " resources, " << h.edge_count() << " edges\n";
    return kOk;
  }
  if (sub == "color") {
    kw::Coloring coloring = exact ? kw::color_graph_exact(h) : kw::color_graph_greedy(h);
    emit(kw::coloring_to_json(coloring, h));
    std::cerr << coloring.num_colors << " colors on the resource graph\n";
    return kOk;
  }
  if (sub == "orient") {
    kw::Coloring coloring =
        !coloring_path.empty()
            ? kw::parse_coloring(kw::load_json_file(coloring_path), h)
            : (exact ? kw::color_graph_exact(h) : kw::color_graph_greedy(h));
    kw::AcyclicOrientation orientation = kw::orient_by_coloring(h, coloring);
    int longest = kw::longest_directed_path_edges(orientation);
    kw::Json j = kw::orientation_to_json(orientation);
    j["num_colors"] = coloring.num_colors;
    j["longest_path_edges"] = longest;
    emit(j);
    std::cerr << "longest directed path: " << longest << " edges (colors: "
              << coloring.num_colors << ")\n";
    return kOk;
  }
  throw kw::InputError("unknown resources subcommand \"" + sub + "\"");
}

int run_asim(const std::string& scenario_path, const std::string& trace_path) {
  kw::Scenario scenario = kw::parse_scenario(kw::load_json_file(scenario_path));

  std::ofstream trace_out;
  kw::SimObserver observer;
  if (!trace_path.empty()) {
    trace_out.open(trace_path);
    if (!trace_out) throw kw::InputError("cannot write " + trace_path);
  }

  kw::SimTrace trace =
      kw::run_simulation(scenario.system, scenario.policy, scenario.workload,
                         scenario.seed, scenario.max_events, observer);
  if (trace_out.is_open())
    for (const auto& event : trace.events)
      trace_out << kw::sim_event_to_json(event, scenario.system).dump() << "\n";

  kw::Json j = kw::sim_trace_summary_to_json(trace, scenario.system);
  if (!trace_path.empty()) j["trace_path"] = trace_path;
  if (trace.outcome == "deadlock" && trace.final_wfg) {
    kw::Verdict verdict = kw::detect_and(*trace.final_wfg);
    kw::Json detection = kw::verdict_to_json(verdict, trace.final_wfg->digraph(), "and");
    detection.erase("format");
    j["detection"] = std::move(detection);
  }
  emit(j);
  std::cerr << "outcome: " << trace.outcome << " after " << trace.event_count
            << " events\n";
  return trace.outcome == "deadlock" ? kDomainVerdict : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deadlock models, detection, and prevention on shared-resource graphs"};
  app.require_subcommand(1);

  // detect
  auto* detect = app.add_subcommand("detect", "Detect deadlock in a wait-for graph");
  std::string detect_model, detect_input;
  bool detect_witness = false;
  std::int64_t detect_budget = 1'000'000;
  detect->add_option("--model", detect_model, "and|or|xy|andor|dxy")->required();
  detect->add_option("--input", detect_input, "wait-for graph JSON file")->required();
  detect->add_flag("--witness", detect_witness,
                   "search for a b-knot witness (andor/dxy; others always carry one)");
  detect->add_option("--budget", detect_budget, "b-subgraph search budget");

  // ser
  auto* ser = app.add_subcommand("ser", "Synchronous edge-reversal analyses");
  ser->require_subcommand(1);
  std::string ser_graph, ser_orientation, ser_trace;
  bool ser_exact = false;
  std::uint64_t ser_seed = 0;
  bool ser_has_seed = false;
  std::vector<CLI::App*> ser_subs = {
      ser->add_subcommand("simulate", "run to the first repeated orientation"),
      ser->add_subcommand("concurrency", "structural concurrency of an orientation"),
      ser->add_subcommand("optimize", "search for the best initial orientation"),
      ser->add_subcommand("coloring", "interleaved multicoloring from one period"),
  };
  for (auto* sub : ser_subs) {
    sub->add_option("--graph", ser_graph, "graph JSON file")->required();
    sub->add_option("--orientation", ser_orientation, "orientation JSON file");
    sub->add_flag("--exact", ser_exact, "exhaustive search (optimize)");
    sub->add_option("--seed", ser_seed, "heuristic search seed (optimize)")
        ->each([&](const std::string&) { ser_has_seed = true; });
    sub->add_option("--trace", ser_trace, "write one orientation per step (JSON lines)");
  }

  // smer
  auto* smer = app.add_subcommand("smer", "Bead-reversal (graph abacus) analyses");
  smer->require_subcommand(1);
  std::string smer_graph, smer_rates, smer_beads;
  std::size_t smer_horizon = 10'000;
  std::vector<CLI::App*> smer_subs = {
      smer->add_subcommand("validate", "check the sigma < rho criterion per cycle"),
      smer->add_subcommand("simulate", "run the heavy-load dynamics to a repeat"),
      smer->add_subcommand("ratios", "per-edge operation ratios over one period"),
  };
  for (auto* sub : smer_subs) {
    sub->add_option("--graph", smer_graph, "graph JSON file")->required();
    sub->add_option("--rates", smer_rates, "rates JSON file")->required();
    sub->add_option("--beads", smer_beads, "bead placement JSON file")->required();
    sub->add_option("--horizon", smer_horizon, "simulation horizon in steps");
  }

  // resources
  auto* resources = app.add_subcommand("resources", "Resource-system derivations");
  resources->require_subcommand(1);
  std::string res_system, res_coloring;
  bool res_exact = false;
  std::vector<CLI::App*> res_subs = {
      resources->add_subcommand("build-g", "conflict graph on the processes"),
      resources->add_subcommand("build-h", "resource graph on the resources"),
      resources->add_subcommand("color", "color the resource graph"),
      resources->add_subcommand("orient", "acyclic orientation with bounded paths"),
  };
  for (auto* sub : res_subs) {
    sub->add_option("--system", res_system, "resource system JSON file")->required();
    sub->add_flag("--exact", res_exact, "exact chromatic coloring");
    sub->add_option("--coloring", res_coloring, "use this coloring file (orient)");
  }

  // asim
  auto* asim = app.add_subcommand("asim", "Asynchronous event simulation");
  asim->require_subcommand(1);
  auto* asim_run = asim->add_subcommand("run", "run a scenario file");
  std::string asim_scenario, asim_trace;
  asim_run->add_option("--scenario", asim_scenario, "scenario JSON file")->required();
  asim_run->add_option("--trace", asim_trace, "write the event trace (JSON lines)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (detect->parsed())
      return run_detect(detect_model, detect_input, detect_witness, detect_budget);
    if (ser->parsed()) {
      for (auto* sub : ser_subs)
        if (sub->parsed())
          return run_ser(sub->get_name(), ser_graph, ser_orientation, ser_exact,
                         ser_has_seed, ser_seed, ser_trace);
    }
    if (smer->parsed()) {
      for (auto* sub : smer_subs)
        if (sub->parsed())
          return run_smer(sub->get_name(), smer_graph, smer_rates, smer_beads,
                          smer_horizon);
    }
    if (resources->parsed()) {
      for (auto* sub : res_subs)
        if (sub->parsed())
          return run_resources(sub->get_name(), res_system, res_exact, res_coloring);
    }
    if (asim->parsed() && asim_run->parsed()) return run_asim(asim_scenario, asim_trace);
    throw kw::InputError("no subcommand selected");
  } catch (const kw::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const kw::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}
