#include "knotworks/edge_reversal.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace knotworks {

namespace {

std::vector<int> sinks_of_bits(const Graph& g, const std::vector<bool>& toward_hi) {
  std::vector<char> has_out(g.vertex_count(), 0);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto [lo, hi] = g.edges()[e];
    has_out[toward_hi[e] ? lo : hi] = 1;
  }
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(g.vertex_count()); ++v)
    if (!has_out[v]) out.push_back(v);
  return out;
}

std::vector<bool> step_bits(const Graph& g, const std::vector<bool>& toward_hi,
                            const std::vector<int>& sinks) {
  std::vector<char> is_sink(g.vertex_count(), 0);
  for (int v : sinks) is_sink[v] = 1;
  std::vector<bool> next = toward_hi;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto [lo, hi] = g.edges()[e];
    int head = toward_hi[e] ? hi : lo;
    if (is_sink[head]) next[e] = !next[e];
  }
  return next;
}

Rational conc_structural_bits(const Graph& g, const std::vector<bool>& toward_hi,
                              const std::vector<SimpleCycle>& cycles) {
  if (cycles.empty()) return Rational(1, 2);
  Rational best(1, 1);
  bool first = true;
  for (const auto& cycle : cycles) {
    const auto& vs = cycle.vertices;
    int forward = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      int a = vs[i], b = vs[(i + 1) % vs.size()];
      int e = g.edge_index(a, b);
      int head = toward_hi[e] ? g.edges()[e].second : g.edges()[e].first;
      if (head == b) ++forward;
    }
    int backward = static_cast<int>(vs.size()) - forward;
    Rational value(std::min(forward, backward), static_cast<int>(vs.size()));
    if (first || value < best) {
      best = value;
      first = false;
    }
  }
  return best;
}

void require_connected_with_edge(const Graph& g, const char* op) {
  if (g.edge_count() == 0)
    throw InputError(std::string(op) + ": graph has no edges");
  if (!g.is_connected())
    throw InputError(std::string(op) + ": graph is not connected");
}

// Deterministic bounded uniform draw; avoids std::uniform_int_distribution,
// whose output differs across standard libraries.
std::size_t bounded(std::mt19937_64& rng, std::size_t n) { return rng() % n; }

}  // namespace

AcyclicOrientation ser_step(const AcyclicOrientation& orientation) {
  const Graph& g = orientation.graph();
  auto sinks = sinks_of_bits(g, orientation.toward_hi());
  return AcyclicOrientation(orientation.graph_ptr(),
                            step_bits(g, orientation.toward_hi(), sinks));
}

int SerTrace::sink_count_prefix(int v, int s) const {
  int count = 0;
  for (int step = 0; step < s; ++step) {
    int offset = step < static_cast<int>(states.size())
                     ? step
                     : tail_start + (step - tail_start) % period;
    const auto& set = sink_sets.at(offset);
    count += std::binary_search(set.begin(), set.end(), v);
  }
  return count;
}

SerTrace run_until_period(const AcyclicOrientation& initial, const SerLimits& limits) {
  SerTrace trace;
  trace.graph = initial.graph_ptr();
  const Graph& g = *trace.graph;

  std::map<std::vector<bool>, int> first_seen;
  std::vector<bool> current = initial.toward_hi();
  while (true) {
    auto [it, inserted] = first_seen.emplace(current, static_cast<int>(trace.states.size()));
    if (!inserted) {
      trace.tail_start = it->second;
      trace.period = static_cast<int>(trace.states.size()) - it->second;
      break;
    }
    if (trace.states.size() >= limits.max_states)
      throw BudgetExceeded("no period within " + std::to_string(limits.max_states) +
                           " orientation states");
    auto sinks = sinks_of_bits(g, current);
    trace.states.push_back(current);
    trace.sink_sets.push_back(sinks);
    current = step_bits(g, current, sinks);
  }

  std::vector<int> counts(g.vertex_count(), 0);
  for (int s = trace.tail_start; s < trace.tail_start + trace.period; ++s)
    for (int v : trace.sink_sets[s]) ++counts[v];
  for (int v = 1; v < static_cast<int>(g.vertex_count()); ++v)
    if (counts[v] != counts[0])
      throw std::logic_error("unequal per-vertex sink counts within a period");
  trace.sinks_per_period = g.vertex_count() ? counts[0] : 0;
  return trace;
}

Rational conc_simulated(const SerTrace& trace) {
  if (trace.period <= 0) throw InputError("trace has no period");
  return Rational(trace.sinks_per_period, trace.period);
}

Rational conc_structural(const AcyclicOrientation& initial,
                         const CycleEnumLimits& cycle_limits) {
  const Graph& g = initial.graph();
  require_connected_with_edge(g, "conc_structural");
  auto cycles = enumerate_simple_cycles(g, cycle_limits);
  return conc_structural_bits(g, initial.toward_hi(), cycles);
}

std::vector<std::vector<bool>> all_acyclic_orientation_bits(const Graph& g,
                                                            std::size_t max_edges) {
  if (g.edge_count() > max_edges)
    throw BudgetExceeded("exact orientation enumeration capped at " +
                         std::to_string(max_edges) + " edges, got " +
                         std::to_string(g.edge_count()));
  const std::size_t m = g.edge_count();
  std::vector<std::vector<bool>> result;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<bool> bits(m);
    for (std::size_t e = 0; e < m; ++e) bits[e] = (mask >> e) & 1;
    if (is_acyclic(oriented_digraph(g, bits))) result.push_back(std::move(bits));
  }
  return result;
}

OptimalResult optimal_orientation_exact(const Graph& g, const ExactSearchLimits& limits) {
  require_connected_with_edge(g, "optimal_orientation");
  auto cycles = enumerate_simple_cycles(g, limits.cycle_limits);
  auto graph = std::make_shared<const Graph>(g);

  std::vector<bool> best_bits;
  Rational best(0, 1);
  for (auto& bits : all_acyclic_orientation_bits(g, limits.max_edges)) {
    Rational value = conc_structural_bits(g, bits, cycles);
    if (best_bits.empty() || value > best) {
      best = value;
      best_bits = bits;
    }
  }
  return {AcyclicOrientation(graph, best_bits), best};
}

OptimalResult optimal_orientation_heuristic(const Graph& g, const HeuristicOptions& options,
                                            const CycleEnumLimits& cycle_limits) {
  require_connected_with_edge(g, "optimal_orientation");
  auto cycles = enumerate_simple_cycles(g, cycle_limits);
  auto graph = std::make_shared<const Graph>(g);
  const std::size_t n = g.vertex_count(), m = g.edge_count();

  std::mt19937_64 rng(options.seed);
  std::vector<bool> best_bits;
  Rational best(0, 1);

  for (int restart = 0; restart < options.restarts; ++restart) {
    // Random acyclic start: orient every edge along a random vertex order.
    std::vector<int> rank(n);
    for (std::size_t v = 0; v < n; ++v) rank[v] = static_cast<int>(v);
    for (std::size_t v = n; v > 1; --v)
      std::swap(rank[v - 1], rank[bounded(rng, v)]);
    std::vector<bool> bits(m);
    for (std::size_t e = 0; e < m; ++e) {
      auto [lo, hi] = g.edges()[e];
      bits[e] = rank[lo] < rank[hi];
    }
    Rational current = conc_structural_bits(g, bits, cycles);

    for (int step = 0; step < options.steps_per_restart; ++step) {
      std::size_t e = bounded(rng, m);
      bits[e] = !bits[e];
      if (!is_acyclic(oriented_digraph(g, bits))) {
        bits[e] = !bits[e];
        continue;
      }
      Rational value = conc_structural_bits(g, bits, cycles);
      if (value >= current)
        current = value;
      else
        bits[e] = !bits[e];
    }
    if (best_bits.empty() || current > best) {
      best = current;
      best_bits = bits;
    }
  }
  return {AcyclicOrientation(graph, best_bits), best};
}

InterleavedColoring extract_interleaved_coloring(const SerTrace& trace) {
  if (trace.period <= 0) throw InputError("trace has no period");
  const Graph& g = *trace.graph;
  InterleavedColoring coloring;
  coloring.total_colors = trace.period;
  coloring.per_vertex = trace.sinks_per_period;
  coloring.colors.resize(g.vertex_count());
  for (int s = trace.tail_start; s < trace.tail_start + trace.period; ++s)
    for (int v : trace.sink_sets[s]) coloring.colors[v].push_back(s - trace.tail_start);
  if (!coloring_is_proper(g, coloring.colors) ||
      !coloring_is_interleaved(g, coloring.colors))
    throw std::logic_error("periodic sink times failed to interleave");
  return coloring;
}

bool coloring_is_proper(const Graph& g, const std::vector<std::vector<int>>& colors) {
  for (auto [lo, hi] : g.edges()) {
    for (int c : colors.at(lo))
      if (std::binary_search(colors.at(hi).begin(), colors.at(hi).end(), c))
        return false;
  }
  return true;
}

bool coloring_is_interleaved(const Graph& g, const std::vector<std::vector<int>>& colors) {
  for (auto [lo, hi] : g.edges()) {
    const auto& a = colors.at(lo);
    const auto& b = colors.at(hi);
    if (a.size() != b.size()) return false;
    if (a.empty()) continue;
    // Either a1 < b1 < a2 < b2 < ... or the same with roles swapped.
    const auto& first = a.front() < b.front() ? a : b;
    const auto& second = a.front() < b.front() ? b : a;
    for (std::size_t k = 0; k < first.size(); ++k) {
      if (!(first[k] < second[k])) return false;
      if (k + 1 < first.size() && !(second[k] < first[k + 1])) return false;
    }
  }
  return true;
}

Rational chi_bar_exact(const Graph& g, const ExactSearchLimits& limits) {
  Rational best = optimal_orientation_exact(g, limits).conc;
  return Rational(best.denominator(), best.numerator());
}

Rational chi_bar_heuristic(const Graph& g, const HeuristicOptions& options,
                           const CycleEnumLimits& cycle_limits) {
  Rational best = optimal_orientation_heuristic(g, options, cycle_limits).conc;
  return Rational(best.denominator(), best.numerator());
}

}  // namespace knotworks
