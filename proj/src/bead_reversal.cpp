#include "knotworks/bead_reversal.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace knotworks {

namespace {

// Map-free Kahn check for the simulation loop; orientation_from_beads stays
// the validated public route.
bool beads_orient_acyclically(const Graph& g, const RateVector& rates,
                              const BeadPlacement& p) {
  const int n = static_cast<int>(g.vertex_count());
  std::vector<int> out_degree(n, 0);
  std::vector<std::vector<int>> tails_of(n);  // head -> tails
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto [lo, hi] = g.edges()[e];
    int head = p.at_lo[e] >= rates.rates[lo] ? lo : hi;
    int tail = head == lo ? hi : lo;
    ++out_degree[tail];
    tails_of[head].push_back(tail);
  }
  std::vector<int> ready;
  for (int v = 0; v < n; ++v)
    if (out_degree[v] == 0) ready.push_back(v);
  int removed = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++removed;
    for (int tail : tails_of[v])
      if (--out_degree[tail] == 0) ready.push_back(tail);
  }
  return removed == n;
}

std::vector<int> sink_processes(const Graph& g, const RateVector& rates,
                                const BeadPlacement& p) {
  // A sink holds at least its rate on every adjacent edge.
  std::vector<char> blocked(g.vertex_count(), 0);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto [lo, hi] = g.edges()[e];
    if (p.at_lo[e] < rates.rates[lo]) blocked[lo] = 1;
    if (p.at_hi[e] < rates.rates[hi]) blocked[hi] = 1;
  }
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(g.vertex_count()); ++v)
    if (!blocked[v] && !g.neighbors(v).empty()) out.push_back(v);
  return out;
}

}  // namespace

RateVector RateVector::uniform(const Graph& g, std::int64_t rate) {
  return {std::vector<std::int64_t>(g.vertex_count(), rate)};
}

void validate_rates(const Graph& g, const RateVector& rates) {
  if (rates.rates.size() != g.vertex_count())
    throw InputError("rate count does not match vertex count");
  for (std::size_t v = 0; v < rates.rates.size(); ++v)
    if (rates.rates[v] < 1)
      throw InputError("rate of " + g.id_of(static_cast<int>(v)) + " must be positive");
}

std::int64_t edge_capacity(std::int64_t ri, std::int64_t rj) {
  if (ri < 1 || rj < 1) throw InputError("rates must be positive");
  return ri + rj - std::gcd(ri, rj);
}

void validate_edges(const Graph& g, const RateVector& rates, const BeadPlacement& p) {
  validate_rates(g, rates);
  if (p.at_lo.size() != g.edge_count() || p.at_hi.size() != g.edge_count())
    throw InputError("bead counts do not match edge count");
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto [lo, hi] = g.edges()[e];
    const std::string name = g.id_of(lo) + "-" + g.id_of(hi);
    if (p.at_lo[e] < 0 || p.at_hi[e] < 0)
      throw InputError("negative bead count on edge " + name);
    std::int64_t capacity = edge_capacity(rates.rates[lo], rates.rates[hi]);
    if (p.at_lo[e] + p.at_hi[e] != capacity)
      throw InputError("edge " + name + " carries " +
                       std::to_string(p.at_lo[e] + p.at_hi[e]) + " beads, expected " +
                       std::to_string(capacity));
    std::int64_t g_ij = std::gcd(rates.rates[lo], rates.rates[hi]);
    if (p.at_lo[e] % g_ij != 0)
      throw InputError("edge " + name + ": bead counts must be multiples of " +
                       std::to_string(g_ij));
    // Capacity and the residue rule already force exactly one end to reach
    // its rate; check anyway so corrupted states fail loudly.
    bool lo_holds = p.at_lo[e] >= rates.rates[lo];
    bool hi_holds = p.at_hi[e] >= rates.rates[hi];
    if (lo_holds == hi_holds)
      throw InputError("edge " + name + " is not oriented in exactly one direction");
  }
}

Digraph orientation_from_beads(const Graph& g, const RateVector& rates,
                               const BeadPlacement& p) {
  validate_edges(g, rates, p);
  Digraph d(g.vertices());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto [lo, hi] = g.edges()[e];
    if (p.at_lo[e] >= rates.rates[lo])
      d.add_arc_by_index(hi, lo);
    else
      d.add_arc_by_index(lo, hi);
  }
  return d;
}

std::int64_t sigma_forward(const Graph& g, const BeadPlacement& p, const SimpleCycle& cycle) {
  std::int64_t total = 0;
  const auto& vs = cycle.vertices;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    int from = vs[i], to = vs[(i + 1) % vs.size()];
    int e = g.edge_index(from, to);
    total += g.edges()[e].second == to ? p.at_hi[e] : p.at_lo[e];
  }
  return total;
}

PlacementReport validate_placement(const Graph& g, const RateVector& rates,
                                   const BeadPlacement& p,
                                   const CycleEnumLimits& cycle_limits) {
  validate_edges(g, rates, p);
  PlacementReport report;
  report.valid = true;
  for (auto& cycle : enumerate_simple_cycles(g, cycle_limits)) {
    CycleCheck check;
    check.rho = 0;
    for (int v : cycle.vertices) check.rho += rates.rates[v];
    std::int64_t forward = sigma_forward(g, p, cycle);
    std::int64_t capacity_total = 0;
    for (std::size_t i = 0; i < cycle.vertices.size(); ++i) {
      int a = cycle.vertices[i], b = cycle.vertices[(i + 1) % cycle.vertices.size()];
      int e = g.edge_index(a, b);
      capacity_total += p.at_lo[e] + p.at_hi[e];
    }
    check.sigma = std::max(forward, capacity_total - forward);
    check.ok = check.sigma < check.rho;
    report.valid = report.valid && check.ok;
    check.cycle = std::move(cycle);
    report.cycles.push_back(std::move(check));
  }
  return report;
}

BeadPlacement smer_step(const Graph& g, const RateVector& rates, const BeadPlacement& p) {
  validate_edges(g, rates, p);
  auto sinks = sink_processes(g, rates, p);
  std::vector<char> firing(g.vertex_count(), 0);
  for (int v : sinks) firing[v] = 1;
  BeadPlacement next = p;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto [lo, hi] = g.edges()[e];
    if (firing[lo]) {
      next.at_lo[e] -= rates.rates[lo];
      next.at_hi[e] += rates.rates[lo];
    }
    if (firing[hi]) {
      next.at_hi[e] -= rates.rates[hi];
      next.at_lo[e] += rates.rates[hi];
    }
    if (next.at_lo[e] < 0 || next.at_hi[e] < 0)
      throw std::logic_error("a firing process lacked beads on an edge");
  }
  return next;
}

SmerTrace run_smer(const Graph& g, const RateVector& rates, const BeadPlacement& start,
                   std::size_t horizon) {
  validate_edges(g, rates, start);
  SmerTrace trace;
  std::map<BeadPlacement, int> first_seen;
  std::vector<std::vector<int>> fired_at;  // sinks per step

  BeadPlacement current = start;
  while (trace.placements.size() <= horizon) {
    auto [it, inserted] =
        first_seen.emplace(current, static_cast<int>(trace.placements.size()));
    if (!inserted) {
      trace.period_found = true;
      trace.tail_start = it->second;
      trace.period = static_cast<int>(trace.placements.size()) - it->second;
      break;
    }
    if (trace.first_cyclic_step < 0 && !beads_orient_acyclically(g, rates, current))
      trace.first_cyclic_step = static_cast<int>(trace.placements.size());
    trace.placements.push_back(current);
    fired_at.push_back(sink_processes(g, rates, current));
    current = smer_step(g, rates, current);
  }

  trace.operations_per_period.assign(g.vertex_count(), 0);
  if (trace.period_found) {
    for (int s = trace.tail_start; s < trace.tail_start + trace.period; ++s)
      for (int v : fired_at[s]) ++trace.operations_per_period[v];
  }
  return trace;
}

RatioReport ratio_compliance(const Graph& g, const RateVector& rates,
                             const SmerTrace& trace) {
  if (!trace.period_found) throw InputError("trace has no period");
  RatioReport report;
  report.all_compliant = true;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto [lo, hi] = g.edges()[e];
    EdgeRatio ratio;
    ratio.edge = static_cast<int>(e);
    ratio.lo_operations = trace.operations_per_period[lo];
    ratio.hi_operations = trace.operations_per_period[hi];
    // lo : hi operation counts must equal r_hi : r_lo.
    ratio.compliant = ratio.lo_operations * rates.rates[lo] ==
                          ratio.hi_operations * rates.rates[hi] &&
                      ratio.lo_operations > 0;
    report.all_compliant = report.all_compliant && ratio.compliant;
    report.edges.push_back(ratio);
  }
  return report;
}

}  // namespace knotworks
