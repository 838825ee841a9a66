#pragma once

#include <cstdint>
#include <vector>

#include "knotworks/orientation.hpp"
#include "knotworks/rational.hpp"

namespace knotworks {

// One synchronous edge-reversal step: every sink of the orientation becomes a
// source. Sinks are pairwise nonadjacent, so the batch reversal is well
// defined, and the result is again acyclic.
AcyclicOrientation ser_step(const AcyclicOrientation& orientation);

struct SerLimits {
  std::size_t max_states = 1'000'000;  // distinct orientations tracked
};

// The orientation sequence from an initial acyclic orientation up to its
// first repeat. states[tail_start] is the state the sequence returns to;
// within one period every vertex is a sink exactly sinks_per_period times.
struct SerTrace {
  std::shared_ptr<const Graph> graph;
  std::vector<std::vector<bool>> states;    // states[0] = initial, all distinct
  std::vector<std::vector<int>> sink_sets;  // sinks of states[s]
  int tail_start = 0;
  int period = 0;            // p
  int sinks_per_period = 0;  // m

  AcyclicOrientation orientation_at(int step) const {
    return AcyclicOrientation(graph, states.at(step));
  }
  // Number of times vertex v is a sink among steps 0..s-1 (m_i(s)).
  int sink_count_prefix(int v, int s) const;
};

SerTrace run_until_period(const AcyclicOrientation& initial, const SerLimits& limits = {});

// Concurrency from the simulated period: m/p in lowest terms.
Rational conc_simulated(const SerTrace& trace);

// Concurrency from the structure of the initial orientation: 1/2 on trees,
// otherwise the minimum over all simple cycles of min(c+, c-)/|cycle|, where
// c+/c- count the cycle's edges oriented along either traversal direction.
// Requires a connected graph with at least one edge.
Rational conc_structural(const AcyclicOrientation& initial,
                         const CycleEnumLimits& cycle_limits = {});

struct ExactSearchLimits {
  std::size_t max_edges = 15;
  CycleEnumLimits cycle_limits;
};

// All acyclic orientations of g as direction bit vectors, in ascending
// bit-pattern order. Throws BudgetExceeded past the edge cap.
std::vector<std::vector<bool>> all_acyclic_orientation_bits(
    const Graph& g, std::size_t max_edges = 15);

struct OptimalResult {
  AcyclicOrientation orientation;
  Rational conc;
};

// Exhaustive search for the concurrency-maximizing initial orientation.
OptimalResult optimal_orientation_exact(const Graph& g,
                                        const ExactSearchLimits& limits = {});

struct HeuristicOptions {
  std::uint64_t seed = 0;  // mandatory: pass explicitly, runs are reproducible
  int restarts = 20;
  int steps_per_restart = 200;
};

// Seeded random restarts plus greedy single-edge flips that keep the
// orientation acyclic. Returns the best orientation found; no optimality
// claim.
OptimalResult optimal_orientation_heuristic(const Graph& g, const HeuristicOptions& options,
                                            const CycleEnumLimits& cycle_limits = {});

// The m-tuple coloring induced by one period: vertex v gets the offsets
// (within the period) of the steps at which it is a sink. Uses total_colors
// = p colors, per_vertex = m each; proper and interleaved by construction.
struct InterleavedColoring {
  int total_colors = 0;
  int per_vertex = 0;
  std::vector<std::vector<int>> colors;  // ascending per vertex
};

InterleavedColoring extract_interleaved_coloring(const SerTrace& trace);

bool coloring_is_proper(const Graph& g, const std::vector<std::vector<int>>& colors);
bool coloring_is_interleaved(const Graph& g, const std::vector<std::vector<int>>& colors);

// Interleaved multichromatic number: min over initial orientations of p/m,
// the reciprocal of the maximum concurrency.
Rational chi_bar_exact(const Graph& g, const ExactSearchLimits& limits = {});
Rational chi_bar_heuristic(const Graph& g, const HeuristicOptions& options,
                           const CycleEnumLimits& cycle_limits = {});

}  // namespace knotworks
