#pragma once

#include <cstdint>
#include <vector>

#include "knotworks/graph.hpp"
#include "knotworks/orientation.hpp"
#include "knotworks/rational.hpp"

namespace knotworks {

// Positive per-process rates steering long-run priority ratios: across any
// edge, neighbors end up operating in the inverse ratio of their rates.
struct RateVector {
  std::vector<std::int64_t> rates;  // indexed like the graph's vertices

  static RateVector uniform(const Graph& g, std::int64_t rate = 1);
};

void validate_rates(const Graph& g, const RateVector& rates);

// Beads an edge between processes with rates ri and rj must carry:
// ri + rj - gcd(ri, rj).
std::int64_t edge_capacity(std::int64_t ri, std::int64_t rj);

// Bead counts per edge end. Indexed like the graph's edge list; at_lo/at_hi
// are the beads on the lower/higher-index endpoint's side.
struct BeadPlacement {
  std::vector<std::int64_t> at_lo;
  std::vector<std::int64_t> at_hi;

  auto operator<=>(const BeadPlacement&) const = default;
};

// Per-edge well-formedness: beads nonnegative, total equals edge_capacity,
// both counts multiples of gcd(ri, rj). Those conditions make every edge
// oriented in exactly one direction. Throws InputError on violation.
void validate_edges(const Graph& g, const RateVector& rates, const BeadPlacement& p);

// Edge oriented toward whichever end holds at least its rate in beads.
// Acyclicity is not guaranteed; callers check it separately.
Digraph orientation_from_beads(const Graph& g, const RateVector& rates,
                               const BeadPlacement& p);

struct CycleCheck {
  SimpleCycle cycle;
  std::int64_t sigma = 0;  // larger far-end bead sum over the two traversals
  std::int64_t rho = 0;    // sum of member rates
  bool ok = false;         // sigma < rho
};

struct PlacementReport {
  std::vector<CycleCheck> cycles;
  bool valid = false;  // every simple cycle has sigma < rho
};

// Far-end bead sums per simple cycle; the placement is safe and
// ratio-compliant exactly when sigma < rho on every cycle. Both sums are
// invariant under the dynamics. Requires well-formed edges.
PlacementReport validate_placement(const Graph& g, const RateVector& rates,
                                   const BeadPlacement& p,
                                   const CycleEnumLimits& cycle_limits = {});

// Far-end bead sum along the stored traversal direction of the cycle.
std::int64_t sigma_forward(const Graph& g, const BeadPlacement& p, const SimpleCycle& cycle);

// One synchronous heavy-load step: every sink simultaneously forwards its
// rate in beads across each of its edges. Non-sinks are unchanged.
BeadPlacement smer_step(const Graph& g, const RateVector& rates, const BeadPlacement& p);

struct SmerTrace {
  std::vector<BeadPlacement> placements;  // distinct states, placements[0] = start
  bool period_found = false;
  int tail_start = 0;
  int period = 0;
  std::vector<std::int64_t> operations_per_period;  // per process
  int first_cyclic_step = -1;  // first step whose orientation has a directed cycle
};

// Runs until the placement repeats or `horizon` steps elapse. Horizon
// exhaustion is reported in the trace, not an error.
SmerTrace run_smer(const Graph& g, const RateVector& rates, const BeadPlacement& start,
                   std::size_t horizon = 10'000);

struct EdgeRatio {
  int edge = 0;
  std::int64_t lo_operations = 0;  // per period
  std::int64_t hi_operations = 0;
  bool compliant = false;  // lo_ops/hi_ops == r_hi/r_lo exactly
};

struct RatioReport {
  std::vector<EdgeRatio> edges;
  bool all_compliant = false;
};

// Per-edge operation ratios over one period, compared exactly against the
// inverse rate ratio. Throws InputError when the trace has no period.
RatioReport ratio_compliance(const Graph& g, const RateVector& rates, const SmerTrace& trace);

}  // namespace knotworks
