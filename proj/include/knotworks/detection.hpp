#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "knotworks/wait_models.hpp"

namespace knotworks {

struct CycleWitness {
  std::vector<int> vertices;  // directed cycle, canonical start
};

struct KnotWitness {
  std::vector<int> vertices;  // every member reaches exactly this set
};

struct YxKnotWitness {
  std::vector<int> vertices;  // each member has > y_i - x_i out-neighbors inside
};

struct BKnotWitness {
  // One out-neighbor chosen per AND-OR subset per vertex; the knot lives in
  // the resulting b-subgraph.
  std::vector<std::pair<int, int>> b_subgraph_arcs;
  std::vector<int> knot;
};

struct WitnessBudgetExceeded {
  std::int64_t budget = 0;  // b-subgraphs examined before giving up
};

using Witness = std::variant<std::monostate, CycleWitness, KnotWitness,
                             YxKnotWitness, BKnotWitness, WitnessBudgetExceeded>;

struct Verdict {
  bool deadlocked = false;
  std::vector<int> deadlocked_set;  // sorted vertex indices
  Witness witness;
};

struct FixpointResult {
  std::vector<int> relieved;    // sorted vertex indices
  std::vector<int> deadlocked;  // complement, sorted
};

// Grant-propagation least fixpoint, valid for any mix of wait conditions:
// sinks start relieved, a vertex becomes relieved once its condition holds
// with the currently relieved out-neighbors granted. Monotone, so the result
// is independent of processing order.
FixpointResult oracle_fixpoint(const WaitForGraph& w);

// Same fixpoint but probing vertices in the given order; used to check
// order-independence. `order` must be a permutation of the vertex indices.
FixpointResult oracle_fixpoint_ordered(const WaitForGraph& w,
                                       const std::vector<int>& order);

struct BKnotSearchOptions {
  std::int64_t budget = 1'000'000;  // max b-subgraphs examined
  bool want_witness = true;
};

// Structural detectors, one per deadlock model. Each throws InputError when
// a non-sink vertex carries a condition of the wrong model. The deadlocked
// set is always the fixpoint's unrelieved set; the witness is the model's
// structural certificate.
Verdict detect_and(const WaitForGraph& w);
Verdict detect_or(const WaitForGraph& w);
Verdict detect_xy(const WaitForGraph& w);
Verdict detect_andor(const WaitForGraph& w, const BKnotSearchOptions& options = {});
Verdict detect_dxy(const WaitForGraph& w, const BKnotSearchOptions& options = {});

// detect_dxy works by rewriting each disjunctive condition as AND-OR. Pairs
// made redundant by the expansion can drop out-neighbors from the converted
// condition; the converted graph omits those arcs (they cannot affect any
// vertex's relief). Exposed for tests.
WaitForGraph dxy_as_andor_graph(const WaitForGraph& w);

// Witness checks, used by detectors internally and by the test oracles.
bool is_directed_cycle(const Digraph& d, const std::vector<int>& vertices);
bool is_knot(const Digraph& d, const std::vector<int>& vertices);
bool is_yx_knot(const WaitForGraph& w, const std::vector<int>& vertices);

}  // namespace knotworks
