#pragma once

#include <variant>
#include <vector>

#include "knotworks/graph.hpp"

namespace knotworks {

// Vertex-id sets in wait conditions are kept sorted and duplicate-free; the
// helpers below enforce that. All five models express when a waiting process
// is relieved given the subset of its out-neighbors that have granted.

struct AndCondition {};
struct OrCondition {};

struct XOutOfYCondition {
  int x = 1;  // relieved once any x of the y = |O_i| out-neighbors grant
};

struct AndOrCondition {
  // Antichain of subsets of O_i whose union is O_i; relieved when some
  // subset is fully granted. Subsets sorted lexicographically.
  std::vector<std::vector<VertexId>> subsets;
};

struct DisjXYCondition {
  struct Pair {
    int x = 1;
    std::vector<VertexId> q;  // sorted member set, y = |q|
  };
  // Relieved when, for some k, at least pairs[k].x members of pairs[k].q
  // have granted. Union of all q equals O_i.
  std::vector<Pair> pairs;
};

using WaitCondition = std::variant<AndCondition, OrCondition, XOutOfYCondition,
                                   AndOrCondition, DisjXYCondition>;

enum class WaitModel { and_model, or_model, x_out_of_y, and_or, disj_x_out_of_y };

WaitModel model_of(const WaitCondition& cond);
const char* model_name(WaitModel model);

// Sorts, deduplicates.
std::vector<VertexId> make_vertex_set(std::vector<VertexId> ids);

// Validates cond against the out-set O_i. Checked rules:
//   x-out-of-y   1 <= x <= |O_i|
//   AND-OR       nonempty subsets, union = O_i, no subset contains another
//   disjunctive  nonempty parts, union = O_i, 1 <= x^k <= |Q^k|, and no two
//                parts (x', Q'), (x'', Q'') with Q' subset-of Q'' and x' >= x''
// Plain AND/OR are always structurally valid.
void validate_condition(const WaitCondition& cond, const std::vector<VertexId>& out_set);

// True iff the wait condition is satisfied by exactly `granted`.
// Throws InputError unless granted is a subset of out_set.
bool relieved_by(const WaitCondition& cond, const std::vector<VertexId>& out_set,
                 const std::vector<VertexId>& granted);

// x-out-of-y as AND-OR: all x-subsets of the out-set, C(y, x) of them.
AndOrCondition xy_to_andor(int x, const std::vector<VertexId>& out_set);

// Disjunctive x-out-of-y as AND-OR: the full expansion (all x^k-subsets of
// each Q^k), merged, with subset-dominated members pruned away.
AndOrCondition dxy_to_andor(const DisjXYCondition& cond,
                            const std::vector<VertexId>& out_set);

// AND-OR as disjunctive x-out-of-y: one (|subset|, subset) pair per subset.
DisjXYCondition andor_to_dxy(const AndOrCondition& cond,
                             const std::vector<VertexId>& out_set);

// Prunes supersets so the family is an antichain; relieved_by is unchanged.
AndOrCondition normalize_andor(const std::vector<std::vector<VertexId>>& subsets);

// A wait-for graph: digraph W plus one wait condition per vertex. Out-sets
// O_i are derived from the arcs. Sinks always carry the vacuous AND
// condition (already relieved); conditions may reference only O_i members.
class WaitForGraph {
 public:
  explicit WaitForGraph(Digraph w);  // every vertex gets AndCondition
  WaitForGraph(Digraph w, std::vector<WaitCondition> conditions);

  const Digraph& digraph() const { return w_; }
  const WaitCondition& condition(int v) const { return conditions_.at(v); }
  const std::vector<WaitCondition>& conditions() const { return conditions_; }
  const std::vector<VertexId>& out_set(int v) const { return out_sets_.at(v); }
  bool is_sink(int v) const { return out_sets_.at(v).empty(); }

 private:
  Digraph w_;
  std::vector<WaitCondition> conditions_;
  std::vector<std::vector<VertexId>> out_sets_;
};

}  // namespace knotworks
