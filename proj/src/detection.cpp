#include "knotworks/detection.hpp"

#include <algorithm>
#include <numeric>

namespace knotworks {

namespace {

void require_model(const WaitForGraph& w, WaitModel model, const char* op) {
  for (int v = 0; v < static_cast<int>(w.digraph().vertex_count()); ++v) {
    if (w.is_sink(v)) continue;  // sinks always carry the vacuous AND
    if (model_of(w.condition(v)) != model)
      throw InputError(std::string(op) + ": vertex " + w.digraph().id_of(v) +
                       " carries a " + model_name(model_of(w.condition(v))) +
                       " condition, expected " + model_name(model));
  }
}

std::vector<VertexId> granted_ids(const WaitForGraph& w, int v,
                                  const std::vector<char>& relieved) {
  std::vector<VertexId> out;
  for (int u : w.digraph().out_neighbors(v))
    if (relieved[u]) out.push_back(w.digraph().id_of(u));
  std::sort(out.begin(), out.end());
  return out;
}

FixpointResult run_fixpoint(const WaitForGraph& w, const std::vector<int>& order) {
  const int n = static_cast<int>(w.digraph().vertex_count());
  std::vector<char> relieved(n, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v : order) {
      if (relieved[v]) continue;
      if (relieved_by(w.condition(v), w.out_set(v), granted_ids(w, v, relieved))) {
        relieved[v] = 1;
        changed = true;
      }
    }
  }
  FixpointResult result;
  for (int v = 0; v < n; ++v)
    (relieved[v] ? result.relieved : result.deadlocked).push_back(v);
  return result;
}

Verdict verdict_from_fixpoint(const WaitForGraph& w) {
  Verdict verdict;
  verdict.deadlocked_set = oracle_fixpoint(w).deadlocked;
  verdict.deadlocked = !verdict.deadlocked_set.empty();
  return verdict;
}

// Odometer over one out-neighbor choice per (vertex, subset). Candidates for
// unrelieved vertices are ordered unrelieved-first, which makes the very
// first assignment contain a knot whenever a deadlock exists.
class BSubgraphChoices {
 public:
  BSubgraphChoices(const WaitForGraph& w, const std::vector<char>& unrelieved) {
    const auto& d = w.digraph();
    for (int v = 0; v < static_cast<int>(d.vertex_count()); ++v) {
      if (w.is_sink(v)) continue;
      const auto& andor = std::get<AndOrCondition>(w.condition(v));
      for (const auto& subset : andor.subsets) {
        Slot slot;
        slot.vertex = v;
        for (const auto& id : subset) {
          int u = d.index_of(id);
          if (unrelieved[v] && unrelieved[u])
            slot.candidates.insert(slot.candidates.begin(), u);
          else
            slot.candidates.push_back(u);
        }
        slot.position = 0;
        slots_.push_back(std::move(slot));
      }
    }
  }

  std::vector<std::pair<int, int>> current_arcs() const {
    std::vector<std::pair<int, int>> arcs;
    for (const auto& slot : slots_)
      arcs.emplace_back(slot.vertex, slot.candidates[slot.position]);
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    return arcs;
  }

  bool advance() {
    for (auto it = slots_.rbegin(); it != slots_.rend(); ++it) {
      if (++it->position < it->candidates.size()) return true;
      it->position = 0;
    }
    return false;
  }

 private:
  struct Slot {
    int vertex;
    std::vector<int> candidates;
    std::size_t position;
  };
  std::vector<Slot> slots_;
};

// Terminal SCC of size >= 2 among the given arcs, or empty. Works on the
// vertex set of w's digraph.
std::vector<int> find_knot_in_arcs(const Digraph& base,
                                   const std::vector<std::pair<int, int>>& arcs) {
  Digraph sub(base.vertices());
  for (const auto& [from, to] : arcs) sub.add_arc_by_index(from, to);
  auto scc = strongly_connected_components(sub);
  std::vector<char> has_out(scc.components.size(), 0);
  for (const auto& [from, to] : scc.condensation_arcs) has_out[from] = 1;
  for (std::size_t c = 0; c < scc.components.size(); ++c)
    if (!has_out[c] && scc.components[c].size() >= 2) return scc.components[c];
  return {};
}

}  // namespace

FixpointResult oracle_fixpoint(const WaitForGraph& w) {
  std::vector<int> order(w.digraph().vertex_count());
  std::iota(order.begin(), order.end(), 0);
  return run_fixpoint(w, order);
}

FixpointResult oracle_fixpoint_ordered(const WaitForGraph& w,
                                       const std::vector<int>& order) {
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (int v = 0; v < static_cast<int>(sorted.size()); ++v)
    if (sorted[v] != v)
      throw InputError("processing order is not a permutation of the vertices");
  if (sorted.size() != w.digraph().vertex_count())
    throw InputError("processing order size mismatch");
  return run_fixpoint(w, order);
}

Verdict detect_and(const WaitForGraph& w) {
  require_model(w, WaitModel::and_model, "detect_and");
  Verdict verdict = verdict_from_fixpoint(w);
  auto acyclicity = check_acyclic(w.digraph());
  if (verdict.deadlocked != !acyclicity.acyclic)
    throw std::logic_error("AND detection disagrees with the fixpoint");
  if (verdict.deadlocked) verdict.witness = CycleWitness{acyclicity.witness_cycle};
  return verdict;
}

Verdict detect_or(const WaitForGraph& w) {
  require_model(w, WaitModel::or_model, "detect_or");
  Verdict verdict = verdict_from_fixpoint(w);

  // A knot is a terminal SCC with at least two vertices.
  auto scc = strongly_connected_components(w.digraph());
  std::vector<char> has_out(scc.components.size(), 0);
  for (const auto& [from, to] : scc.condensation_arcs) has_out[from] = 1;
  std::optional<std::vector<int>> knot;
  for (std::size_t c = 0; c < scc.components.size() && !knot; ++c)
    if (!has_out[c] && scc.components[c].size() >= 2) knot = scc.components[c];

  if (verdict.deadlocked != knot.has_value())
    throw std::logic_error("OR detection disagrees with the fixpoint");
  if (knot) verdict.witness = KnotWitness{*knot};
  return verdict;
}

Verdict detect_xy(const WaitForGraph& w) {
  require_model(w, WaitModel::x_out_of_y, "detect_xy");
  const auto& d = w.digraph();
  const int n = static_cast<int>(d.vertex_count());

  // Maximal (y-x)-knot by iterated pruning, smallest vertex first. Deletion
  // is monotone, so the order cannot change the result.
  std::vector<char> in_set(n, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      if (!in_set[v]) continue;
      if (w.is_sink(v)) {
        in_set[v] = 0;
        changed = true;
        continue;
      }
      int inside = 0;
      for (int u : d.out_neighbors(v)) inside += in_set[u];
      int slack = static_cast<int>(w.out_set(v).size()) -
                  std::get<XOutOfYCondition>(w.condition(v)).x;
      if (inside <= slack) {
        in_set[v] = 0;
        changed = true;
      }
    }
  }
  std::vector<int> knot;
  for (int v = 0; v < n; ++v)
    if (in_set[v]) knot.push_back(v);

  Verdict verdict = verdict_from_fixpoint(w);
  if (verdict.deadlocked_set != knot)
    throw std::logic_error("(y-x)-knot pruning disagrees with the fixpoint");
  if (!knot.empty()) verdict.witness = YxKnotWitness{knot};
  return verdict;
}

Verdict detect_andor(const WaitForGraph& w, const BKnotSearchOptions& options) {
  require_model(w, WaitModel::and_or, "detect_andor");
  Verdict verdict = verdict_from_fixpoint(w);
  if (!verdict.deadlocked || !options.want_witness) return verdict;

  std::vector<char> unrelieved(w.digraph().vertex_count(), 0);
  for (int v : verdict.deadlocked_set) unrelieved[v] = 1;

  BSubgraphChoices choices(w, unrelieved);
  std::int64_t examined = 0;
  do {
    if (examined >= options.budget) {
      verdict.witness = WitnessBudgetExceeded{examined};
      return verdict;
    }
    ++examined;
    auto arcs = choices.current_arcs();
    auto knot = find_knot_in_arcs(w.digraph(), arcs);
    if (!knot.empty()) {
      verdict.witness = BKnotWitness{std::move(arcs), std::move(knot)};
      return verdict;
    }
  } while (choices.advance());
  // A deadlocked AND-OR graph always contains a b-knot, so running out of
  // b-subgraphs here means the detector itself is broken.
  throw std::logic_error("no b-knot found although the fixpoint deadlocked");
}

WaitForGraph dxy_as_andor_graph(const WaitForGraph& w) {
  require_model(w, WaitModel::disj_x_out_of_y, "detect_dxy");
  const auto& d = w.digraph();
  Digraph converted(d.vertices());
  std::vector<WaitCondition> conditions(d.vertex_count(), AndCondition{});
  for (int v = 0; v < static_cast<int>(d.vertex_count()); ++v) {
    if (w.is_sink(v)) continue;
    AndOrCondition andor =
        dxy_to_andor(std::get<DisjXYCondition>(w.condition(v)), w.out_set(v));
    std::vector<VertexId> covered;
    for (const auto& s : andor.subsets) covered.insert(covered.end(), s.begin(), s.end());
    for (const auto& id : make_vertex_set(std::move(covered)))
      converted.add_arc_by_index(v, d.index_of(id));
    conditions[v] = std::move(andor);
  }
  return WaitForGraph(std::move(converted), std::move(conditions));
}

Verdict detect_dxy(const WaitForGraph& w, const BKnotSearchOptions& options) {
  Verdict verdict = detect_andor(dxy_as_andor_graph(w), options);
  // Vertex order is shared with w, so index-based results carry over. Dropped
  // redundant arcs cannot change any vertex's relief, hence not the set.
  return verdict;
}

bool is_directed_cycle(const Digraph& d, const std::vector<int>& vertices) {
  if (vertices.size() < 2) return false;
  std::vector<int> sorted = vertices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (!d.has_arc(vertices[i], vertices[(i + 1) % vertices.size()])) return false;
  return true;
}

bool is_knot(const Digraph& d, const std::vector<int>& vertices) {
  if (vertices.size() < 2) return false;
  std::vector<int> sorted = vertices;
  std::sort(sorted.begin(), sorted.end());
  for (int v : sorted)
    if (reachability_set(d, v) != sorted) return false;
  return true;
}

bool is_yx_knot(const WaitForGraph& w, const std::vector<int>& vertices) {
  if (vertices.empty()) return false;
  std::vector<char> in_set(w.digraph().vertex_count(), 0);
  for (int v : vertices) in_set[v] = 1;
  for (int v : vertices) {
    if (w.is_sink(v)) return false;
    int inside = 0;
    for (int u : w.digraph().out_neighbors(v)) inside += in_set[u];
    int slack = static_cast<int>(w.out_set(v).size()) -
                std::get<XOutOfYCondition>(w.condition(v)).x;
    if (inside <= slack) return false;
  }
  return true;
}

}  // namespace knotworks
