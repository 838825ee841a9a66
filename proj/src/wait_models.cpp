#include "knotworks/wait_models.hpp"

#include <algorithm>

namespace knotworks {

namespace {

bool is_sorted_set(const std::vector<VertexId>& ids) {
  return std::is_sorted(ids.begin(), ids.end()) &&
         std::adjacent_find(ids.begin(), ids.end()) == ids.end();
}

bool subset_of(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::size_t intersection_size(const std::vector<VertexId>& a,
                              const std::vector<VertexId>& b) {
  std::size_t count = 0;
  auto ia = a.begin();
  for (const auto& id : b) {
    ia = std::lower_bound(ia, a.end(), id);
    if (ia == a.end()) break;
    if (*ia == id) ++count;
  }
  return count;
}

std::vector<VertexId> union_of(const std::vector<std::vector<VertexId>>& sets) {
  std::vector<VertexId> all;
  for (const auto& s : sets) all.insert(all.end(), s.begin(), s.end());
  return make_vertex_set(std::move(all));
}

void append_k_subsets(const std::vector<VertexId>& base, std::size_t k,
                      std::vector<std::vector<VertexId>>& out) {
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    std::vector<VertexId> subset;
    subset.reserve(k);
    for (std::size_t i : pick) subset.push_back(base[i]);
    out.push_back(std::move(subset));
    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == base.size() - k + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace

WaitModel model_of(const WaitCondition& cond) {
  if (std::holds_alternative<AndCondition>(cond)) return WaitModel::and_model;
  if (std::holds_alternative<OrCondition>(cond)) return WaitModel::or_model;
  if (std::holds_alternative<XOutOfYCondition>(cond)) return WaitModel::x_out_of_y;
  if (std::holds_alternative<AndOrCondition>(cond)) return WaitModel::and_or;
  return WaitModel::disj_x_out_of_y;
}

const char* model_name(WaitModel model) {
  switch (model) {
    case WaitModel::and_model: return "and";
    case WaitModel::or_model: return "or";
    case WaitModel::x_out_of_y: return "xy";
    case WaitModel::and_or: return "andor";
    case WaitModel::disj_x_out_of_y: return "dxy";
  }
  return "?";
}

std::vector<VertexId> make_vertex_set(std::vector<VertexId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

void validate_condition(const WaitCondition& cond, const std::vector<VertexId>& out_set) {
  if (!is_sorted_set(out_set)) throw InputError("out-set is not a sorted set");

  if (const auto* xy = std::get_if<XOutOfYCondition>(&cond)) {
    if (xy->x < 1 || xy->x > static_cast<int>(out_set.size()))
      throw InputError("x-out-of-y condition with x=" + std::to_string(xy->x) +
                       " outside [1," + std::to_string(out_set.size()) + "]");
    return;
  }

  if (const auto* andor = std::get_if<AndOrCondition>(&cond)) {
    if (andor->subsets.empty()) throw InputError("AND-OR condition with no subsets");
    for (const auto& s : andor->subsets) {
      if (s.empty()) throw InputError("AND-OR condition with an empty subset");
      if (!is_sorted_set(s)) throw InputError("AND-OR subset is not a sorted set");
      if (!subset_of(s, out_set))
        throw InputError("AND-OR subset references vertices outside the out-set");
    }
    if (union_of(andor->subsets) != out_set)
      throw InputError("AND-OR subsets must cover the out-set");
    for (std::size_t i = 0; i < andor->subsets.size(); ++i)
      for (std::size_t j = 0; j < andor->subsets.size(); ++j)
        if (i != j && subset_of(andor->subsets[i], andor->subsets[j]))
          throw InputError("AND-OR subsets must form an antichain");
    return;
  }

  if (const auto* dxy = std::get_if<DisjXYCondition>(&cond)) {
    if (dxy->pairs.empty())
      throw InputError("disjunctive x-out-of-y condition with no pairs");
    std::vector<std::vector<VertexId>> qs;
    for (const auto& p : dxy->pairs) {
      if (p.q.empty()) throw InputError("disjunctive pair with an empty set");
      if (!is_sorted_set(p.q)) throw InputError("disjunctive set is not sorted");
      if (!subset_of(p.q, out_set))
        throw InputError("disjunctive set references vertices outside the out-set");
      if (p.x < 1 || p.x > static_cast<int>(p.q.size()))
        throw InputError("disjunctive pair with x=" + std::to_string(p.x) +
                         " outside [1," + std::to_string(p.q.size()) + "]");
      qs.push_back(p.q);
    }
    if (union_of(qs) != out_set)
      throw InputError("disjunctive sets must cover the out-set");
    for (std::size_t i = 0; i < dxy->pairs.size(); ++i)
      for (std::size_t j = 0; j < dxy->pairs.size(); ++j) {
        if (i == j) continue;
        if (subset_of(dxy->pairs[i].q, dxy->pairs[j].q) &&
            dxy->pairs[i].x >= dxy->pairs[j].x)
          throw InputError("disjunctive pair dominated by another");
      }
    return;
  }
  // Plain AND / OR need no structural checks.
}

bool relieved_by(const WaitCondition& cond, const std::vector<VertexId>& out_set,
                 const std::vector<VertexId>& granted) {
  if (!is_sorted_set(granted)) throw InputError("granted is not a sorted set");
  if (!subset_of(granted, out_set))
    throw InputError("granted set is not a subset of the out-set");

  if (std::holds_alternative<AndCondition>(cond)) return granted == out_set;
  if (std::holds_alternative<OrCondition>(cond)) return !granted.empty();
  if (const auto* xy = std::get_if<XOutOfYCondition>(&cond))
    return static_cast<int>(granted.size()) >= xy->x;
  if (const auto* andor = std::get_if<AndOrCondition>(&cond)) {
    for (const auto& s : andor->subsets)
      if (subset_of(s, granted)) return true;
    return false;
  }
  const auto& dxy = std::get<DisjXYCondition>(cond);
  for (const auto& p : dxy.pairs)
    if (static_cast<int>(intersection_size(granted, p.q)) >= p.x) return true;
  return false;
}

AndOrCondition xy_to_andor(int x, const std::vector<VertexId>& out_set) {
  if (!is_sorted_set(out_set)) throw InputError("out-set is not a sorted set");
  if (x < 1 || x > static_cast<int>(out_set.size()))
    throw InputError("x=" + std::to_string(x) + " outside [1," +
                     std::to_string(out_set.size()) + "]");
  AndOrCondition result;
  append_k_subsets(out_set, static_cast<std::size_t>(x), result.subsets);
  std::sort(result.subsets.begin(), result.subsets.end());
  return result;
}

AndOrCondition dxy_to_andor(const DisjXYCondition& cond,
                            const std::vector<VertexId>& out_set) {
  validate_condition(WaitCondition{cond}, out_set);
  std::vector<std::vector<VertexId>> expanded;
  for (const auto& p : cond.pairs)
    append_k_subsets(p.q, static_cast<std::size_t>(p.x), expanded);
  return normalize_andor(expanded);
}

DisjXYCondition andor_to_dxy(const AndOrCondition& cond,
                             const std::vector<VertexId>& out_set) {
  validate_condition(WaitCondition{cond}, out_set);
  DisjXYCondition result;
  for (const auto& s : cond.subsets)
    result.pairs.push_back({static_cast<int>(s.size()), s});
  return result;
}

AndOrCondition normalize_andor(const std::vector<std::vector<VertexId>>& subsets) {
  if (subsets.empty()) throw InputError("cannot normalize an empty subset family");
  std::vector<std::vector<VertexId>> sorted;
  sorted.reserve(subsets.size());
  for (const auto& s : subsets) {
    if (s.empty()) throw InputError("cannot normalize a family with an empty subset");
    sorted.push_back(make_vertex_set(s));
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  AndOrCondition result;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < sorted.size() && !dominated; ++j)
      if (i != j && subset_of(sorted[j], sorted[i]) && sorted[j] != sorted[i])
        dominated = true;  // a strictly smaller subset already implies this one
    if (!dominated) result.subsets.push_back(sorted[i]);
  }
  return result;
}

WaitForGraph::WaitForGraph(Digraph w)
    : WaitForGraph(std::move(w), std::vector<WaitCondition>{}) {}

WaitForGraph::WaitForGraph(Digraph w, std::vector<WaitCondition> conditions)
    : w_(std::move(w)), conditions_(std::move(conditions)) {
  const int n = static_cast<int>(w_.vertex_count());
  if (conditions_.empty()) conditions_.assign(n, AndCondition{});
  if (static_cast<int>(conditions_.size()) != n)
    throw InputError("condition count does not match vertex count");
  out_sets_.resize(n);
  for (int v = 0; v < n; ++v) {
    for (int u : w_.out_neighbors(v)) out_sets_[v].push_back(w_.id_of(u));
    std::sort(out_sets_[v].begin(), out_sets_[v].end());
    if (out_sets_[v].empty() && !std::holds_alternative<AndCondition>(conditions_[v]))
      throw InputError("sink " + w_.id_of(v) + " must carry the vacuous AND condition");
    validate_condition(conditions_[v], out_sets_[v]);
  }
}

}  // namespace knotworks
