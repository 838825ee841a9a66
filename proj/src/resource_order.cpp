#include "knotworks/resource_order.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace knotworks {

ResourceSystem::ResourceSystem(std::vector<VertexId> processes,
                               std::vector<VertexId> resources,
                               std::vector<std::vector<VertexId>> needs_by_process)
    : processes_(std::move(processes)), resources_(std::move(resources)) {
  // Reuse Graph's id bookkeeping rules (nonempty, unique) via local indexes.
  Graph process_index_check(processes_);
  Graph resource_index_check(resources_);

  if (needs_by_process.size() != processes_.size())
    throw InputError("needs must list one resource set per process");
  needs_.resize(processes_.size());
  sharers_.resize(resources_.size());
  for (std::size_t i = 0; i < processes_.size(); ++i) {
    if (needs_by_process[i].empty())
      throw InputError("process " + processes_[i] + " needs no resources");
    for (const auto& id : needs_by_process[i]) {
      int p = resource_index_check.index_of(id);
      needs_[i].push_back(p);
    }
    std::sort(needs_[i].begin(), needs_[i].end());
    if (std::adjacent_find(needs_[i].begin(), needs_[i].end()) != needs_[i].end())
      throw InputError("process " + processes_[i] + " lists a resource twice");
    for (int p : needs_[i]) sharers_[p].push_back(static_cast<int>(i));
  }
}

int ResourceSystem::process_index(const VertexId& id) const {
  for (std::size_t i = 0; i < processes_.size(); ++i)
    if (processes_[i] == id) return static_cast<int>(i);
  throw InputError("unknown process id: " + id);
}

int ResourceSystem::resource_index(const VertexId& id) const {
  for (std::size_t p = 0; p < resources_.size(); ++p)
    if (resources_[p] == id) return static_cast<int>(p);
  throw InputError("unknown resource id: " + id);
}

bool ResourceSystem::share_a_resource(int process_a, int process_b) const {
  const auto& a = needs_.at(process_a);
  const auto& b = needs_.at(process_b);
  std::vector<int> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common));
  return !common.empty();
}

Graph build_conflict_graph(const ResourceSystem& sys) {
  Graph g(sys.processes());
  for (int i = 0; i < static_cast<int>(sys.process_count()); ++i)
    for (int j = i + 1; j < static_cast<int>(sys.process_count()); ++j)
      if (sys.share_a_resource(i, j)) g.add_edge_by_index(i, j);
  return g;
}

Graph build_resource_graph(const ResourceSystem& sys) {
  Graph h(sys.resources());
  for (int i = 0; i < static_cast<int>(sys.process_count()); ++i) {
    const auto& needs = sys.needs(i);
    for (std::size_t a = 0; a < needs.size(); ++a)
      for (std::size_t b = a + 1; b < needs.size(); ++b)
        if (!h.has_edge(needs[a], needs[b])) h.add_edge_by_index(needs[a], needs[b]);
  }
  return h;
}

void validate_coloring(const Graph& g, const Coloring& coloring) {
  if (coloring.color.size() != g.vertex_count())
    throw InputError("coloring size does not match vertex count");
  for (std::size_t v = 0; v < coloring.color.size(); ++v)
    if (coloring.color[v] < 0 || coloring.color[v] >= coloring.num_colors)
      throw InputError("color of " + g.id_of(static_cast<int>(v)) + " out of range");
  if (!coloring_is_proper(g, coloring))
    throw InputError("coloring assigns some edge's endpoints the same color");
}

bool coloring_is_proper(const Graph& g, const Coloring& coloring) {
  for (auto [lo, hi] : g.edges())
    if (coloring.color.at(lo) == coloring.color.at(hi)) return false;
  return true;
}

Coloring color_graph_greedy(const Graph& g) {
  const int n = static_cast<int>(g.vertex_count());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return g.neighbors(a).size() < g.neighbors(b).size();
  });

  Coloring coloring;
  coloring.color.assign(n, -1);
  for (int v : order) {
    std::vector<char> used(n + 1, 0);
    for (int u : g.neighbors(v))
      if (coloring.color[u] >= 0) used[coloring.color[u]] = 1;
    int c = 0;
    while (used[c]) ++c;
    coloring.color[v] = c;
    coloring.num_colors = std::max(coloring.num_colors, c + 1);
  }
  return coloring;
}

namespace {

bool color_with_k(const Graph& g, int k, std::vector<int>& color, int v) {
  if (v == static_cast<int>(g.vertex_count())) return true;
  // Symmetry breaking: vertex v may open at most one fresh color.
  int max_used = -1;
  for (int u = 0; u < v; ++u) max_used = std::max(max_used, color[u]);
  for (int c = 0; c <= std::min(k - 1, max_used + 1); ++c) {
    bool clash = false;
    for (int u : g.neighbors(v))
      if (u < v && color[u] == c) {
        clash = true;
        break;
      }
    if (clash) continue;
    color[v] = c;
    if (color_with_k(g, k, color, v + 1)) return true;
    color[v] = -1;
  }
  return false;
}

}  // namespace

Coloring color_graph_exact(const Graph& g, std::size_t max_vertices) {
  if (g.vertex_count() > max_vertices)
    throw BudgetExceeded("exact coloring capped at " + std::to_string(max_vertices) +
                         " vertices, got " + std::to_string(g.vertex_count()));
  Coloring coloring;
  if (g.vertex_count() == 0) return coloring;
  for (int k = 1; k <= static_cast<int>(g.vertex_count()); ++k) {
    std::vector<int> color(g.vertex_count(), -1);
    if (color_with_k(g, k, color, 0)) {
      coloring.color = std::move(color);
      coloring.num_colors = k;
      return coloring;
    }
  }
  throw std::logic_error("graph not colorable with n colors");
}

AcyclicOrientation orient_by_coloring(const Graph& g, const Coloring& coloring) {
  validate_coloring(g, coloring);
  std::vector<bool> toward_hi(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto [lo, hi] = g.edges()[e];
    toward_hi[e] = coloring.color[lo] < coloring.color[hi];
  }
  AcyclicOrientation orientation(std::make_shared<const Graph>(g), std::move(toward_hi));
  if (longest_directed_path_edges(orientation) > coloring.num_colors - 1)
    throw std::logic_error("longest path exceeded the color bound");
  return orientation;
}

int longest_directed_path_edges(const AcyclicOrientation& orientation) {
  Digraph d = orientation.as_digraph();
  const int n = static_cast<int>(d.vertex_count());
  // Longest path ending at v, in topological order.
  std::vector<int> longest(n, 0);
  std::vector<int> indegree(n, 0);
  for (const auto& [from, to] : d.arcs()) ++indegree[to];
  std::vector<int> ready;
  for (int v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push_back(v);
  int best = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    best = std::max(best, longest[v]);
    for (int u : d.out_neighbors(v)) {
      longest[u] = std::max(longest[u], longest[v] + 1);
      if (--indegree[u] == 0) ready.push_back(u);
    }
  }
  return best;
}

bool precedes(const AcyclicOrientation& orientation, int from, int to) {
  if (from == to) return false;
  auto reachable = reachability_set(orientation.as_digraph(), from);
  return std::binary_search(reachable.begin(), reachable.end(), to);
}

std::int64_t wait_bound(std::int64_t c, std::int64_t h) {
  if (c < 1 || h < 1) throw InputError("wait bound needs c, h >= 1");
  std::int64_t power = 1;
  for (std::int64_t i = 0; i < c; ++i) {
    if (power > std::numeric_limits<std::int64_t>::max() / h)
      throw InputError("wait bound overflows 64 bits");
    power *= h;
  }
  if (power > std::numeric_limits<std::int64_t>::max() / c)
    throw InputError("wait bound overflows 64 bits");
  return c * power;
}

int max_sharers(const ResourceSystem& sys) {
  std::size_t h = 0;
  for (int p = 0; p < static_cast<int>(sys.resource_count()); ++p)
    h = std::max(h, sys.sharers(p).size());
  return static_cast<int>(h);
}

}  // namespace knotworks
