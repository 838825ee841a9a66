#include "knotworks/graph.hpp"

#include <algorithm>
#include <functional>

namespace knotworks {

namespace {

std::int64_t pair_key(int a, int b) {
  return (static_cast<std::int64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

// Rotate a directed cycle so it starts at its smallest vertex index.
std::vector<int> canonical_rotation(const std::vector<int>& cycle) {
  auto it = std::min_element(cycle.begin(), cycle.end());
  std::vector<int> out;
  out.reserve(cycle.size());
  out.insert(out.end(), it, cycle.end());
  out.insert(out.end(), cycle.begin(), it);
  return out;
}

}  // namespace

Graph::Graph(std::vector<VertexId> vertices) {
  for (auto& v : vertices) add_vertex(v);
}

void Graph::add_vertex(const VertexId& id) {
  if (id.empty()) throw InputError("empty vertex id");
  if (index_.count(id)) throw InputError("duplicate vertex id: " + id);
  index_.emplace(id, static_cast<int>(vertices_.size()));
  vertices_.push_back(id);
  adjacency_.emplace_back();
}

bool Graph::has_vertex(const VertexId& id) const { return index_.count(id) > 0; }

int Graph::index_of(const VertexId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown vertex id: " + id);
  return it->second;
}

void Graph::add_edge(const VertexId& a, const VertexId& b) {
  add_edge_by_index(index_of(a), index_of(b));
}

void Graph::add_edge_by_index(int a, int b) {
  if (a < 0 || b < 0 || a >= static_cast<int>(vertices_.size()) ||
      b >= static_cast<int>(vertices_.size()))
    throw InputError("edge endpoint out of range");
  if (a == b) throw InputError("self-loop on vertex " + vertices_[a]);
  int lo = std::min(a, b), hi = std::max(a, b);
  if (edge_lookup_.count(pair_key(lo, hi)))
    throw InputError("duplicate edge " + vertices_[lo] + "-" + vertices_[hi]);
  // Keep edges sorted; desk-scale graphs, so linear insertion and a lookup
  // rebuild per insert are fine.
  auto pos = std::lower_bound(edges_.begin(), edges_.end(), std::make_pair(lo, hi));
  edges_.insert(pos, {lo, hi});
  edge_lookup_.clear();
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i)
    edge_lookup_[pair_key(edges_[i].first, edges_[i].second)] = i;
  adjacency_[lo].insert(
      std::lower_bound(adjacency_[lo].begin(), adjacency_[lo].end(), hi), hi);
  adjacency_[hi].insert(
      std::lower_bound(adjacency_[hi].begin(), adjacency_[hi].end(), lo), lo);
}

bool Graph::has_edge(int a, int b) const {
  return edge_lookup_.count(pair_key(std::min(a, b), std::max(a, b))) > 0;
}

int Graph::edge_index(int a, int b) const {
  auto it = edge_lookup_.find(pair_key(std::min(a, b), std::max(a, b)));
  if (it == edge_lookup_.end())
    throw InputError("no edge " + vertices_.at(a) + "-" + vertices_.at(b));
  return it->second;
}

bool Graph::is_connected() const {
  if (vertices_.empty()) return true;
  std::vector<char> seen(vertices_.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : adjacency_[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++visited;
        stack.push_back(u);
      }
    }
  }
  return visited == vertices_.size();
}

Digraph::Digraph(std::vector<VertexId> vertices) {
  for (auto& v : vertices) add_vertex(v);
}

void Digraph::add_vertex(const VertexId& id) {
  if (id.empty()) throw InputError("empty vertex id");
  if (index_.count(id)) throw InputError("duplicate vertex id: " + id);
  index_.emplace(id, static_cast<int>(vertices_.size()));
  vertices_.push_back(id);
  out_.emplace_back();
  in_.emplace_back();
}

bool Digraph::has_vertex(const VertexId& id) const { return index_.count(id) > 0; }

int Digraph::index_of(const VertexId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown vertex id: " + id);
  return it->second;
}

void Digraph::add_arc(const VertexId& from, const VertexId& to) {
  add_arc_by_index(index_of(from), index_of(to));
}

void Digraph::add_arc_by_index(int from, int to) {
  if (from < 0 || to < 0 || from >= static_cast<int>(vertices_.size()) ||
      to >= static_cast<int>(vertices_.size()))
    throw InputError("arc endpoint out of range");
  if (from == to) throw InputError("self-loop on vertex " + vertices_[from]);
  if (arc_lookup_.count(pair_key(from, to)))
    throw InputError("duplicate arc " + vertices_[from] + "->" + vertices_[to]);
  auto pos = std::lower_bound(arcs_.begin(), arcs_.end(), std::make_pair(from, to));
  arcs_.insert(pos, {from, to});
  arc_lookup_.clear();
  for (int i = 0; i < static_cast<int>(arcs_.size()); ++i)
    arc_lookup_[pair_key(arcs_[i].first, arcs_[i].second)] = i;
  out_[from].insert(std::lower_bound(out_[from].begin(), out_[from].end(), to), to);
  in_[to].insert(std::lower_bound(in_[to].begin(), in_[to].end(), from), from);
}

bool Digraph::has_arc(int from, int to) const {
  return arc_lookup_.count(pair_key(from, to)) > 0;
}

SccResult strongly_connected_components(const Digraph& d) {
  const int n = static_cast<int>(d.vertex_count());
  SccResult result;
  result.component_of.assign(n, -1);

  // Tarjan, iterative so deep graphs cannot overflow the stack.
  std::vector<int> dfs_number(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> scc_stack;
  int next_dfs = 0;
  std::vector<std::vector<int>> raw_components;

  struct Frame {
    int vertex;
    std::size_t next_child;
  };
  std::vector<Frame> frames;

  for (int root = 0; root < n; ++root) {
    if (dfs_number[root] != -1) continue;
    frames.push_back({root, 0});
    dfs_number[root] = low[root] = next_dfs++;
    scc_stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& frame = frames.back();
      int v = frame.vertex;
      const auto& succ = d.out_neighbors(v);
      if (frame.next_child < succ.size()) {
        int u = succ[frame.next_child++];
        if (dfs_number[u] == -1) {
          dfs_number[u] = low[u] = next_dfs++;
          scc_stack.push_back(u);
          on_stack[u] = 1;
          frames.push_back({u, 0});
        } else if (on_stack[u]) {
          low[v] = std::min(low[v], dfs_number[u]);
        }
      } else {
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().vertex] = std::min(low[frames.back().vertex], low[v]);
        if (low[v] == dfs_number[v]) {
          std::vector<int> component;
          int u;
          do {
            u = scc_stack.back();
            scc_stack.pop_back();
            on_stack[u] = 0;
            component.push_back(u);
          } while (u != v);
          std::sort(component.begin(), component.end());
          raw_components.push_back(std::move(component));
        }
      }
    }
  }

  // Deterministic component order: by smallest member.
  std::sort(raw_components.begin(), raw_components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  result.components = std::move(raw_components);
  for (int c = 0; c < static_cast<int>(result.components.size()); ++c)
    for (int v : result.components[c]) result.component_of[v] = c;

  for (const auto& [from, to] : d.arcs()) {
    int cf = result.component_of[from], ct = result.component_of[to];
    if (cf != ct) result.condensation_arcs.emplace_back(cf, ct);
  }
  std::sort(result.condensation_arcs.begin(), result.condensation_arcs.end());
  result.condensation_arcs.erase(
      std::unique(result.condensation_arcs.begin(), result.condensation_arcs.end()),
      result.condensation_arcs.end());
  return result;
}

std::vector<int> reachability_set(const Digraph& d, int v) {
  if (v < 0 || v >= static_cast<int>(d.vertex_count()))
    throw InputError("vertex index out of range");
  std::vector<char> seen(d.vertex_count(), 0);
  std::vector<int> stack{v};
  seen[v] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int w : d.out_neighbors(u)) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(d.vertex_count()); ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

std::vector<int> reachability_set(const Digraph& d, const VertexId& v) {
  return reachability_set(d, d.index_of(v));
}

AcyclicityResult check_acyclic(const Digraph& d) {
  const int n = static_cast<int>(d.vertex_count());
  // Colors: 0 unvisited, 1 on current path, 2 done.
  std::vector<char> color(n, 0);
  std::vector<int> parent(n, -1);

  struct Frame {
    int vertex;
    std::size_t next_child;
  };
  std::vector<Frame> frames;

  for (int root = 0; root < n; ++root) {
    if (color[root] != 0) continue;
    frames.push_back({root, 0});
    color[root] = 1;
    while (!frames.empty()) {
      Frame& frame = frames.back();
      int v = frame.vertex;
      const auto& succ = d.out_neighbors(v);
      if (frame.next_child < succ.size()) {
        int u = succ[frame.next_child++];
        if (color[u] == 0) {
          color[u] = 1;
          parent[u] = v;
          frames.push_back({u, 0});
        } else if (color[u] == 1) {
          // Back arc v->u closes a cycle u ... v.
          std::vector<int> cycle;
          for (int w = v; w != u; w = parent[w]) cycle.push_back(w);
          cycle.push_back(u);
          std::reverse(cycle.begin(), cycle.end());
          return {false, canonical_rotation(cycle)};
        }
      } else {
        color[v] = 2;
        frames.pop_back();
      }
    }
  }
  return {true, {}};
}

std::vector<int> sinks(const Digraph& d) {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(d.vertex_count()); ++v)
    if (d.out_neighbors(v).empty()) out.push_back(v);
  return out;
}

std::vector<int> sources(const Digraph& d) {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(d.vertex_count()); ++v)
    if (d.in_neighbors(v).empty()) out.push_back(v);
  return out;
}

std::vector<SimpleCycle> enumerate_simple_cycles(const Graph& g,
                                                 const CycleEnumLimits& limits) {
  if (g.vertex_count() > limits.max_vertices)
    throw BudgetExceeded("cycle enumeration capped at " +
                         std::to_string(limits.max_vertices) + " vertices, got " +
                         std::to_string(g.vertex_count()));

  std::vector<SimpleCycle> cycles;
  const int n = static_cast<int>(g.vertex_count());
  std::vector<char> in_path(n, 0);
  std::vector<int> path;

  // Each cycle is found exactly once: rooted at its smallest vertex, with all
  // other vertices larger than the root, and reflection broken by requiring
  // path[1] < path.back() at closure.
  std::function<void(int, int)> extend = [&](int root, int v) {
    for (int u : g.neighbors(v)) {
      if (u == root && path.size() >= 3) {
        if (path[1] < path.back()) {
          if (cycles.size() >= limits.max_cycles)
            throw BudgetExceeded("cycle enumeration capped at " +
                                 std::to_string(limits.max_cycles) + " cycles");
          cycles.push_back({path});
        }
      } else if (u > root && !in_path[u]) {
        in_path[u] = 1;
        path.push_back(u);
        extend(root, u);
        path.pop_back();
        in_path[u] = 0;
      }
    }
  };

  for (int root = 0; root < n; ++root) {
    in_path[root] = 1;
    path.assign(1, root);
    extend(root, root);
    in_path[root] = 0;
  }

  std::sort(cycles.begin(), cycles.end(), [](const SimpleCycle& a, const SimpleCycle& b) {
    if (a.vertices.size() != b.vertices.size())
      return a.vertices.size() < b.vertices.size();
    return a.vertices < b.vertices;
  });
  return cycles;
}

std::vector<VertexId> ids_of(const Graph& g, const std::vector<int>& indices) {
  std::vector<VertexId> out;
  out.reserve(indices.size());
  for (int i : indices) out.push_back(g.id_of(i));
  return out;
}

std::vector<VertexId> ids_of(const Digraph& d, const std::vector<int>& indices) {
  std::vector<VertexId> out;
  out.reserve(indices.size());
  for (int i : indices) out.push_back(d.id_of(i));
  return out;
}

}  // namespace knotworks
