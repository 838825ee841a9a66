#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "knotworks/errors.hpp"

namespace knotworks {

using VertexId = std::string;

// Undirected simple graph over opaque string vertex ids. Vertices keep their
// declared order (all deterministic iteration derives from it); edges are
// stored sorted by endpoint index pair. No self-loops, no duplicate edges.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::vector<VertexId> vertices);

  void add_vertex(const VertexId& id);
  void add_edge(const VertexId& a, const VertexId& b);
  void add_edge_by_index(int a, int b);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<VertexId>& vertices() const { return vertices_; }

  bool has_vertex(const VertexId& id) const;
  int index_of(const VertexId& id) const;  // throws InputError on unknown id
  const VertexId& id_of(int index) const { return vertices_.at(index); }

  // Edges as (lo, hi) index pairs, lo < hi, sorted ascending.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool has_edge(int a, int b) const;
  int edge_index(int a, int b) const;  // throws InputError if absent
  const std::vector<int>& neighbors(int v) const { return adjacency_.at(v); }

  bool is_connected() const;  // vacuously true when empty

  bool operator==(const Graph& other) const {
    return vertices_ == other.vertices_ && edges_ == other.edges_;
  }

 private:
  std::vector<VertexId> vertices_;
  std::unordered_map<VertexId, int> index_;
  std::vector<std::pair<int, int>> edges_;
  std::unordered_map<std::int64_t, int> edge_lookup_;
  std::vector<std::vector<int>> adjacency_;  // sorted neighbor indices
};

// Directed simple graph, same id/ordering conventions as Graph.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::vector<VertexId> vertices);

  void add_vertex(const VertexId& id);
  void add_arc(const VertexId& from, const VertexId& to);
  void add_arc_by_index(int from, int to);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }
  const std::vector<VertexId>& vertices() const { return vertices_; }

  bool has_vertex(const VertexId& id) const;
  int index_of(const VertexId& id) const;
  const VertexId& id_of(int index) const { return vertices_.at(index); }

  // Arcs as (from, to) index pairs, sorted ascending.
  const std::vector<std::pair<int, int>>& arcs() const { return arcs_; }
  bool has_arc(int from, int to) const;
  const std::vector<int>& out_neighbors(int v) const { return out_.at(v); }
  const std::vector<int>& in_neighbors(int v) const { return in_.at(v); }

  bool operator==(const Digraph& other) const {
    return vertices_ == other.vertices_ && arcs_ == other.arcs_;
  }

 private:
  std::vector<VertexId> vertices_;
  std::unordered_map<VertexId, int> index_;
  std::vector<std::pair<int, int>> arcs_;
  std::unordered_map<std::int64_t, int> arc_lookup_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

// An undirected simple cycle, >= 3 vertices, no repeats. Canonical form:
// starts at the smallest vertex index and vertices[1] < vertices.back(), so
// each cycle appears exactly once up to rotation and reflection. The stored
// order is the cycle's forward traversal direction; the reverse order is the
// other one.
struct SimpleCycle {
  std::vector<int> vertices;

  bool operator==(const SimpleCycle& other) const {
    return vertices == other.vertices;
  }
};

struct SccResult {
  // Components sorted internally by vertex index and ordered by smallest
  // member. Every vertex appears in exactly one component.
  std::vector<std::vector<int>> components;
  std::vector<int> component_of;  // vertex index -> component index
  // Arcs between distinct components, deduplicated and sorted.
  std::vector<std::pair<int, int>> condensation_arcs;
};

SccResult strongly_connected_components(const Digraph& d);

// All vertices reachable from v by directed paths, v included. Sorted.
std::vector<int> reachability_set(const Digraph& d, int v);
std::vector<int> reachability_set(const Digraph& d, const VertexId& v);

struct AcyclicityResult {
  bool acyclic = true;
  // When cyclic: one directed cycle, canonicalized to start at its smallest
  // vertex index. Empty otherwise.
  std::vector<int> witness_cycle;
};

AcyclicityResult check_acyclic(const Digraph& d);
inline bool is_acyclic(const Digraph& d) { return check_acyclic(d).acyclic; }

// Vertices with no outgoing / no incoming arcs. Isolated vertices are both.
std::vector<int> sinks(const Digraph& d);
std::vector<int> sources(const Digraph& d);

struct CycleEnumLimits {
  std::size_t max_vertices = 20;
  std::size_t max_cycles = 10000;
};

// Every undirected simple cycle of g, each exactly once in canonical form,
// sorted by (length, vertex sequence). Throws BudgetExceeded past the caps.
std::vector<SimpleCycle> enumerate_simple_cycles(const Graph& g,
                                                 const CycleEnumLimits& limits = {});

// Id translation helpers, mostly for tests and CLI output.
std::vector<VertexId> ids_of(const Graph& g, const std::vector<int>& indices);
std::vector<VertexId> ids_of(const Digraph& d, const std::vector<int>& indices);

}  // namespace knotworks
