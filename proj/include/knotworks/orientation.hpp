#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "knotworks/graph.hpp"

namespace knotworks {

// An acyclic orientation of an undirected graph: one direction bit per edge,
// validated against directed cycles at construction. Immutable; reversal
// operations return new values sharing the underlying graph.
class AcyclicOrientation {
 public:
  // toward_hi[e] == true orients edge e from its lower-index endpoint to its
  // higher-index endpoint. Throws InputError if the result has a directed
  // cycle or the bit count mismatches the edge count.
  AcyclicOrientation(std::shared_ptr<const Graph> graph, std::vector<bool> toward_hi);

  // Builds from explicit (tail, head) id pairs; every edge must appear once.
  static AcyclicOrientation from_arcs(
      std::shared_ptr<const Graph> graph,
      const std::vector<std::pair<VertexId, VertexId>>& arcs);

  const Graph& graph() const { return *graph_; }
  const std::shared_ptr<const Graph>& graph_ptr() const { return graph_; }
  const std::vector<bool>& toward_hi() const { return toward_hi_; }

  int head_of(int edge) const;
  int tail_of(int edge) const;
  // Direction of the edge between adjacent vertices a and b: true iff a -> b.
  bool points_from(int a, int b) const;

  Digraph as_digraph() const;
  std::vector<int> sink_vertices() const;
  std::vector<int> source_vertices() const;

  // Reverses every edge incident to v, making it a source. Acyclicity is
  // preserved (all reversed arcs leave v, and v keeps no incoming arcs).
  AcyclicOrientation reversed_at(const std::vector<int>& vertices) const;

  bool operator==(const AcyclicOrientation& other) const {
    return *graph_ == *other.graph_ && toward_hi_ == other.toward_hi_;
  }

 private:
  std::shared_ptr<const Graph> graph_;
  std::vector<bool> toward_hi_;
};

// Raw (possibly cyclic) orientation bits -> digraph, shared by the bead
// machinery where acyclicity is a property to check rather than an invariant.
Digraph oriented_digraph(const Graph& g, const std::vector<bool>& toward_hi);

}  // namespace knotworks
