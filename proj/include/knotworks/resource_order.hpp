#pragma once

#include <cstdint>
#include <vector>

#include "knotworks/graph.hpp"
#include "knotworks/orientation.hpp"

namespace knotworks {

// Processes, resources, and who may request what. The per-process resource
// sets are the single source of truth; sharer sets are derived.
class ResourceSystem {
 public:
  ResourceSystem(std::vector<VertexId> processes, std::vector<VertexId> resources,
                 std::vector<std::vector<VertexId>> needs_by_process);

  std::size_t process_count() const { return processes_.size(); }
  std::size_t resource_count() const { return resources_.size(); }
  const std::vector<VertexId>& processes() const { return processes_; }
  const std::vector<VertexId>& resources() const { return resources_; }

  int process_index(const VertexId& id) const;
  int resource_index(const VertexId& id) const;

  // Sorted resource indices process i may request (nonempty by invariant).
  const std::vector<int>& needs(int process) const { return needs_.at(process); }
  // Sorted process indices that may request resource p.
  const std::vector<int>& sharers(int resource) const { return sharers_.at(resource); }

  bool share_a_resource(int process_a, int process_b) const;

 private:
  std::vector<VertexId> processes_;
  std::vector<VertexId> resources_;
  std::vector<std::vector<int>> needs_;
  std::vector<std::vector<int>> sharers_;
};

// The process conflict graph: one vertex per process, an edge wherever two
// processes share at least one resource. Every resource's sharer set induces
// a clique.
Graph build_conflict_graph(const ResourceSystem& sys);

// The resource graph: one vertex per resource, an edge wherever two
// resources are co-needed by some process. Every process's resource set
// induces a clique.
Graph build_resource_graph(const ResourceSystem& sys);

struct Coloring {
  std::vector<int> color;  // per vertex, 0-based
  int num_colors = 0;
};

void validate_coloring(const Graph& g, const Coloring& coloring);
bool coloring_is_proper(const Graph& g, const Coloring& coloring);

// Greedy coloring in ascending-degree order (ties by vertex index); uses at
// most max-degree + 1 colors.
Coloring color_graph_greedy(const Graph& g);

// Chromatic-number coloring by branch and bound; capped because the problem
// is NP-hard.
Coloring color_graph_exact(const Graph& g, std::size_t max_vertices = 12);

// Orients every edge from lower to higher color. The result is acyclic and
// its longest directed path has at most num_colors - 1 edges.
AcyclicOrientation orient_by_coloring(const Graph& g, const Coloring& coloring);

// Longest directed path length (in edges) of an acyclic orientation, by DAG
// dynamic programming.
int longest_directed_path_edges(const AcyclicOrientation& orientation);

// Directed-path existence in the oriented graph ("precedes").
bool precedes(const AcyclicOrientation& orientation, int from, int to);

// Value of the c * h^c worst-case wait bound. An asymptotic-order witness
// only, not a measured wait. Throws InputError on overflow.
std::int64_t wait_bound(std::int64_t c, std::int64_t h);

// Largest sharer-set size h = max |P_p|.
int max_sharers(const ResourceSystem& sys);

}  // namespace knotworks
