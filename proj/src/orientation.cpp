#include "knotworks/orientation.hpp"

#include <algorithm>

namespace knotworks {

Digraph oriented_digraph(const Graph& g, const std::vector<bool>& toward_hi) {
  if (toward_hi.size() != g.edge_count())
    throw InputError("orientation bit count does not match edge count");
  Digraph d(g.vertices());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto [lo, hi] = g.edges()[e];
    if (toward_hi[e])
      d.add_arc_by_index(lo, hi);
    else
      d.add_arc_by_index(hi, lo);
  }
  return d;
}

AcyclicOrientation::AcyclicOrientation(std::shared_ptr<const Graph> graph,
                                       std::vector<bool> toward_hi)
    : graph_(std::move(graph)), toward_hi_(std::move(toward_hi)) {
  if (!graph_) throw InputError("orientation requires a graph");
  auto check = check_acyclic(oriented_digraph(*graph_, toward_hi_));
  if (!check.acyclic) throw InputError("orientation has a directed cycle");
}

AcyclicOrientation AcyclicOrientation::from_arcs(
    std::shared_ptr<const Graph> graph,
    const std::vector<std::pair<VertexId, VertexId>>& arcs) {
  if (!graph) throw InputError("orientation requires a graph");
  std::vector<bool> toward_hi(graph->edge_count(), false);
  std::vector<char> seen(graph->edge_count(), 0);
  for (const auto& [tail, head] : arcs) {
    int t = graph->index_of(tail), h = graph->index_of(head);
    int e = graph->edge_index(t, h);
    if (seen[e])
      throw InputError("edge " + tail + "-" + head + " oriented twice");
    seen[e] = 1;
    toward_hi[e] = graph->edges()[e].second == h;
  }
  for (std::size_t e = 0; e < graph->edge_count(); ++e)
    if (!seen[e]) {
      auto [lo, hi] = graph->edges()[e];
      throw InputError("edge " + graph->id_of(lo) + "-" + graph->id_of(hi) +
                       " left unoriented");
    }
  return AcyclicOrientation(std::move(graph), std::move(toward_hi));
}

int AcyclicOrientation::head_of(int edge) const {
  const auto& [lo, hi] = graph_->edges().at(edge);
  return toward_hi_[edge] ? hi : lo;
}

int AcyclicOrientation::tail_of(int edge) const {
  const auto& [lo, hi] = graph_->edges().at(edge);
  return toward_hi_[edge] ? lo : hi;
}

bool AcyclicOrientation::points_from(int a, int b) const {
  int e = graph_->edge_index(a, b);
  return tail_of(e) == a;
}

Digraph AcyclicOrientation::as_digraph() const {
  return oriented_digraph(*graph_, toward_hi_);
}

std::vector<int> AcyclicOrientation::sink_vertices() const {
  std::vector<char> has_out(graph_->vertex_count(), 0);
  for (std::size_t e = 0; e < graph_->edge_count(); ++e) has_out[tail_of(e)] = 1;
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(graph_->vertex_count()); ++v)
    if (!has_out[v]) out.push_back(v);
  return out;
}

std::vector<int> AcyclicOrientation::source_vertices() const {
  std::vector<char> has_in(graph_->vertex_count(), 0);
  for (std::size_t e = 0; e < graph_->edge_count(); ++e) has_in[head_of(e)] = 1;
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(graph_->vertex_count()); ++v)
    if (!has_in[v]) out.push_back(v);
  return out;
}

AcyclicOrientation AcyclicOrientation::reversed_at(const std::vector<int>& vertices) const {
  std::vector<char> flip_at(graph_->vertex_count(), 0);
  for (int v : vertices) flip_at.at(v) = 1;
  std::vector<bool> bits = toward_hi_;
  for (std::size_t e = 0; e < graph_->edge_count(); ++e)
    if (flip_at[head_of(static_cast<int>(e))]) bits[e] = !bits[e];
  return AcyclicOrientation(graph_, std::move(bits));
}

}  // namespace knotworks
