#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "germrenorm/linear_form.hpp"

namespace germrenorm {

constexpr int kMaxSubgraphEdges = 16;

// Edges are indexed 0..E-1 in code; files and reports use 1..E.
class FeynmanGraph {
 public:
  struct Edge {
    int a, b;  // positions into vertices()
  };

  FeynmanGraph() = default;
  /// Edges given as vertex ids.
  FeynmanGraph(std::vector<int> vertex_ids, const std::vector<std::pair<int, int>>& edges);

  int num_vertices() const { return static_cast<int>(ids_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<int>& vertex_ids() const { return ids_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  int position_of(int vertex_id) const;  // throws InputError for unknown ids

  int components() const;
  /// Components of the spanning subgraph on all vertices using only `edge_set`.
  std::vector<int> component_labels(const std::vector<int>& edge_set) const;

 private:
  std::vector<int> ids_;
  std::vector<Edge> edges_;
};

struct LabelledGraph {
  FeynmanGraph graph;
  std::vector<int> labels;  // k_e >= 0 per edge
};

struct MetricGraph {
  FeynmanGraph graph;
  std::vector<double> lengths;
  bool strict() const;
};

struct SpanningForestResult {
  std::vector<int> tree_edges;  // sorted
  std::vector<bool> per_step_trace_ok;
};

struct SignedEdge {
  int edge;
  int sign;  // +1 when traversed a -> b
};

struct DivergenceReport {
  std::vector<std::vector<int>> divergent_subgraphs;  // sorted edge sets
  std::vector<LinearForm> hyperplanes;                // sum of sigma_e over the subgraph
  long order_bound = 0;
};

struct EdgePartition {
  std::vector<int> inside, outside, crossing;
};

int betti(const FeynmanGraph& g);
/// b1 of the subgraph induced by the edge set.
int betti(const FeynmanGraph& g, const std::vector<int>& edge_set);

/// Vertices are those incident to edge_set, edges keep their order.
FeynmanGraph induced_subgraph(const FeynmanGraph& g, const std::vector<int>& edge_set);

/// Kruskal over the given edge order; returns a spanning forest.
std::vector<int> kruskal_forest(const FeynmanGraph& g, const std::vector<int>& order);

/// The tree whose trace on every step of the length filtration is spanning.
SpanningForestResult kruskal_tree(const MetricGraph& m);

/// Tree path from a(e) to b(e) with signs, followed by e itself with sign -1.
std::vector<SignedEdge> fundamental_cycle(const FeynmanGraph& g, const std::vector<int>& tree_edges, int e);

std::vector<FeynmanGraph> sector_filtration(const FeynmanGraph& g, const std::vector<int>& perm);

DivergenceReport divergent_subgraphs(const FeynmanGraph& g, int d);

/// `inside` lists vertex ids of I.
EdgePartition edge_partition_by_vertex_split(const FeynmanGraph& g, const std::vector<int>& inside_ids);

/// Calls f for every permutation of 0..n-1 in lexicographic order.
void for_each_permutation(int n, const std::function<void(const std::vector<int>&)>& f);

}  // namespace germrenorm
