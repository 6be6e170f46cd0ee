#include "germrenorm/graph.hpp"

#include "germrenorm/errors.hpp"

#include <boost/pending/disjoint_sets.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace germrenorm {

namespace {

using DisjointSets = boost::disjoint_sets_with_storage<>;

void check_edge_index(const FeynmanGraph& g, int e) {
  if (e < 0 || e >= g.num_edges()) throw InputError("unknown edge index " + std::to_string(e + 1));
}

}  // namespace

FeynmanGraph::FeynmanGraph(std::vector<int> vertex_ids, const std::vector<std::pair<int, int>>& edges)
    : ids_(std::move(vertex_ids)) {
  std::set<int> seen(ids_.begin(), ids_.end());
  if (seen.size() != ids_.size()) throw InputError("vertex ids must be distinct");
  for (int id : ids_)
    if (id < 0) throw InputError("vertex ids must be natural numbers");
  for (const auto& [i, j] : edges) {
    if (i == j) throw InputError("self-loop at vertex " + std::to_string(i));
    edges_.push_back({position_of(i), position_of(j)});
  }
}

int FeynmanGraph::position_of(int vertex_id) const {
  auto it = std::find(ids_.begin(), ids_.end(), vertex_id);
  if (it == ids_.end()) throw InputError("unknown vertex id " + std::to_string(vertex_id));
  return static_cast<int>(it - ids_.begin());
}

std::vector<int> FeynmanGraph::component_labels(const std::vector<int>& edge_set) const {
  DisjointSets ds(num_vertices());
  for (int v = 0; v < num_vertices(); ++v) ds.make_set(v);
  for (int e : edge_set) ds.union_set(edges_[e].a, edges_[e].b);
  std::vector<int> label(num_vertices());
  for (int v = 0; v < num_vertices(); ++v) label[v] = static_cast<int>(ds.find_set(v));
  return label;
}

int FeynmanGraph::components() const {
  std::vector<int> all(num_edges());
  std::iota(all.begin(), all.end(), 0);
  auto l = component_labels(all);
  return static_cast<int>(std::set<int>(l.begin(), l.end()).size());
}

bool MetricGraph::strict() const {
  std::vector<double> l = lengths;
  std::sort(l.begin(), l.end());
  return std::adjacent_find(l.begin(), l.end()) == l.end();
}

int betti(const FeynmanGraph& g) { return g.num_edges() - g.num_vertices() + g.components(); }

int betti(const FeynmanGraph& g, const std::vector<int>& edge_set) {
  // |E'| - rank of the graphic matroid restricted to E'
  DisjointSets ds(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) ds.make_set(v);
  int rank = 0;
  for (int e : edge_set) {
    check_edge_index(g, e);
    auto a = ds.find_set(g.edge(e).a), b = ds.find_set(g.edge(e).b);
    if (a != b) {
      ds.link(a, b);
      ++rank;
    }
  }
  return static_cast<int>(edge_set.size()) - rank;
}

FeynmanGraph induced_subgraph(const FeynmanGraph& g, const std::vector<int>& edge_set) {
  std::set<int> used;
  for (int e : edge_set) {
    check_edge_index(g, e);
    used.insert(g.edge(e).a);
    used.insert(g.edge(e).b);
  }
  std::vector<int> ids;
  for (int v : used) ids.push_back(g.vertex_ids()[v]);
  std::vector<int> sorted = edge_set;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<int, int>> edges;
  for (int e : sorted) edges.push_back({g.vertex_ids()[g.edge(e).a], g.vertex_ids()[g.edge(e).b]});
  return FeynmanGraph(ids, edges);
}

std::vector<int> kruskal_forest(const FeynmanGraph& g, const std::vector<int>& order) {
  DisjointSets ds(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) ds.make_set(v);
  std::vector<int> tree;
  for (int e : order) {
    auto a = ds.find_set(g.edge(e).a), b = ds.find_set(g.edge(e).b);
    if (a != b) {
      ds.link(a, b);
      tree.push_back(e);
    }
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

SpanningForestResult kruskal_tree(const MetricGraph& m) {
  const auto& g = m.graph;
  if (static_cast<int>(m.lengths.size()) != g.num_edges()) throw InputError("one length per edge required");
  for (double l : m.lengths)
    if (!(l > 0)) throw InputError("edge lengths must be positive");
  if (!m.strict()) throw PreconditionError("strict metric required: edge lengths must be pairwise distinct");
  if (g.components() != 1) throw PreconditionError("kruskal_tree needs a connected graph");
  std::vector<int> order(g.num_edges());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return m.lengths[a] < m.lengths[b]; });
  SpanningForestResult r;
  r.tree_edges = kruskal_forest(g, order);
  std::set<int> tree(r.tree_edges.begin(), r.tree_edges.end());
  std::vector<int> prefix;
  int in_tree = 0;
  for (int e : order) {
    prefix.push_back(e);
    if (tree.count(e)) ++in_tree;
    r.per_step_trace_ok.push_back(in_tree == static_cast<int>(prefix.size()) - betti(g, prefix));
  }
  return r;
}

std::vector<SignedEdge> fundamental_cycle(const FeynmanGraph& g, const std::vector<int>& tree_edges, int e) {
  check_edge_index(g, e);
  if (std::find(tree_edges.begin(), tree_edges.end(), e) != tree_edges.end())
    throw PreconditionError("edge " + std::to_string(e + 1) + " lies in the tree");
  const int n = g.num_vertices();
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbour, edge)
  for (int f : tree_edges) {
    check_edge_index(g, f);
    adj[g.edge(f).a].push_back({g.edge(f).b, f});
    adj[g.edge(f).b].push_back({g.edge(f).a, f});
  }
  // BFS from a(e) for the tree path to b(e)
  const int src = g.edge(e).a, dst = g.edge(e).b;
  std::vector<int> via(n, -1), prev(n, -1);
  std::vector<bool> seen(n, false);
  std::vector<int> queue{src};
  seen[src] = true;
  for (size_t q = 0; q < queue.size(); ++q) {
    int v = queue[q];
    for (auto [w, f] : adj[v]) {
      if (seen[w]) continue;
      seen[w] = true;
      via[w] = f;
      prev[w] = v;
      queue.push_back(w);
    }
  }
  if (!seen[dst]) throw PreconditionError("tree does not connect the endpoints of the edge");
  std::vector<SignedEdge> path;
  for (int v = dst; v != src; v = prev[v]) {
    const int f = via[v];
    path.push_back({f, g.edge(f).b == v ? +1 : -1});
  }
  std::reverse(path.begin(), path.end());
  path.push_back({e, -1});
  return path;
}

std::vector<FeynmanGraph> sector_filtration(const FeynmanGraph& g, const std::vector<int>& perm) {
  std::vector<int> check = perm;
  std::sort(check.begin(), check.end());
  for (int i = 0; i < static_cast<int>(check.size()); ++i)
    if (check[i] != i || static_cast<int>(check.size()) != g.num_edges()) throw InputError("invalid edge permutation");
  std::vector<FeynmanGraph> out;
  std::vector<int> prefix;
  for (int e : perm) {
    prefix.push_back(e);
    out.push_back(induced_subgraph(g, prefix));
  }
  return out;
}

DivergenceReport divergent_subgraphs(const FeynmanGraph& g, int d) {
  if (d < 1) throw InputError("dimension must be >= 1");
  const int E = g.num_edges();
  if (E > kMaxSubgraphEdges)
    throw ResourceCapError("subgraph enumeration limited to " + std::to_string(kMaxSubgraphEdges) + " edges");
  DivergenceReport r;
  for (uint32_t mask = 1; mask < (uint32_t{1} << E); ++mask) {
    std::vector<int> es;
    for (int e = 0; e < E; ++e)
      if (mask & (uint32_t{1} << e)) es.push_back(e);
    const long deg = 2L * static_cast<long>(es.size()) - static_cast<long>(d) * betti(g, es);
    if (deg - 1 < 0) r.order_bound += 1 - deg;
    if (deg <= 0) {
      r.divergent_subgraphs.push_back(es);
      r.hyperplanes.push_back(LinearForm::sum_of(E, es));
    }
  }
  // by size, then lexicographically
  std::vector<size_t> idx(r.divergent_subgraphs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    const auto &x = r.divergent_subgraphs[a], &y = r.divergent_subgraphs[b];
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  });
  DivergenceReport sorted;
  sorted.order_bound = r.order_bound;
  for (size_t i : idx) {
    sorted.divergent_subgraphs.push_back(r.divergent_subgraphs[i]);
    sorted.hyperplanes.push_back(r.hyperplanes[i]);
  }
  return sorted;
}

EdgePartition edge_partition_by_vertex_split(const FeynmanGraph& g, const std::vector<int>& inside_ids) {
  std::vector<bool> in(g.num_vertices(), false);
  for (int id : inside_ids) in[g.position_of(id)] = true;
  EdgePartition p;
  for (int e = 0; e < g.num_edges(); ++e) {
    const bool a = in[g.edge(e).a], b = in[g.edge(e).b];
    if (a && b) p.inside.push_back(e);
    else if (!a && !b) p.outside.push_back(e);
    else p.crossing.push_back(e);
  }
  return p;
}

void for_each_permutation(int n, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    f(p);
  } while (std::next_permutation(p.begin(), p.end()));
}

}  // namespace germrenorm
