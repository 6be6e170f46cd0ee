#include "germrenorm/sector.hpp"

#include "germrenorm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace germrenorm {

std::vector<int> SectorChart::path_to(int v) const {
  std::vector<int> path;
  for (int w = v; parent_edge[w] >= 0; w = parent[w]) path.push_back(parent_edge[w]);
  std::reverse(path.begin(), path.end());
  return path;
}

SectorChart make_chart(const LabelledGraph& lg, const std::vector<int>& perm, int d) {
  const auto& g = lg.graph;
  const int E = g.num_edges(), n = g.num_vertices();
  if (static_cast<int>(lg.labels.size()) != E) throw InputError("one label per edge required");
  SectorChart c;
  c.graph = lg;
  c.d = d;
  c.perm = perm;
  c.slot_of.assign(E, -1);
  for (int s = 0; s < static_cast<int>(perm.size()); ++s) {
    if (perm[s] < 0 || perm[s] >= E || c.slot_of[perm[s]] >= 0) throw InputError("invalid edge permutation");
    c.slot_of[perm[s]] = s;
  }
  if (static_cast<int>(perm.size()) != E) throw InputError("invalid edge permutation");
  c.tree_edges = kruskal_forest(g, perm);
  c.in_tree.assign(E, false);
  for (int e : c.tree_edges) c.in_tree[e] = true;

  // roots: smallest vertex id in each component
  auto comp = g.component_labels(c.tree_edges);
  std::map<int, int> root_of_comp;
  for (int v = 0; v < n; ++v) {
    auto it = root_of_comp.find(comp[v]);
    if (it == root_of_comp.end() || g.vertex_ids()[v] < g.vertex_ids()[it->second]) root_of_comp[comp[v]] = v;
  }
  c.root_of.resize(n);
  for (int v = 0; v < n; ++v) c.root_of[v] = root_of_comp[comp[v]];
  c.parent_edge.assign(n, -1);
  c.parent.assign(n, -1);
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (int e : c.tree_edges) {
    adj[g.edge(e).a].push_back({g.edge(e).b, e});
    adj[g.edge(e).b].push_back({g.edge(e).a, e});
  }
  for (const auto& [cl, r] : root_of_comp) {
    std::vector<int> queue{r};
    std::vector<bool> seen(n, false);
    seen[r] = true;
    for (size_t q = 0; q < queue.size(); ++q)
      for (auto [w, e] : adj[queue[q]])
        if (!seen[w]) {
          seen[w] = true;
          c.parent[w] = queue[q];
          c.parent_edge[w] = e;
          queue.push_back(w);
        }
  }
  for (int e = 0; e < E; ++e)
    if (!c.in_tree[e]) c.cycles[e] = fundamental_cycle(g, c.tree_edges, e);

  std::vector<int> prefix;
  int ksum = 0;
  for (int s = 0; s < E; ++s) {
    prefix.push_back(perm[s]);
    ksum += lg.labels[perm[s]];
    const int b1 = betti(g, prefix);
    c.betti_prefix.push_back(b1);
    c.lambda.push_back(LinearForm::sum_of(E, prefix, Rational(2)));
    c.c0.push_back(2 * (s + 1) + 2 * ksum - d * b1);
  }
  return c;
}

std::vector<std::pair<LinearForm, int>> sector_exponent_forms(const LabelledGraph& g, const std::vector<int>& perm,
                                                              int d) {
  SectorChart c = make_chart(g, perm, d);
  std::vector<std::pair<LinearForm, int>> out;
  for (int s = 0; s < c.num_edges(); ++s) out.push_back({c.lambda[s], c.c0[s]});
  return out;
}

std::vector<int> required_ibp_depths(const SectorChart& chart) {
  std::vector<int> k;
  for (int a : chart.c0) k.push_back(std::max(0, 1 - a));
  return k;
}

double partial_suffix(const SectorChart& chart, int f, int e, const std::vector<double>& t) {
  double p = 1;
  for (int j = chart.slot_of[f]; j < chart.slot_of[e]; ++j) p *= t[j];
  return p;
}

namespace {

double suffix(const std::vector<double>& t, int slot) {
  double p = 1;
  for (int j = slot; j < static_cast<int>(t.size()); ++j) p *= t[j];
  return p;
}

}  // namespace

ConfigPoint pi_forward(const SectorChart& chart, const BlowupPoint& p) {
  const int n = chart.num_vertices(), d = chart.d;
  ConfigPoint c;
  c.positions.assign(n, Point(d, 0.0));
  for (int v = 0; v < n; ++v) {
    c.positions[v] = p.x.at(chart.root_of[v]);
    int prev = chart.root_of[v];
    for (int f : chart.path_to(v)) {
      const auto& ed = chart.graph.graph.edge(f);
      const int next = ed.a == prev ? ed.b : ed.a;
      const double sp = suffix(p.t, chart.slot_of[f]);
      for (int mu = 0; mu < d; ++mu) c.positions[v][mu] += sp * p.h.at(f)[mu];
      prev = next;
    }
  }
  for (int e = 0; e < chart.num_edges(); ++e) {
    const double sp = suffix(p.t, chart.slot_of[e]);
    c.lengths.push_back(sp * sp);
  }
  return c;
}

BlowupPoint pi_inverse(const SectorChart& chart, const ConfigPoint& c) {
  const int E = chart.num_edges(), d = chart.d;
  BlowupPoint p;
  p.t.resize(E);
  for (int s = 0; s < E; ++s) {
    const double l = c.lengths[chart.perm[s]];
    const double next = s + 1 < E ? c.lengths[chart.perm[s + 1]] : 1.0;
    if (!(l > 0) || !(l < next)) throw PreconditionError("lengths outside the open sector");
    p.t[s] = std::sqrt(l / next);
  }
  for (int v = 0; v < chart.num_vertices(); ++v) {
    if (chart.is_root(v)) {
      p.x[v] = c.positions[v];
      continue;
    }
    const int f = chart.parent_edge[v];
    const double sp = suffix(p.t, chart.slot_of[f]);
    Point h(d);
    for (int mu = 0; mu < d; ++mu) h[mu] = (c.positions[v][mu] - c.positions[chart.parent[v]][mu]) / sp;
    p.h[f] = h;
  }
  return p;
}

double pullback_edge(const SectorChart& chart, int e, const BlowupPoint& p, const GeometryBackend& geom) {
  const int d = chart.d;
  const auto& g = chart.graph.graph;
  const Point& base = p.x.begin()->second;
  const Eigen::MatrixXd gm = geom.metric(base);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  if (chart.in_tree[e]) {
    for (int mu = 0; mu < d; ++mu) v(mu) = p.h.at(e)[mu];
  } else {
    const auto& cyc = chart.cycles.at(e);
    int at = g.edge(e).a;
    for (const auto& se : cyc) {
      if (se.edge == e) break;
      const auto& ed = g.edge(se.edge);
      const int next = ed.a == at ? ed.b : ed.a;
      // h_f points parent -> child
      const double orient = chart.parent[next] == at ? 1.0 : -1.0;
      const double f = orient * partial_suffix(chart, se.edge, e, p.t);
      for (int mu = 0; mu < d; ++mu) v(mu) += f * p.h.at(se.edge)[mu];
      at = next;
    }
  }
  return v.dot(gm * v);
}

}  // namespace germrenorm
