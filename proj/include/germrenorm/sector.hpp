#pragma once

#include <map>
#include <vector>

#include "germrenorm/geometry.hpp"
#include "germrenorm/graph.hpp"

namespace germrenorm {

/// Blow-up chart of one Hepp sector. Slots are 0-based positions in the
/// length order (shortest first); perm[slot] is the edge in that slot.
struct SectorChart {
  LabelledGraph graph;
  int d = 0;
  std::vector<int> perm, slot_of;
  std::vector<int> tree_edges;  // Kruskal forest for this order
  std::vector<bool> in_tree;
  std::vector<int> root_of;      // per vertex
  std::vector<int> parent_edge;  // per vertex, -1 at roots
  std::vector<int> parent;       // per vertex, -1 at roots
  std::map<int, std::vector<SignedEdge>> cycles;  // non-tree edge -> cycle
  std::vector<LinearForm> lambda;  // per slot: sum_{i<=slot} 2 sigma_{perm(i)}
  std::vector<int> c0;             // per slot: exponent at s0
  std::vector<int> betti_prefix;   // b1 of G_slot

  int num_edges() const { return static_cast<int>(perm.size()); }
  int num_vertices() const { return graph.graph.num_vertices(); }
  bool is_root(int v) const { return parent_edge[v] < 0; }
  /// Edges on the tree path root -> v, from the root.
  std::vector<int> path_to(int v) const;
};

SectorChart make_chart(const LabelledGraph& g, const std::vector<int>& perm, int d);

std::vector<std::pair<LinearForm, int>> sector_exponent_forms(const LabelledGraph& g, const std::vector<int>& perm,
                                                              int d);
std::vector<int> required_ibp_depths(const SectorChart& chart);

/// Blow-up coordinates: one base point per root (x), one increment per tree edge (h).
struct BlowupPoint {
  std::vector<double> t;               // per slot
  std::map<int, Point> x;              // root vertex -> position
  std::map<int, Point> h;              // tree edge -> increment
};

struct ConfigPoint {
  std::vector<Point> positions;  // per vertex
  std::vector<double> lengths;   // per edge
};

ConfigPoint pi_forward(const SectorChart& chart, const BlowupPoint& p);
BlowupPoint pi_inverse(const SectorChart& chart, const ConfigPoint& c);

/// d^2(x_a, x_b) / l_e in the smooth blown-up form, never dividing by l_e.
double pullback_edge(const SectorChart& chart, int e, const BlowupPoint& p, const GeometryBackend& geom);

/// prod_{slot(f) <= j < slot(e)} t_j
double partial_suffix(const SectorChart& chart, int f, int e, const std::vector<double>& t);

}  // namespace germrenorm
