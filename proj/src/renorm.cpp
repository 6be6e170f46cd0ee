#include "germrenorm/renorm.hpp"

#include "germrenorm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace germrenorm {

namespace {

FeynmanGraph subgraph_on(const FeynmanGraph& g, const std::vector<int>& ids, const std::vector<int>& edges) {
  std::vector<std::pair<int, int>> pairs;
  for (int e : edges) pairs.push_back({g.vertex_ids()[g.edge(e).a], g.vertex_ids()[g.edge(e).b]});
  return FeynmanGraph(ids, pairs);
}

std::vector<int> sorted_ids(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

// closest centers of a point of u and a point of v (the same point excluded
// when u and v are the same function), absolute or in units of the larger width
double closest_centers(const TestFunction& u, const TestFunction& v, bool in_widths) {
  const int d = u.dim();
  const bool same = &u == &v;
  double best = INFINITY;
  for (const auto& a : u.terms())
    for (const auto& b : v.terms()) {
      if (same && &a != &b) continue;
      const double w = std::max(*std::max_element(a.width.begin(), a.width.end()),
                                *std::max_element(b.width.begin(), b.width.end()));
      for (int i = 0; i < u.points(); ++i)
        for (int j = same ? i + 1 : 0; j < v.points(); ++j) {
          double r2 = 0;
          for (int mu = 0; mu < d; ++mu) r2 += std::pow(a.center[i * d + mu] - b.center[j * d + mu], 2);
          best = std::min(best, in_widths ? std::sqrt(r2) / w : std::sqrt(r2));
        }
    }
  return best;
}

}  // namespace

RenormResult renormalize(const FeynmanGraph& g, const TestFunction& phi, const FlatGeometry& geom,
                         const AmplitudeConfig& cfg, const std::vector<ExtraEdge>& fixed) {
  AmplitudeGermResult a = assemble_full_amplitude(g, phi, geom, cfg, fixed);
  RenormResult r;
  r.holo_jet = project_holomorphic(a.germ);
  r.value = evaluate_at_base(r.holo_jet);
  r.germ = std::move(a.germ);
  r.realized_poles = std::move(a.realized_poles);
  r.quad_error = a.quad_error;
  r.sectors = a.sectors;
  return r;
}

double direct_pairing(const FeynmanGraph& g, const TestFunction& phi, const FlatGeometry& geom, int tau_nodes,
                      double tau_min) {
  const int E = g.num_edges(), n = g.num_vertices();
  if (!geom.isotropic()) throw PreconditionError("direct pairing needs an isotropic metric");
  if (phi.points() != n) throw InputError("test function and graph disagree on the number of points");
  if (E == 0) return gaussian_pairing(phi, Eigen::MatrixXd::Zero(n, n));
  const TauRule rule = full_green_rule(geom, tau_nodes, tau_min);
  const double c = geom.metric_scale();
  const int N = rule.size();
  double total = 0;
  std::vector<int> idx(E, 0);
  while (true) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    double w = 1;
    for (int e = 0; e < E; ++e) {
      w *= rule.weight[idx[e]];
      const double k = c / (2 * rule.tau[idx[e]]);
      const auto& ed = g.edge(e);
      A(ed.a, ed.a) += k;
      A(ed.b, ed.b) += k;
      A(ed.a, ed.b) -= k;
      A(ed.b, ed.a) -= k;
    }
    if (w != 0.0) total += w * gaussian_pairing(phi, A);
    int j = E - 1;
    while (j >= 0 && ++idx[j] == N) idx[j--] = 0;
    if (j < 0) break;
  }
  return total;
}

double diagonal_separation(const TestFunction& phi) { return closest_centers(phi, phi, true); }

double off_diagonal_tau_min(double distance) {
  if (!std::isfinite(distance)) return 0.0;
  return std::min(0.5, distance * distance / 640);
}

CheckReport make_report(std::string name, double lhs, double rhs, double tolerance, bool exact) {
  CheckReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tolerance = tolerance;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  r.discrepancy = scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
  r.pass = exact ? lhs == rhs : r.discrepancy <= tolerance;
  return r;
}

CheckReport check_extension(const FeynmanGraph& g, const TestFunction& phi, const FlatGeometry& geom,
                            const AmplitudeConfig& cfg, double tolerance) {
  const RenormResult r = renormalize(g, phi, geom, cfg);
  const double direct =
      direct_pairing(g, phi, geom, cfg.quad.tau_nodes, off_diagonal_tau_min(closest_centers(phi, phi, false)));
  CheckReport rep = make_report("extension", r.value.real(), direct, tolerance);
  rep.quad_error = r.quad_error;
  const double sep = diagonal_separation(phi);
  if (sep < 5.0)
    rep.warning = "support within " + std::to_string(sep) + " widths of a diagonal (5 required)";
  return rep;
}

CheckReport check_locality(const FeynmanGraph& g, const std::vector<int>& inside_ids, const TestFunction& phi_u,
                           const TestFunction& phi_v, const FlatGeometry& geom, const AmplitudeConfig& cfg,
                           double tolerance) {
  const std::vector<int> u_ids = sorted_ids(inside_ids);
  std::vector<int> v_ids;
  for (int id : g.vertex_ids())
    if (!std::binary_search(u_ids.begin(), u_ids.end(), id)) v_ids.push_back(id);
  v_ids = sorted_ids(v_ids);
  if (u_ids.empty() || v_ids.empty()) throw PreconditionError("vertex split leaves an empty side");
  if (phi_u.points() != static_cast<int>(u_ids.size()) || phi_v.points() != static_cast<int>(v_ids.size()))
    throw InputError("test functions do not match the vertex split");

  // phi_u (x) phi_v in the vertex order of g
  std::vector<int> perm;
  for (int id : u_ids) perm.push_back(g.position_of(id));
  for (int id : v_ids) perm.push_back(g.position_of(id));
  const TestFunction phi = phi_u.tensor(phi_v).relabelled(perm);

  const EdgePartition part = edge_partition_by_vertex_split(g, u_ids);
  const RenormResult lhs = renormalize(g, phi, geom, cfg);
  double rhs = 0, qerr = lhs.quad_error;
  if (part.crossing.empty()) {
    const RenormResult a = renormalize(subgraph_on(g, u_ids, part.inside), phi_u, geom, cfg);
    const RenormResult b = renormalize(subgraph_on(g, v_ids, part.outside), phi_v, geom, cfg);
    rhs = (a.value * b.value).real();
    qerr += a.quad_error * std::abs(b.value) + b.quad_error * std::abs(a.value);
  } else {
    std::vector<int> kept = part.inside;
    kept.insert(kept.end(), part.outside.begin(), part.outside.end());
    std::sort(kept.begin(), kept.end());
    auto green = std::make_shared<TauRule>(
        full_green_rule(geom, cfg.quad.tau_nodes, off_diagonal_tau_min(closest_centers(phi_u, phi_v, false))));
    std::vector<ExtraEdge> crossing;
    for (int e : part.crossing) crossing.push_back({g.edge(e).a, g.edge(e).b, green});
    const RenormResult b = renormalize(subgraph_on(g, g.vertex_ids(), kept), phi, geom, cfg, crossing);
    rhs = b.value.real();
    qerr += b.quad_error;
  }
  CheckReport rep = make_report("locality", lhs.value.real(), rhs, tolerance);
  rep.quad_error = qerr;
  const double sep = closest_centers(phi_u, phi_v, true);
  if (sep < 5.0) rep.warning = "supports only " + std::to_string(sep) + " widths apart (5 required)";
  return rep;
}

CheckReport check_translation(const FeynmanGraph& g, const TestFunction& phi, const std::vector<double>& shift,
                              const FlatGeometry& geom, const AmplitudeConfig& cfg, double tolerance) {
  const RenormResult a = renormalize(g, phi, geom, cfg);
  const RenormResult b = renormalize(g, phi.translated(shift), geom, cfg);
  CheckReport rep = make_report("translation", b.value.real(), a.value.real(), tolerance);
  rep.quad_error = a.quad_error + b.quad_error;
  return rep;
}

std::vector<CheckReport> check_compatibility(const FeynmanGraph& g, const TestFunction& phi,
                                             const FlatGeometry& geom, const AmplitudeConfig& cfg) {
  std::vector<CheckReport> out;
  const RenormResult base = renormalize(g, phi, geom, cfg);
  const double v0 = base.value.real();

  // monotone relabelling of vertex ids
  std::vector<int> ids;
  for (int id : g.vertex_ids()) ids.push_back(4 * id + 1);
  std::vector<std::pair<int, int>> pairs;
  for (const auto& e : g.edges()) pairs.push_back({ids[e.a], ids[e.b]});
  const RenormResult relabel = renormalize(FeynmanGraph(ids, pairs), phi, geom, cfg);
  out.push_back(make_report("compatibility.relabel", relabel.value.real(), v0, 0.0, true));

  // I inside J with one unused vertex carrying a unit-mass Gaussian
  ids = g.vertex_ids();
  ids.push_back(*std::max_element(ids.begin(), ids.end()) + 1);
  pairs.clear();
  for (const auto& e : g.edges()) pairs.push_back({g.vertex_ids()[e.a], g.vertex_ids()[e.b]});
  const TestFunction bigger = phi.with_extra_points(1, std::vector<double>(phi.dim(), 0.0), 1.0);
  const RenormResult embedded = renormalize(FeynmanGraph(ids, pairs), bigger, geom, cfg);
  out.push_back(make_report("compatibility.embedding", embedded.value.real(), v0, 1e-12));

  // reversed edge order; the realized poles must map back exactly
  std::vector<int> order(g.num_edges());
  std::iota(order.rbegin(), order.rend(), 0);
  pairs.clear();
  for (int e : order) pairs.push_back({g.vertex_ids()[g.edge(e).a], g.vertex_ids()[g.edge(e).b]});
  const RenormResult permuted = renormalize(FeynmanGraph(g.vertex_ids(), pairs), phi, geom, cfg);
  CheckReport rep = make_report("compatibility.edge_order", permuted.value.real(), v0, 1e-12);
  std::vector<LinearForm> back;
  for (const auto& f : permuted.realized_poles) back.push_back(f.embed(g.num_edges(), order));
  std::vector<LinearForm> want = base.realized_poles;
  std::sort(back.begin(), back.end());
  std::sort(want.begin(), want.end());
  if (back != want) {
    rep.pass = false;
    rep.warning = "realized poles do not permute with the edges";
  }
  out.push_back(rep);
  return out;
}

}  // namespace germrenorm
