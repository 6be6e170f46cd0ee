#include "germrenorm/amplitude.hpp"

#include "germrenorm/errors.hpp"
#include "germrenorm/special.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>

namespace germrenorm {

namespace {

const double kPi = boost::math::constants::pi<double>();

RawGerm embed_raw(const RawGerm& raw, int new_dim, const std::vector<int>& var_map) {
  RawGerm out(new_dim);
  for (const auto& t : raw.terms) {
    std::vector<Denominator> dens;
    for (const auto& dn : t.dens) dens.push_back({dn.form.embed(new_dim, var_map), dn.mult});
    out.add(t.num.embed(new_dim, var_map), std::move(dens));
  }
  return out;
}

void check_edge_cap(int E) {
  if (E > kMaxSubgraphEdges) throw ResourceCapError("graph has more than 16 edges");
  if (E > 9) throw ResourceCapError("sector enumeration is capped at 9 edges (9! charts)");
}

}  // namespace

int default_jet_order(const LabelledGraph& g, int d) {
  check_edge_cap(g.graph.num_edges());
  int best = 0;
  for_each_permutation(g.graph.num_edges(), [&](const std::vector<int>& perm) {
    int n = 0;
    for (const auto& [form, c0] : sector_exponent_forms(g, perm, d)) n += c0 <= 0;
    best = std::max(best, n);
  });
  return best + 2;
}

int default_heat_order(const FlatGeometry& geom) { return geom.mass() == 0.0 ? 0 : geom.dim() / 2; }

LabelledRaw labelled_amplitude_raw(const LabelledGraph& g, const TestFunction& phi, const FlatGeometry& geom,
                                   const QuadratureConfig& cfg, int order, const std::vector<ExtraEdge>& extras) {
  const int E = g.graph.num_edges(), d = geom.dim();
  check_edge_cap(E);
  if (order < 0) order = default_jet_order(g, d);
  const double scale = std::pow(4 * kPi, -0.5 * d * E);
  LabelledRaw out;
  out.raw = RawGerm(E);
  for_each_permutation(E, [&](const std::vector<int>& perm) {
    SectorChart chart = make_chart(g, perm, d);
    ChiEvaluator chi(chart, phi, geom, extras, cfg);
    CubeIntegralSpec spec;
    spec.dim = E;
    spec.lambda = chart.lambda;
    spec.offset = chart.c0;
    spec.order = order;
    spec.nodes = cfg.t_nodes;
    spec.cut = cfg.t_cut;
    spec.jobs = cfg.jobs;
    spec.chi = [&chi](const std::vector<double>& t, const std::shared_ptr<const BoxShape>& box) {
      return chi.jet(t, box);
    };
    CubeGrid grid(minimal_depths(spec.offset), spec.nodes, spec.chi, cfg.jobs, chi.cache_key(), cfg.t_cut);
    CubeResult r = ibp_cube_raw(spec, grid);
    out.quad_error += r.quad_error * scale;
    out.raw.append(r.raw);
    ++out.sectors;
  });
  // every numerator carries order D + (its multiplicity) <= D + E
  const Jet rg = reciprocal_gamma_jet(E, order + E) * scale;
  for (auto& t : out.raw.terms) t.num = t.num * rg.truncated(t.num.order());
  return out;
}

AmplitudeGermResult labelled_amplitude_germ(const LabelledGraph& g, const TestFunction& phi, const FlatGeometry& geom,
                                            const QuadratureConfig& cfg, int order,
                                            const std::vector<ExtraEdge>& extras) {
  if (order < 0) order = default_jet_order(g, geom.dim());
  LabelledRaw raw = labelled_amplitude_raw(g, phi, geom, cfg, order, extras);
  AmplitudeGermResult r;
  r.germ = decompose(raw.raw, order);
  r.realized_poles = realized_poles(r.germ);
  r.quad_error = raw.quad_error;
  r.sectors = raw.sectors;
  return r;
}

double labelled_amplitude_at(const LabelledGraph& g, const std::vector<double>& s, const TestFunction& phi,
                             const FlatGeometry& geom, const QuadratureConfig& cfg,
                             const std::vector<ExtraEdge>& extras) {
  const int E = g.graph.num_edges(), d = geom.dim();
  check_edge_cap(E);
  if (static_cast<int>(s.size()) != E) throw InputError("one exponent per edge required");
  double total = 0;
  for_each_permutation(E, [&](const std::vector<int>& perm) {
    SectorChart chart = make_chart(g, perm, d);
    ChiEvaluator chi(chart, phi, geom, extras, cfg);
    ChiFunction f = [&chi](const std::vector<double>& t, const std::shared_ptr<const BoxShape>& box) {
      return chi.jet(t, box);
    };
    CubeGrid grid(minimal_depths(chart.c0), cfg.t_nodes, f, cfg.jobs, chi.cache_key(), cfg.t_cut);
    std::vector<double> lam(E);
    for (int j = 0; j < E; ++j) lam[j] = chart.lambda[j].eval(s) - chart.lambda[j].eval(std::vector<double>(E, 1.0));
    total += ibp_cube_value(chart.c0, grid, lam);
  });
  double pre = std::pow(4 * kPi, -0.5 * d * E);
  for (double se : s) pre *= rgamma(se).real();
  return pre * total;
}

double direct_amplitude_oracle(const LabelledGraph& g, const std::vector<double>& s, const TestFunction& phi,
                               const FlatGeometry& geom, int nodes) {
  const int E = g.graph.num_edges(), n = g.graph.num_vertices(), d = geom.dim();
  if (static_cast<int>(s.size()) != E) throw InputError("one exponent per edge required");
  if (!geom.isotropic()) throw PreconditionError("direct oracle needs an isotropic metric");
  for (double se : s)
    if (se < 0.5 * d + 0.5) throw PreconditionError("direct oracle needs Re(s_e) >= d/2 + 1/2");
  // heat times below 1e-12 contribute below 1e-18 in the convergence region
  const EndpointRule rule = tanh_sinh_unit(nodes, 1e-12);
  const double c = geom.metric_scale();
  double pre = std::pow(4 * kPi, -0.5 * d * E);
  for (int e = 0; e < E; ++e) pre *= rgamma(s[e]).real() * geom.heat_coefficient(g.labels[e]);
  double total = 0;
  std::vector<int> idx(E, 0);
  const int N = rule.size();
  while (true) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    double w = 1;
    for (int e = 0; e < E; ++e) {
      const double l = rule.t[idx[e]];
      w *= rule.w[idx[e]] * std::pow(l, s[e] + g.labels[e] - 1 - 0.5 * d);
      const auto& ed = g.graph.edge(e);
      const double k = c / (2 * l);
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
  return pre * total;
}

AmplitudeGermResult assemble_full_amplitude(const FeynmanGraph& g, const TestFunction& phi, const FlatGeometry& geom,
                                            const AmplitudeConfig& cfg, const std::vector<ExtraEdge>& fixed) {
  const int E = g.num_edges(), d = geom.dim();
  check_edge_cap(E);
  if (E > 0 && geom.mass() == 0.0 && d <= 2)
    throw PreconditionError("divergent Green tail: massless kernel in dimension " + std::to_string(d) +
                            " (needs d >= 3 or m > 0)");
  const int p = cfg.heat_order >= 0 ? cfg.heat_order : default_heat_order(geom);
  const int D = cfg.order >= 0 ? cfg.order : default_jet_order({g, std::vector<int>(E, 0)}, d);
  std::shared_ptr<const TauRule> tail;
  if (E > 0) tail = std::make_shared<TauRule>(tail_rule(geom, cfg.quad.tau_nodes, p));

  LabelledRaw total;
  total.raw = RawGerm(E);
  for (uint32_t mask = 0; mask < (1u << E); ++mask) {
    std::vector<int> heads;
    std::vector<std::pair<int, int>> head_edges;
    std::vector<ExtraEdge> extras = fixed;
    for (int e = 0; e < E; ++e) {
      if (mask & (1u << e)) {
        heads.push_back(e);
        head_edges.push_back({g.vertex_ids()[g.edge(e).a], g.vertex_ids()[g.edge(e).b]});
      } else {
        extras.push_back({g.edge(e).a, g.edge(e).b, tail});
      }
    }
    const FeynmanGraph head(g.vertex_ids(), head_edges);
    const int E1 = static_cast<int>(heads.size());
    std::vector<int> labels(E1, 0);
    while (true) {
      LabelledRaw part = labelled_amplitude_raw({head, labels}, phi, geom, cfg.quad, D, extras);
      total.raw.append(embed_raw(part.raw, E, heads));
      total.quad_error += part.quad_error;
      total.sectors += part.sectors;
      int j = E1 - 1;
      while (j >= 0 && ++labels[j] > p) labels[j--] = 0;
      if (j < 0) break;
    }
  }
  AmplitudeGermResult r;
  r.germ = decompose(total.raw, D);
  r.realized_poles = realized_poles(r.germ);
  r.quad_error = total.quad_error;
  r.sectors = total.sectors;
  return r;
}

}  // namespace germrenorm
