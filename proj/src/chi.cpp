#include "germrenorm/chi.hpp"

#include "germrenorm/errors.hpp"
#include "germrenorm/quadrature.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace germrenorm {

namespace {

const double kPi = boost::math::constants::pi<double>();

using TMatrix = std::vector<std::vector<TJet>>;

TMatrix zeros(int n, const std::shared_ptr<const BoxShape>& box) {
  return TMatrix(n, std::vector<TJet>(n, TJet(box, 0.0)));
}

// E[prod_v X_v^{a_v}] for X ~ N(mean, cov), Stein recursion
class GaussianMoments {
 public:
  GaussianMoments(const std::vector<TJet>& mean, const TMatrix& cov) : mean_(mean), cov_(cov) {}

  TJet operator()(std::vector<int> a) {
    auto it = memo_.find(a);
    if (it != memo_.end()) return it->second;
    int i = 0;
    while (i < static_cast<int>(a.size()) && a[i] == 0) ++i;
    TJet r(mean_[0].shape_ptr(), 1.0);
    if (i < static_cast<int>(a.size())) {
      a[i] -= 1;
      r = mean_[i] * (*this)(a);
      for (int j = 0; j < static_cast<int>(a.size()); ++j) {
        if (a[j] == 0) continue;
        std::vector<int> b = a;
        b[j] -= 1;
        r.fma(cov_[i][j] * static_cast<double>(a[j]), (*this)(b));
      }
      a[i] += 1;
    }
    memo_.emplace(a, r);
    return r;
  }

 private:
  const std::vector<TJet>& mean_;
  const TMatrix& cov_;
  std::map<std::vector<int>, TJet> memo_;
};

}  // namespace

ChiEvaluator::ChiEvaluator(SectorChart chart, TestFunction phi, FlatGeometry geom, std::vector<ExtraEdge> extras,
                           QuadratureConfig cfg)
    : chart_(std::move(chart)), phi_(std::move(phi)), geom_(std::move(geom)), extras_(std::move(extras)),
      cfg_(cfg) {
  if (phi_.points() != chart_.num_vertices())
    throw InputError("test function has " + std::to_string(phi_.points()) + " points but the graph has " +
                     std::to_string(chart_.num_vertices()) + " vertices");
  if (phi_.dim() != geom_.dim()) throw InputError("test function and geometry dimensions differ");
  prefactor_ = std::pow(2.0, chart_.num_edges());
  for (int e = 0; e < chart_.num_edges(); ++e) prefactor_ *= geom_.heat_coefficient(chart_.graph.labels[e]);
}

bool ChiEvaluator::closed_form_available() const { return geom_.isotropic() && !cfg_.force_quadrature; }

bool ChiEvaluator::uses_monte_carlo() const {
  if (closed_form_available()) return false;
  int roots = 0;
  for (int v = 0; v < chart_.num_vertices(); ++v) roots += chart_.is_root(v);
  return geom_.dim() * (roots + static_cast<int>(chart_.tree_edges.size())) > cfg_.max_tensor_axes;
}

TJet ChiEvaluator::jet(const std::vector<double>& t, const std::shared_ptr<const BoxShape>& box) const {
  return closed_form_available() ? closed_form(t, box) : quadrature(t, box);
}

double ChiEvaluator::value(const std::vector<double>& t) const {
  std::vector<int> zero(chart_.num_edges(), 0);
  return jet(t, BoxShape::get(zero)).value();
}

TJet ChiEvaluator::closed_form(const std::vector<double>& t, const std::shared_ptr<const BoxShape>& box) const {
  const int n = chart_.num_vertices(), E = chart_.num_edges(), d = geom_.dim();
  const double c = geom_.metric_scale();
  const auto& g = chart_.graph.graph;

  std::vector<TJet> T, SP(E + 1, TJet(box, 1.0));
  for (int s = 0; s < E; ++s) T.push_back(TJet::variable(box, s, t[s]));
  for (int s = E - 1; s >= 0; --s) SP[s] = T[s] * SP[s + 1];
  auto partial = [&](int a, int b) {
    TJet p(box, 1.0);
    for (int j = a; j < b; ++j) p = p * T[j];
    return p;
  };
  auto child_of = [&](int f) { return chart_.parent_edge[g.edge(f).a] == f ? g.edge(f).a : g.edge(f).b; };

  // position map x_v = sum_y P[v][y] y, slot y = vertex: root position or parent-edge increment
  TMatrix P = zeros(n, box);
  std::vector<std::vector<bool>> nz(n, std::vector<bool>(n, false));
  for (int v = 0; v < n; ++v) {
    P[v][chart_.root_of[v]] = TJet(box, 1.0);
    nz[v][chart_.root_of[v]] = true;
    for (int f : chart_.path_to(v)) {
      P[v][child_of(f)] = SP[chart_.slot_of[f]];
      nz[v][child_of(f)] = true;
    }
  }

  TMatrix K0 = zeros(n, box);
  for (int f : chart_.tree_edges) K0[child_of(f)][child_of(f)] += 0.5 * c;
  for (int e = 0; e < E; ++e) {
    if (chart_.in_tree[e]) continue;
    std::vector<TJet> q(n, TJet(box, 0.0));
    const int se = chart_.slot_of[e];
    for (int f : chart_.path_to(g.edge(e).a)) q[child_of(f)] += partial(chart_.slot_of[f], se);
    for (int f : chart_.path_to(g.edge(e).b)) q[child_of(f)] -= partial(chart_.slot_of[f], se);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) K0[i][j].fma(q[i] * (0.5 * c), q[j]);
  }
  std::vector<TMatrix> QQ;
  for (const auto& x : extras_) {
    std::vector<TJet> q(n, TJet(box, 0.0));
    for (int y = 0; y < n; ++y) q[y] = P[x.a][y] - P[x.b][y];
    TMatrix m = zeros(n, box);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m[i][j] = q[i] * q[j];
    QQ.push_back(std::move(m));
  }

  long tuples = 1;
  for (const auto& x : extras_) tuples *= x.rule->size();
  const double gauss_norm = std::pow(2 * kPi, 0.5 * n * d);

  TJet total(box, 0.0);
  for (const auto& term : phi_.terms()) {
    std::vector<double> W(n);
    double cst = 0;
    for (int v = 0; v < n; ++v) {
      W[v] = 1.0 / (term.width[v] * term.width[v]);
      for (int mu = 0; mu < d; ++mu) cst += 0.5 * W[v] * term.center[v * d + mu] * term.center[v * d + mu];
    }
    TMatrix KT = K0;
    for (int v = 0; v < n; ++v)
      for (int i = 0; i < n; ++i) {
        if (!nz[v][i]) continue;
        const TJet wp = P[v][i] * W[v];
        for (int j = 0; j < n; ++j)
          if (nz[v][j]) KT[i][j].fma(wp, P[v][j]);
      }
    std::vector<std::vector<TJet>> B(d, std::vector<TJet>(n, TJet(box, 0.0)));
    for (int mu = 0; mu < d; ++mu)
      for (int y = 0; y < n; ++y)
        for (int v = 0; v < n; ++v)
          if (nz[v][y]) B[mu][y] += P[v][y] * (W[v] * term.center[v * d + mu]);

    bool constant_poly = term.poly.size() == 1 && std::all_of(term.poly.begin()->first.begin(),
                                                                 term.poly.begin()->first.end(),
                                                                 [](int a) { return a == 0; });

    for (long tu = 0; tu < tuples; ++tu) {
      TMatrix K = KT;
      double weight = 1;
      long r = tu;
      for (size_t x = 0; x < extras_.size(); ++x) {
        const int idx = static_cast<int>(r % extras_[x].rule->size());
        r /= extras_[x].rule->size();
        weight *= extras_[x].rule->weight[idx];
        const double f = c / (2 * extras_[x].rule->tau[idx]);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) K[i][j].fma(QQ[x][i][j], TJet(box, f));
      }
      if (weight == 0.0) continue;
      // Cholesky
      TMatrix L = zeros(n, box);
      std::vector<TJet> inv(n, TJet(box, 0.0));
      TJet expo(box, -cst);
      for (int j = 0; j < n; ++j) {
        TJet piv = K[j][j];
        for (int k = 0; k < j; ++k) piv.fma(L[j][k] * -1.0, L[j][k]);
        if (!(piv.value() > 0)) throw NumericalError("chi quadratic form is not positive definite");
        expo -= piv.log() * (0.5 * d);
        L[j][j] = piv.sqrt();
        inv[j] = L[j][j].reciprocal();
        for (int i = j + 1; i < n; ++i) {
          TJet s = K[i][j];
          for (int k = 0; k < j; ++k) s.fma(L[i][k] * -1.0, L[j][k]);
          L[i][j] = s * inv[j];
        }
      }
      auto forward = [&](const std::vector<TJet>& b) {
        std::vector<TJet> z(n, TJet(box, 0.0));
        for (int i = 0; i < n; ++i) {
          TJet s = b[i];
          for (int k = 0; k < i; ++k) s.fma(L[i][k] * -1.0, z[k]);
          z[i] = s * inv[i];
        }
        return z;
      };
      auto backward = [&](const std::vector<TJet>& z) {
        std::vector<TJet> y(n, TJet(box, 0.0));
        for (int i = n - 1; i >= 0; --i) {
          TJet s = z[i];
          for (int k = i + 1; k < n; ++k) s.fma(L[k][i] * -1.0, y[k]);
          y[i] = s * inv[i];
        }
        return y;
      };
      std::vector<std::vector<TJet>> zs;
      for (int mu = 0; mu < d; ++mu) {
        zs.push_back(forward(B[mu]));
        for (const auto& zi : zs.back()) expo.fma(zi * 0.5, zi);
      }
      TJet val = expo.exp() * (weight * gauss_norm);
      if (constant_poly) {
        total.fma(val, TJet(box, term.poly.begin()->second));
        continue;
      }
      // moments of x = P y
      std::vector<std::vector<TJet>> mean(d, std::vector<TJet>(n, TJet(box, 0.0)));
      for (int mu = 0; mu < d; ++mu) {
        auto y = backward(zs[mu]);
        for (int v = 0; v < n; ++v)
          for (int k = 0; k < n; ++k)
            if (nz[v][k]) mean[mu][v].fma(P[v][k], y[k]);
      }
      std::vector<std::vector<TJet>> M;  // M[v] = L^{-1} P[v]^T
      for (int v = 0; v < n; ++v) M.push_back(forward(P[v]));
      TMatrix cov = zeros(n, box);
      for (int v = 0; v < n; ++v)
        for (int w = 0; w <= v; ++w) {
          for (int k = 0; k < n; ++k) cov[v][w].fma(M[v][k], M[w][k]);
          cov[w][v] = cov[v][w];
        }
      std::vector<GaussianMoments> gm;
      for (int mu = 0; mu < d; ++mu) gm.emplace_back(mean[mu], cov);
      TJet pm(box, 0.0);
      for (const auto& [a, coef] : term.poly) {
        TJet prod(box, coef);
        for (int mu = 0; mu < d; ++mu) {
          std::vector<int> am(n);
          bool any = false;
          for (int v = 0; v < n; ++v) {
            am[v] = a[v * d + mu];
            any |= am[v] > 0;
          }
          if (any) prod = prod * gm[mu](am);
        }
        pm += prod;
      }
      total.fma(val, pm);
    }
  }
  return total * prefactor_;
}

TJet ChiEvaluator::quadrature(const std::vector<double>& t, const std::shared_ptr<const BoxShape>& box) const {
  const int n = chart_.num_vertices(), E = chart_.num_edges(), d = geom_.dim();
  const auto& g = chart_.graph.graph;
  const Eigen::MatrixXd gm = geom_.metric(Point(d, 0.0));
  const Eigen::MatrixXd Lg = Eigen::LLT<Eigen::MatrixXd>(gm).matrixL();
  const Eigen::MatrixXd hmap = 2.0 * Lg.transpose().inverse();  // h = hmap z
  const double hjac = std::pow(2.0, d) / Lg.determinant();

  std::vector<TJet> T, SP(E + 1, TJet(box, 1.0));
  for (int s = 0; s < E; ++s) T.push_back(TJet::variable(box, s, t[s]));
  for (int s = E - 1; s >= 0; --s) SP[s] = T[s] * SP[s + 1];
  auto partial = [&](int a, int b) {
    TJet p(box, 1.0);
    for (int j = a; j < b; ++j) p = p * T[j];
    return p;
  };

  std::vector<int> roots;
  for (int v = 0; v < n; ++v)
    if (chart_.is_root(v)) roots.push_back(v);
  const auto& tree = chart_.tree_edges;
  std::vector<double> lo(roots.size() * d), hi(roots.size() * d);
  for (size_t r = 0; r < roots.size(); ++r)
    for (int mu = 0; mu < d; ++mu) {
      double a = 1e300, b = -1e300;
      for (const auto& term : phi_.terms()) {
        const double cval = term.center[roots[r] * d + mu], w = term.width[roots[r]];
        a = std::min(a, cval - 8 * w);
        b = std::max(b, cval + 8 * w);
      }
      lo[r * d + mu] = a;
      hi[r * d + mu] = b;
    }
  const int xaxes = static_cast<int>(roots.size()) * d, haxes = static_cast<int>(tree.size()) * d;
  const bool mc = xaxes + haxes > cfg_.max_tensor_axes;

  // BFS order for positions
  std::vector<int> order;
  for (int r : roots) order.push_back(r);
  for (size_t q = 0; q < order.size(); ++q)
    for (int v = 0; v < n; ++v)
      if (chart_.parent[v] == order[q]) order.push_back(v);

  auto integrand = [&](const std::vector<double>& xs, const std::vector<double>& zs) {
    std::map<int, Eigen::VectorXd> h;
    for (size_t k = 0; k < tree.size(); ++k) {
      Eigen::VectorXd z(d);
      for (int mu = 0; mu < d; ++mu) z(mu) = zs[k * d + mu];
      h[tree[k]] = hmap * z;
    }
    std::vector<std::vector<TJet>> X(n, std::vector<TJet>(d, TJet(box, 0.0)));
    for (size_t r = 0; r < roots.size(); ++r)
      for (int mu = 0; mu < d; ++mu) X[roots[r]][mu] = TJet(box, xs[r * d + mu]);
    for (int v : order) {
      if (chart_.is_root(v)) continue;
      const int f = chart_.parent_edge[v];
      for (int mu = 0; mu < d; ++mu) X[v][mu] = X[chart_.parent[v]][mu] + SP[chart_.slot_of[f]] * h[f](mu);
    }
    auto quad = [&](const std::vector<TJet>& q) {
      TJet s(box, 0.0);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          if (gm(a, b) != 0.0) s.fma(q[a] * gm(a, b), q[b]);
      return s;
    };
    TJet expo(box, 0.0);
    for (int e = 0; e < E; ++e) {
      if (chart_.in_tree[e]) continue;
      std::vector<TJet> q(d, TJet(box, 0.0));
      const int se = chart_.slot_of[e];
      for (int f : chart_.path_to(g.edge(e).a))
        for (int mu = 0; mu < d; ++mu) q[mu] += partial(chart_.slot_of[f], se) * h[f](mu);
      for (int f : chart_.path_to(g.edge(e).b))
        for (int mu = 0; mu < d; ++mu) q[mu] -= partial(chart_.slot_of[f], se) * h[f](mu);
      expo -= quad(q) * 0.25;
    }
    TJet val = expo.exp();
    for (const auto& x : extras_) {
      std::vector<TJet> q(d, TJet(box, 0.0));
      for (int mu = 0; mu < d; ++mu) q[mu] = X[x.a][mu] - X[x.b][mu];
      const TJet r2 = quad(q);
      TJet s(box, 0.0);
      for (int i = 0; i < x.rule->size(); ++i) s += (r2 * (-0.25 / x.rule->tau[i])).exp() * x.rule->weight[i];
      val = val * s;
    }
    TJet ph(box, 0.0);
    for (const auto& term : phi_.terms()) {
      TJet ex(box, 0.0);
      for (int v = 0; v < n; ++v)
        for (int mu = 0; mu < d; ++mu) {
          TJet u = X[v][mu] - TJet(box, term.center[v * d + mu]);
          ex.fma(u * (-0.5 / (term.width[v] * term.width[v])), u);
        }
      TJet poly(box, 0.0);
      for (const auto& [a, coef] : term.poly) {
        TJet m(box, coef);
        for (int i = 0; i < n * d; ++i)
          for (int k = 0; k < a[i]; ++k) m = m * X[i / d][i % d];
        poly += m;
      }
      ph.fma(poly, ex.exp());
    }
    return val * ph;
  };

  TJet acc(box, 0.0);
  if (!mc) {
    const Rule gh = gauss_hermite(cfg_.gh_order), gl = gauss_legendre(cfg_.x_order);
    const int A = xaxes + haxes;
    std::vector<int> radix(A);
    for (int a = 0; a < A; ++a) radix[a] = a < xaxes ? gl.size() : gh.size();
    std::vector<int> idx(A, 0);
    std::vector<double> xs(xaxes), zs(haxes);
    while (true) {
      double w = 1;
      for (int a = 0; a < xaxes; ++a) {
        const double half = 0.5 * (hi[a] - lo[a]);
        xs[a] = lo[a] + half * (gl.x[idx[a]] + 1);
        w *= half * gl.w[idx[a]];
      }
      for (int a = 0; a < haxes; ++a) {
        zs[a] = gh.x[idx[xaxes + a]];
        w *= gh.w[idx[xaxes + a]];
      }
      acc.fma(integrand(xs, zs), TJet(box, w));
      int a = 0;
      while (a < A && ++idx[a] == radix[a]) idx[a++] = 0;
      if (a == A) break;
    }
  } else {
    std::mt19937_64 rng(cfg_.seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double vol = 1;
    for (int a = 0; a < xaxes; ++a) vol *= hi[a] - lo[a];
    const double w = vol * std::pow(std::sqrt(kPi), haxes) / cfg_.mc_samples;
    std::vector<double> xs(xaxes), zs(haxes);
    for (long s = 0; s < cfg_.mc_samples; ++s) {
      for (int a = 0; a < xaxes; ++a) xs[a] = lo[a] + (hi[a] - lo[a]) * uni(rng);
      for (int a = 0; a < haxes; ++a) zs[a] = normal(rng);
      acc.fma(integrand(xs, zs), TJet(box, w));
    }
  }
  return acc * (prefactor_ * std::pow(hjac, static_cast<double>(tree.size())));
}

std::string ChiEvaluator::cache_key() const {
  std::ostringstream os;
  os.precision(17);
  const auto& g = chart_.graph.graph;
  os << "chi1;d=" << geom_.dim() << ";m=" << geom_.mass() << ";c=" << geom_.metric_scale() << ";v=";
  for (int id : g.vertex_ids()) os << id << ',';
  os << ";e=";
  for (int e = 0; e < g.num_edges(); ++e) os << g.edge(e).a << '-' << g.edge(e).b << ':' << chart_.graph.labels[e] << ',';
  os << ";perm=";
  for (int p : chart_.perm) os << p << ',';
  os << ";phi=";
  for (const auto& t : phi_.terms()) {
    for (double c : t.center) os << c << ',';
    os << '/';
    for (double w : t.width) os << w << ',';
    os << '/';
    for (const auto& [m, c] : t.poly) {
      for (int a : m) os << a << '.';
      os << '=' << c << ',';
    }
    os << '|';
  }
  os << ";x=";
  for (const auto& x : extras_) {
    os << x.a << '-' << x.b << ':';
    for (int i = 0; i < x.rule->size(); ++i) os << x.rule->tau[i] << '@' << x.rule->weight[i] << ',';
  }
  os << ";q=" << closed_form_available() << ',' << cfg_.gh_order << ',' << cfg_.x_order << ',' << cfg_.mc_samples
     << ',' << cfg_.seed;
  return os.str();
}

}  // namespace germrenorm
