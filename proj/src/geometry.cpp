#include "germrenorm/geometry.hpp"

#include "germrenorm/errors.hpp"
#include "germrenorm/quadrature.hpp"
#include "germrenorm/special.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <cmath>

namespace germrenorm {

namespace {

const double kPi = boost::math::constants::pi<double>();

double integrate01(const std::function<double(double)>& f) {
  static thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
  return ts.integrate(f, 0.0, 1.0, 1e-15);
}

void require_tail_converges(const FlatGeometry& g) {
  if (g.mass() == 0.0 && g.dim() <= 2)
    throw PreconditionError("divergent Green tail: massless kernel in dimension " + std::to_string(g.dim()) +
                            " (needs d >= 3 or m > 0)");
}

// e^{-x} - sum_{k<=p} (-x)^k / k!, without cancellation for small x
double exp_remainder(double x, int p) {
  if (x > 1.0) {
    double s = 0, term = 1;
    for (int k = 0; k <= p; ++k) {
      s += term;
      term *= -x / (k + 1);
    }
    return std::exp(-x) - s;
  }
  double term = 1;
  for (int k = 1; k <= p + 1; ++k) term *= -x / k;
  double s = 0;
  for (int k = p + 1; k < p + 60; ++k) {
    s += term;
    term *= -x / (k + 1);
    if (std::abs(term) < 1e-18 * std::abs(s)) break;
  }
  return s;
}

}  // namespace

FlatGeometry::FlatGeometry(int d, double mass, std::optional<Eigen::MatrixXd> metric) : d_(d), m_(mass) {
  if (d < 1) throw InputError("dimension must be >= 1");
  if (!(mass >= 0)) throw InputError("mass must be nonnegative");
  g_ = metric ? *metric : Eigen::MatrixXd::Identity(d, d);
  if (g_.rows() != d || g_.cols() != d) throw InputError("metric must be d x d");
  if ((g_ - g_.transpose()).norm() > 1e-14 * g_.norm()) throw InputError("metric must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(g_);
  if (llt.info() != Eigen::Success) throw InputError("metric must be positive definite");
}

double FlatGeometry::dist2(const Point& x, const Point& y) const {
  Eigen::VectorXd v(d_);
  for (int i = 0; i < d_; ++i) v(i) = x[i] - y[i];
  return v.dot(g_ * v);
}

bool FlatGeometry::isotropic() const {
  return (g_ - g_(0, 0) * Eigen::MatrixXd::Identity(d_, d_)).norm() == 0.0;
}

double FlatGeometry::heat_coefficient(int k) const {
  double a = 1;
  for (int i = 1; i <= k; ++i) a *= -m_ * m_ / i;
  return a;
}

double FlatGeometry::heat_coefficient(int k, const Point&, const Point&) const { return heat_coefficient(k); }

double FlatGeometry::heat_kernel(double t, const Point& x, const Point& y) const {
  if (!(t > 0)) throw PreconditionError("heat kernel needs t > 0");
  return std::pow(4 * kPi * t, -0.5 * d_) * std::exp(-dist2(x, y) / (4 * t) - t * m_ * m_);
}

double flat_heat_kernel(const FlatGeometry& geom, double t, const Point& x, const Point& y) {
  return geom.heat_kernel(t, x, y);
}

cplx green_power_quadrature(const FlatGeometry& geom, cplx s, const Point& x, const Point& y) {
  const double d = geom.dim(), m2 = geom.mass() * geom.mass();
  if (geom.mass() == 0.0 && !(s.real() > 0 && s.real() < d / 2))
    throw PreconditionError("massless complex power needs 0 < Re(s) < d/2");
  if (!(s.real() > 0)) throw PreconditionError("complex power needs Re(s) > 0");
  const double r2 = geom.dist2(x, y);
  if (r2 == 0.0) throw PreconditionError("complex power kernel evaluated on the diagonal");
  const double lpre = -0.5 * d * std::log(4 * kPi);
  // head in t, tail in u = 1/t; logarithms keep t^{-d/2} e^{-r^2/4t} finite near 0
  auto head = [&](double t) { return lpre - (0.5 * d + 1) * std::log(t) - r2 / (4 * t) - t * m2; };
  auto tail = [&](double u) { return lpre + (0.5 * d - 1) * std::log(u) - r2 * u / 4 - m2 / u; };
  auto part = [&](auto&& logf, bool head_side, bool imag) {
    return integrate01([&](double v) {
      if (v <= 0) return 0.0;
      const cplx e = logf(v) + (head_side ? s : -s) * std::log(v);
      if (e.real() < -700) return 0.0;
      const cplx z = std::exp(e);
      return imag ? z.imag() : z.real();
    });
  };
  cplx val(part(head, true, false) + part(tail, false, false), part(head, true, true) + part(tail, false, true));
  return val * rgamma(s);
}

cplx green_power_closed_form(int d, cplx s, double r) {
  if (!(r > 0)) throw PreconditionError("closed form needs r > 0");
  if (!(s.real() > 0 && s.real() < 0.5 * d)) throw PreconditionError("closed form needs 0 < Re(s) < d/2");
  const double half = 0.5 * d;
  return std::exp(lgamma_complex(half - s) - s * std::log(4.0) - half * std::log(kPi) +
                  (2.0 * s - static_cast<double>(d)) * std::log(r)) *
         rgamma(s);
}

double green_function(const FlatGeometry& geom, double r) {
  const int d = geom.dim();
  const double m = geom.mass();
  if (!(r > 0)) throw PreconditionError("Green function evaluated on the diagonal");
  if (m == 0.0) {
    if (d <= 2) throw PreconditionError("massless Green function needs d >= 3");
    return std::tgamma(0.5 * d - 1) / (4 * std::pow(kPi, 0.5 * d)) * std::pow(r, 2.0 - d);
  }
  const double nu = 0.5 * d - 1;
  return std::pow(2 * kPi, -0.5 * d) * std::pow(m / r, nu) * boost::math::cyl_bessel_k(nu, m * r);
}

std::vector<double> green_tail_series(const FlatGeometry& geom, const Point& x, const Point& y, int D) {
  require_tail_converges(geom);
  const double d = geom.dim(), m2 = geom.mass() * geom.mass(), r2 = geom.dist2(x, y);
  const double pre = std::pow(4 * kPi, -0.5 * d);
  std::vector<double> mom(D + 1);
  double fact = 1;
  for (int j = 0; j <= D; ++j) {
    if (j > 0) fact *= j;
    mom[j] = integrate01([&](double u) {
      if (u <= 0) return 0.0;
      return pre * std::pow(u, 0.5 * d - 2) * std::pow(-std::log(u), j) / fact * std::exp(-r2 * u / 4 - m2 / u);
    });
  }
  auto rg = rgamma1_series(D);
  std::vector<double> out(D + 1, 0.0);
  for (int i = 0; i <= D; ++i)
    for (int j = 0; i + j <= D; ++j) out[i + j] += rg[i] * mom[j];
  return out;
}

double TauRule::evaluate(double r2g) const {
  double s = 0;
  for (int i = 0; i < size(); ++i) s += weight[i] * std::exp(-r2g / (4 * tau[i]));
  return s;
}

namespace {

// t = 1/v^2 on v in (0,1)
TauRule tail_only(const FlatGeometry& geom, int nodes) {
  require_tail_converges(geom);
  const double d = geom.dim(), m2 = geom.mass() * geom.mass();
  const double pre = std::pow(4 * kPi, -0.5 * d);
  TauRule r;
  Rule gl = gauss_legendre(nodes, 0.0, 1.0);
  for (int i = 0; i < gl.size(); ++i) {
    const double v = gl.x[i];
    const double w = 2 * pre * std::pow(v, d - 3) * std::exp(-m2 / (v * v)) * gl.w[i];
    if (w == 0.0) continue;
    r.tau.push_back(1 / (v * v));
    r.weight.push_back(w);
  }
  return r;
}

}  // namespace

TauRule tail_rule(const FlatGeometry& geom, int nodes, int heat_order) {
  if (heat_order < 0) throw PreconditionError("heat order must be nonnegative");
  const double d = geom.dim(), m2 = geom.mass() * geom.mass();
  TauRule r = tail_only(geom, nodes);
  if (geom.mass() > 0) {
    Rule gl = gauss_legendre(nodes, 0.0, 1.0);
    // t = v^2 on v in (0,1)
    for (int i = 0; i < gl.size(); ++i) {
      const double v = gl.x[i], t = v * v;
      const double w = 2 * v * std::pow(4 * kPi * t, -0.5 * d) * exp_remainder(t * m2, heat_order) * gl.w[i];
      r.tau.push_back(t);
      r.weight.push_back(w);
    }
  }
  return r;
}

TauRule full_green_rule(const FlatGeometry& geom, int nodes, double tau_min) {
  if (!(tau_min >= 0 && tau_min < 1)) throw PreconditionError("tau_min must lie in [0, 1)");
  TauRule r = tail_only(geom, nodes);
  const double d = geom.dim(), m2 = geom.mass() * geom.mass();
  EndpointRule ts = tanh_sinh_unit(2 * nodes + 1, 1e-12);
  for (int i = 0; i < ts.size(); ++i) {
    const double t = tau_min + (1 - tau_min) * ts.t[i];
    r.tau.push_back(t);
    r.weight.push_back(std::pow(4 * kPi * t, -0.5 * d) * std::exp(-t * m2) * (1 - tau_min) * ts.w[i]);
  }
  return r;
}

}  // namespace germrenorm
