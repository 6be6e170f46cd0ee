#include "germrenorm/quadrature.hpp"

#include "germrenorm/errors.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace germrenorm {

namespace {

Rule golub_welsch(const Eigen::VectorXd& offdiag, double mu0) {
  const int n = static_cast<int>(offdiag.size()) + 1;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = offdiag(i);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule r;
  for (int i = 0; i < n; ++i) {
    r.x.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    r.w.push_back(mu0 * v * v);
  }
  return r;
}

}  // namespace

Rule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw PreconditionError("quadrature needs at least one node");
  Rule r;
  if (n == 1) {
    r.x = {0.0};
    r.w = {2.0};
  } else {
    Eigen::VectorXd off(n - 1);
    for (int k = 1; k < n; ++k) off(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
    r = golub_welsch(off, 2.0);
    // symmetrize to kill eigen-solver asymmetry
    for (int i = 0; i < n / 2; ++i) {
      const double x = 0.5 * (r.x[n - 1 - i] - r.x[i]);
      const double w = 0.5 * (r.w[n - 1 - i] + r.w[i]);
      r.x[i] = -x;
      r.x[n - 1 - i] = x;
      r.w[i] = r.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
  }
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    r.x[i] = mid + half * r.x[i];
    r.w[i] *= half;
  }
  return r;
}

Rule gauss_hermite(int n) {
  if (n < 1) throw PreconditionError("quadrature needs at least one node");
  const double sqrtpi = std::sqrt(boost::math::constants::pi<double>());
  if (n == 1) return Rule{{0.0}, {sqrtpi}};
  Eigen::VectorXd off(n - 1);
  for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(k / 2.0);
  Rule r = golub_welsch(off, sqrtpi);
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (r.x[n - 1 - i] - r.x[i]);
    const double w = 0.5 * (r.w[n - 1 - i] + r.w[i]);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

EndpointRule tanh_sinh_unit(int nodes, double cut) {
  if (nodes < 5) throw PreconditionError("tanh-sinh rule needs at least 5 nodes");
  int M = (nodes - 1) / 2;
  if (M % 2 == 1) ++M;
  const double halfpi = 0.5 * boost::math::constants::pi<double>();
  // endpoint distance exp(-pi sinh u) reaches `cut` at u_max
  const double umax = std::asinh(-std::log(cut) / (2 * halfpi));
  const double h = umax / M;
  EndpointRule r;
  for (int k = -M; k <= M; ++k) {
    const double u = k * h;
    const double s = halfpi * std::sinh(u);
    const double ch = std::cosh(s);
    // t = (1 + tanh s)/2 = 1 / (1 + exp(-2s)), evaluated without cancellation
    const double t = 1.0 / (1.0 + std::exp(-2.0 * s));
    const double w = h * halfpi * std::cosh(u) / (2.0 * ch * ch);
    // nodes that round to t = 1 carry weights below machine precision
    if (t < cut || t >= 1.0 || !(w > 0)) continue;
    r.t.push_back(t);
    r.w.push_back(w);
    r.w_coarse.push_back(k % 2 == 0 ? 2.0 * w : 0.0);
  }
  return r;
}

}  // namespace germrenorm
