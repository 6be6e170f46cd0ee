#include "germrenorm/special.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <cmath>

namespace germrenorm {

namespace {

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

cplx lgamma_complex(cplx z) {
  const double pi = boost::math::constants::pi<double>();
  if (z.real() < 0.5) return std::log(pi / std::sin(pi * z)) - lgamma_complex(1.0 - z);
  z -= 1.0;
  cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  cplx t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx rgamma(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) return 0.0;
  if (z.imag() == 0.0 && z.real() < 170.0) return 1.0 / std::tgamma(z.real());
  const double pi = boost::math::constants::pi<double>();
  if (z.real() < 0.5) return std::sin(pi * z) / pi / rgamma(1.0 - z);  // reflection
  return std::exp(-lgamma_complex(z));
}

std::vector<double> rgamma1_series(int order) {
  // log(1/Gamma(1+x)) = gamma x - sum_{k>=2} (-1)^k zeta(k) x^k / k
  std::vector<double> lg(order + 1, 0.0);
  if (order >= 1) lg[1] = boost::math::constants::euler<double>();
  for (int k = 2; k <= order; ++k)
    lg[k] = -((k % 2 == 0) ? 1.0 : -1.0) * boost::math::zeta(static_cast<double>(k)) / k;
  // exp of a series: f' = g' f
  std::vector<double> f(order + 1, 0.0);
  f[0] = 1.0;
  for (int n = 1; n <= order; ++n) {
    double s = 0;
    for (int k = 1; k <= n; ++k) s += k * lg[k] * f[n - k];
    f[n] = s / n;
  }
  return f;
}

Jet reciprocal_gamma_jet(int p, int order) {
  auto ser = rgamma1_series(order);
  std::vector<cplx> c(ser.begin(), ser.end());
  Jet j = Jet::constant(p, order, 1.0);
  for (int i = 0; i < p; ++i) j = j.mul_univariate(i, c);
  return j;
}

std::vector<double> exp_series(double a, int order) {
  std::vector<double> c(order + 1);
  c[0] = 1;
  for (int n = 1; n <= order; ++n) c[n] = c[n - 1] * a / n;
  return c;
}

}  // namespace germrenorm
