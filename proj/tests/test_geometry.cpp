#include "doctest.h"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <random>

#include "germrenorm/errors.hpp"
#include "germrenorm/geometry.hpp"
#include "germrenorm/renorm.hpp"
#include "germrenorm/test_function.hpp"

using namespace germrenorm;
using doctest::Approx;

namespace {
const double kPi = boost::math::constants::pi<double>();

TestFunction gaussian(int d, int n, std::vector<double> center, double w, Polynomial poly = {}) {
  if (poly.empty()) poly[Monomial(d * n, 0)] = 1.0;
  return TestFunction(d, n, {GaussianTerm{poly, std::move(center), std::vector<double>(n, w)}});
}
}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("heat kernel examples") {
    CHECK(flat_heat_kernel(FlatGeometry(1), 1 / (4 * kPi), {0.3}, {0.3}) == Approx(1.0).epsilon(1e-15));
    CHECK(flat_heat_kernel(FlatGeometry(2), 1.0, {0, 0}, {2, 0}) ==
          Approx(std::exp(-1.0) / (4 * kPi)).epsilon(1e-15));
    CHECK(flat_heat_kernel(FlatGeometry(4, 1.0), 1.0, {0, 0, 0, 0}, {0, 0, 0, 0}) ==
          Approx(std::exp(-1.0) / (16 * kPi * kPi)).epsilon(1e-15));
    CHECK_THROWS_AS(flat_heat_kernel(FlatGeometry(2), 0.0, {0, 0}, {0, 0}), PreconditionError);
  }
  TEST_CASE("backend contract for flat space") {
    Eigen::MatrixXd g(2, 2);
    g << 2.0, 0.5, 0.5, 1.0;
    const FlatGeometry geom(2, 0.3, g);
    std::mt19937 rng(3);
    std::normal_distribution<double> n01;
    for (int i = 0; i < 20; ++i) {
      Point x{n01(rng), n01(rng)}, y{n01(rng), n01(rng)};
      CHECK(geom.dist2(x, y) == Approx(geom.dist2(y, x)).epsilon(1e-15));
      Eigen::Vector2d v(x[0] - y[0], x[1] - y[1]);
      CHECK(geom.dist2(x, y) == Approx(v.dot(g * v)).epsilon(1e-14));
    }
    CHECK(geom.heat_coefficient(0, {0, 0}, {1, 1}) == 1.0);
    CHECK(geom.heat_coefficient(2) == Approx(0.3 * 0.3 * 0.3 * 0.3 / 2));
    CHECK(geom.cutoff(5.0) == 1.0);
    CHECK_FALSE(geom.has_zero_mode());
    CHECK_FALSE(geom.isotropic());
    CHECK(FlatGeometry(3).isotropic());
  }
  TEST_CASE("invalid geometries") {
    CHECK_THROWS_AS(FlatGeometry(0), InputError);
    CHECK_THROWS_AS(FlatGeometry(2, -1.0), InputError);
    Eigen::MatrixXd bad(2, 2);
    bad << 1, 2, 2, 1;
    CHECK_THROWS_AS(FlatGeometry(2, 0.0, bad), InputError);
  }
  TEST_CASE("Green power quadrature examples") {
    const FlatGeometry d4(4), d3(3);
    CHECK(green_power_quadrature(d4, 1.0, {0, 0, 0, 0}, {1, 0, 0, 0}).real() ==
          Approx(1 / (4 * kPi * kPi)).epsilon(1e-10));
    CHECK(green_power_quadrature(d3, 1.0, {0, 0, 0}, {0, 2, 0}).real() == Approx(1 / (8 * kPi)).epsilon(1e-10));
    CHECK(green_power_quadrature(d4, 1.0, {0, 0, 0, 0}, {0, 0, 2, 0}).real() ==
          Approx(1 / (16 * kPi * kPi)).epsilon(1e-10));
    CHECK_THROWS_AS(green_power_quadrature(d4, 2.5, {0, 0, 0, 0}, {1, 0, 0, 0}), PreconditionError);
    CHECK_THROWS_AS(green_power_quadrature(d4, 1.0, {0, 0, 0, 0}, {0, 0, 0, 0}), PreconditionError);
  }
  TEST_CASE("closed form agrees with quadrature off the real axis") {
    CHECK(green_power_closed_form(4, 1.0, 1.0).real() == Approx(1 / (4 * kPi * kPi)).epsilon(1e-14));
    CHECK(green_power_closed_form(2, 0.5, 1.0).real() == Approx(1 / (2 * kPi)).epsilon(1e-14));
    const double r0 = std::abs(green_power_closed_form(4, 1.0, 1.0)), r1 = std::abs(green_power_closed_form(4, 1.0, 3.0));
    CHECK(r1 / r0 == Approx(1.0 / 9).epsilon(1e-14));
    const FlatGeometry d4(4);
    for (cplx s : {cplx(0.7, 0.4), cplx(1.3, -0.9), cplx(1.9, 0.1)}) {
      const cplx q = green_power_quadrature(d4, s, {0, 0, 0, 0}, {1.2, 0, 0, 0});
      const cplx c = green_power_closed_form(4, s, 1.2);
      CHECK(std::abs(q - c) <= 1e-10 * std::abs(c));
    }
  }
  TEST_CASE("massive Green function") {
    const FlatGeometry g(3, 1.5);
    for (double r : {0.3, 1.0, 2.5})
      CHECK(green_function(g, r) == Approx(std::exp(-1.5 * r) / (4 * kPi * r)).epsilon(1e-13));
    const FlatGeometry g4(4, 0.7);
    CHECK(green_function(g4, 1.1) ==
          Approx(green_power_quadrature(g4, 1.0, {0, 0, 0, 0}, {1.1, 0, 0, 0}).real()).epsilon(1e-10));
  }
  TEST_CASE("Green tail") {
    const FlatGeometry d4(4);
    const Point o{0, 0, 0, 0};
    CHECK(green_tail_series(d4, o, o, 0)[0] == Approx(1 / (16 * kPi * kPi)).epsilon(1e-12));
    // d = 3 massless: erf(r/2) / (4 pi r), decaying like 1/r
    for (double r : {1.0, 40.0})
      CHECK(green_tail_series(FlatGeometry(3), {0, 0, 0}, {r, 0, 0}, 0)[0] ==
            Approx(std::erf(r / 2) / (4 * kPi * r)).epsilon(1e-12));
    for (double r : {0.1, 1.0, 3.0}) CHECK(green_tail_series(d4, o, {r, 0, 0, 0}, 0)[0] <= 1 / (16 * kPi * kPi));
    // sigma-derivative: int_1^inf t^{-2} ln t dt = 1, and 1/Gamma(1+s) = 1 + gamma s + ...
    const auto jet = green_tail_series(d4, o, o, 1);
    CHECK(jet[1] == Approx((1 + 0.5772156649015329) / (16 * kPi * kPi)).epsilon(1e-12));
    CHECK_THROWS_AS(green_tail_series(FlatGeometry(2), {0, 0}, {1, 0}, 0), PreconditionError);
  }
  TEST_CASE("tau rules") {
    const FlatGeometry d4(4);
    CHECK(tail_rule(d4, 30, 0).evaluate(0.0) == Approx(1 / (16 * kPi * kPi)).epsilon(1e-12));
    CHECK(tail_rule(d4, 30, 0).evaluate(2.0) == Approx(green_tail_series(d4, {0, 0, 0, 0}, {std::sqrt(2.0), 0, 0, 0}, 0)[0]).epsilon(1e-10));
    const FlatGeometry m4(4, 1.0);
    const double r = 0.8;
    CHECK(full_green_rule(m4, 40).evaluate(r * r) == Approx(green_function(m4, r)).epsilon(1e-8));
    // dropping short heat times leaves G unchanged at distances well above the cutoff
    const double cut = off_diagonal_tau_min(2.0);
    CHECK(full_green_rule(d4, 40, cut).evaluate(4.0) == Approx(green_function(d4, 2.0)).epsilon(1e-10));
    CHECK(full_green_rule(d4, 40, cut).evaluate(0.0) == Approx(1 / (16 * kPi * kPi * cut)).epsilon(1e-8));
    CHECK_THROWS_AS(full_green_rule(d4, 40, 1.5), PreconditionError);
    // tail plus the m^2 heat remainder over t < 1 equals the full Green function minus the two head terms
    const double p0 = 1 / (4 * kPi * kPi * r * r);  // int_0^1 of the massless head, up to e^{-r^2/4} corrections
    const double head0 = p0 * std::exp(-r * r / 4);
    const auto heat1 = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double t) { return t <= 0 ? 0.0 : std::pow(4 * kPi * t, -2.0) * std::exp(-r * r / (4 * t)) * t; }, 0.0, 1.0);
    CHECK(tail_rule(m4, 40, 1).evaluate(r * r) + head0 - heat1 == Approx(green_function(m4, r)).epsilon(1e-8));
    CHECK_THROWS_AS(tail_rule(FlatGeometry(2), 10, 0), PreconditionError);
  }
}

TEST_SUITE("test_function") {
  TEST_CASE("evaluation examples") {
    const auto g = gaussian(2, 1, {0, 0}, 1.0);
    CHECK(g({0, 0}) == 1.0);
    CHECK(g.eval_deriv({2, 0}, {0, 0}) == Approx(-1.0).epsilon(1e-15));
    Polynomial x1;
    x1[{1, 0}] = 1.0;
    CHECK(gaussian(2, 1, {0, 0}, 1.0, x1)({0, 0}) == 0.0);
    CHECK_THROWS_AS(g.eval_deriv({13, 0}, {0, 0}), ResourceCapError);
    CHECK_NOTHROW(g.eval_deriv({8, 0}, {0, 0}));
  }
  TEST_CASE("derivatives agree with finite differences") {
    Polynomial p;
    p[{1, 0, 0, 2}] = 0.7;
    p[{0, 0, 0, 0}] = -1.2;
    const TestFunction f(2, 2, {GaussianTerm{p, {0.1, -0.3, 0.5, 0.2}, {0.8, 1.3}}});
    const std::vector<double> x{0.4, 0.1, -0.2, 0.6};
    const double h = 1e-4;
    for (int i = 0; i < 4; ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      Monomial b(4, 0);
      b[i] = 1;
      CHECK(f.eval_deriv(b, x) == Approx((f(xp) - f(xm)) / (2 * h)).epsilon(1e-7));
      b[i] = 2;
      CHECK(f.eval_deriv(b, x) == Approx((f(xp) - 2 * f(x) + f(xm)) / (h * h)).epsilon(1e-5));
    }
  }
  TEST_CASE("structural operations") {
    const auto u = gaussian(1, 1, {0.5}, 0.6), v = gaussian(1, 1, {-1.0}, 0.9);
    const auto uv = u.tensor(v);
    CHECK(uv.points() == 2);
    CHECK(uv({0.2, 0.1}) == Approx(u({0.2}) * v({0.1})).epsilon(1e-15));
    CHECK(uv.relabelled({1, 0})({0.1, 0.2}) == Approx(uv({0.2, 0.1})).epsilon(1e-15));
    CHECK(u.translated({0.3})({0.8}) == Approx(u({0.5})).epsilon(1e-15));
    CHECK((u + u.scaled(2.0))({0.1}) == Approx(3 * u({0.1})).epsilon(1e-15));
    CHECK_THROWS_AS(u + uv, InputError);
    CHECK_THROWS_AS(TestFunction(1, 1, {GaussianTerm{{}, {0.0}, {-1.0}}}), InputError);
  }
  TEST_CASE("Gaussian pairing in closed form") {
    // int exp(-a x^2/2) exp(-(x-c)^2/(2w^2)) dx
    const double a = 0.7, c = 0.4, w = 0.9;
    const auto f = gaussian(1, 1, {c}, w);
    Eigen::MatrixXd A(1, 1);
    A << a;
    const double b = a + 1 / (w * w);
    const double expect = std::sqrt(2 * kPi / b) * std::exp(-0.5 * c * c / (w * w) + 0.5 * (c / (w * w)) * (c / (w * w)) / b);
    CHECK(gaussian_pairing(f, A) == Approx(expect).epsilon(1e-13));
    // polynomial moment against nested adaptive quadrature, two points in d = 1
    Polynomial p;
    p[{2, 1}] = 1.0;
    const TestFunction g(1, 2, {GaussianTerm{p, {0.2, -0.1}, {0.7, 0.5}}});
    Eigen::MatrixXd K(2, 2);
    K << 1.0, -1.0, -1.0, 1.0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double brute = GK::integrate(
        [&](double x) {
          return GK::integrate([&](double y) { return std::exp(-0.5 * (x - y) * (x - y)) * g({x, y}); }, -8.0, 8.0, 10,
                               1e-13);
        },
        -8.0, 8.0, 10, 1e-13);
    CHECK(gaussian_pairing(g, K) == Approx(brute).epsilon(1e-10));
    Eigen::MatrixXd neg(1, 1);
    neg << -1.0;
    CHECK_THROWS_AS(gaussian_pairing(gaussian(1, 1, {0}, 100.0), neg), NumericalError);
  }
}
