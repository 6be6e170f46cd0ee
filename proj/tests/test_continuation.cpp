#include "doctest.h"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <random>

#include "germrenorm/continuation.hpp"
#include "germrenorm/errors.hpp"

using namespace germrenorm;
using doctest::Approx;

namespace {

ChiFunction poly_chi(const TPolynomial& psi) {
  return [psi](const std::vector<double>& t, const std::shared_ptr<const BoxShape>& box) {
    return polynomial_tjet(psi, t, box);
  };
}

CubeIntegralSpec cube(int E, std::vector<LinearForm> lambda, std::vector<int> offset, int order, ChiFunction chi) {
  CubeIntegralSpec s;
  s.dim = E;
  s.lambda = std::move(lambda);
  s.offset = std::move(offset);
  s.order = order;
  s.chi = std::move(chi);
  return s;
}

double max_holo_gap(const MeromorphicGerm& a, const MeromorphicGerm& b) {
  const Jet ha = project_holomorphic(a), hb = project_holomorphic(b);
  double gap = 0, scale = 1e-300;
  for (int i = 0; i < ha.size(); ++i) {
    gap = std::max(gap, std::abs(ha[i] - hb[i]));
    scale = std::max(scale, std::abs(hb[i]));
  }
  return gap / scale;
}

std::vector<double> random_sigma(std::mt19937& rng, int p) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  std::vector<double> s(p);
  for (auto& x : s) x = u(rng);
  return s;
}

}  // namespace

TEST_SUITE("continuation") {
  TEST_CASE("one-dimensional examples") {
    const auto x = LinearForm::coordinate(1, 0);
    const auto g = ibp_extend_cube(cube(1, {x}, {0}, 4, poly_chi({{{0}, 1.0}})));
    REQUIRE(g.polar.size() == 1);
    CHECK(g.evaluate(std::vector<double>{0.25}).real() == Approx(4.0).epsilon(1e-12));
    CHECK(std::abs(project_holomorphic(g)[0]) < 1e-13);

    // 1/sigma + 1/(sigma + 1)
    const auto h = ibp_extend_cube(cube(1, {x}, {0}, 4, poly_chi({{{0}, 1.0}, {{1}, 1.0}})));
    const Jet hol = project_holomorphic(h);
    for (int n = 0; n <= 4; ++n) CHECK(hol.coeff({n}).real() == Approx(n % 2 ? -1.0 : 1.0).epsilon(1e-12));
  }
  TEST_CASE("exponential against the truncated polynomial oracle") {
    const auto x = LinearForm::coordinate(1, 0);
    TPolynomial taylor;
    double f = 1;
    for (int n = 0; n <= 24; ++n) {
      if (n > 0) f *= n;
      taylor[{n}] = 1 / f;
    }
    auto expchi = [](const std::vector<double>& t, const std::shared_ptr<const BoxShape>& box) {
      return TJet::variable(box, 0, t[0]).exp();
    };
    const auto g = ibp_extend_cube(cube(1, {x}, {0}, 3, expchi));
    const auto oracle = model_integral_exact(taylor, {x}, {0}, 3);
    CHECK(max_holo_gap(g, oracle) < 1e-12);
    // residue chi(0) = 1
    CHECK((g.evaluate(std::vector<double>{1e-7}) * 1e-7).real() == Approx(1.0).epsilon(1e-6));
  }
  TEST_CASE("polynomial jets match jet products") {
    const TPolynomial psi{{{0, 0, 0}, 0.5}, {{2, 1, 0}, -1.5}, {{0, 3, 1}, 2.0}, {{1, 1, 1}, 0.25}};
    const std::vector<double> t{0.3, 0.7, 0.45};
    const auto box = BoxShape::get({2, 3, 1});
    TJet want(box, 0.0);
    for (const auto& [beta, c] : psi) {
      TJet m(box, c);
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < beta[j]; ++k) m = m * TJet::variable(box, j, t[j]);
      want += m;
    }
    const TJet got = polynomial_tjet(psi, t, box), again = PolynomialChi(psi, 3)(t, box);
    for (int i = 0; i < box->size(); ++i) {
      CHECK(got[i] == Approx(want[i]).epsilon(1e-14));
      CHECK(again[i] == got[i]);
    }
  }

  TEST_CASE("model integral examples") {
    const std::vector<LinearForm> lam{LinearForm::coordinate(2, 0), LinearForm::sum_of(2, {0, 1})};
    const auto prod = model_integral_exact({{{1, 1}, 1.0}}, lam, {0, 0}, 3);
    CHECK(prod.polar.empty());
    const Jet h = project_holomorphic(prod);
    CHECK(h.coeff({0, 0}).real() == Approx(1.0).epsilon(1e-14));
    CHECK(h.coeff({1, 0}).real() == Approx(-2.0).epsilon(1e-14));
    CHECK(h.coeff({0, 1}).real() == Approx(-1.0).epsilon(1e-14));
    CHECK(h.coeff({1, 1}).real() == Approx(3.0).epsilon(1e-14));
    const std::vector<double> s{0.2, -0.1};
    const auto one = model_integral_exact({{{0, 0}, 1.0}}, lam, {0, 0}, 3);
    CHECK(one.evaluate(s).real() == Approx(1 / (0.2 * 0.1)).epsilon(1e-12));
    const auto u = model_integral_exact({{{0}, 1.0}}, {LinearForm::coordinate(1, 0)}, {0}, 2);
    CHECK(u.evaluate(std::vector<double>{0.5}).real() == Approx(2.0).epsilon(1e-14));
  }
  TEST_CASE("oracle exactness for polynomial chi") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int E = 1; E <= 3; ++E) {
      for (int trial = 0; trial < 3; ++trial) {
        std::vector<LinearForm> lam;
        std::vector<int> prefix, offset, depth;
        for (int e = 0; e < E; ++e) {
          prefix.push_back(e);
          lam.push_back(LinearForm::sum_of(E, prefix, 2));
          offset.push_back(static_cast<int>(rng() % 5) - 2);
        }
        for (int o : offset) depth.push_back(std::min(4, std::max(0, 1 - o) + static_cast<int>(rng() % 2)));
        TPolynomial psi;
        for (int k = 0; k < 4; ++k) {
          std::vector<int> a(E);
          for (auto& ai : a) ai = rng() % 3;
          psi[a] += coef(rng);
        }
        auto spec = cube(E, lam, offset, 2, poly_chi(psi));
        spec.depth = depth;
        spec.nodes = 41;
        const auto got = ibp_extend_cube(spec);
        const auto want = model_integral_exact(psi, lam, offset, 2);
        CHECK(max_holo_gap(got, want) < 1e-12);
        for (int k = 0; k < 5; ++k) {
          const auto s = random_sigma(rng, E);
          const cplx a = got.evaluate(s), b = want.evaluate(s);
          CHECK(std::abs(a - b) <= 1e-10 * std::abs(b));
        }
      }
    }
  }
  TEST_CASE("depth independence") {
    std::mt19937 rng(5);
    auto chi = [](const std::vector<double>& t, const std::shared_ptr<const BoxShape>& box) {
      const TJet a = TJet::variable(box, 0, t[0]), b = TJet::variable(box, 1, t[1]);
      TJet one = a;
      one += 1.0;
      return (a * b * 0.7).exp() * one.reciprocal();
    };
    const std::vector<LinearForm> lam{LinearForm::sum_of(2, {0}, 2), LinearForm::sum_of(2, {0, 1}, 2)};
    auto base = cube(2, lam, {2, -1}, 2, chi);
    base.nodes = 41;
    base.cut = 1e-12;
    const auto g0 = ibp_extend_cube(base);
    auto deeper = base;
    deeper.depth = {2, 4};
    const auto g1 = ibp_extend_cube(deeper);
    for (int k = 0; k < 20; ++k) {
      const auto s = random_sigma(rng, 2);
      const cplx a = g0.evaluate(s), b = g1.evaluate(s);
      CHECK(std::abs(a - b) <= 1e-8 * std::abs(b));
    }
  }
  TEST_CASE("values at real exponents") {
    auto chi = [](const std::vector<double>& t, const std::shared_ptr<const BoxShape>& box) {
      return (TJet::variable(box, 0, t[0]) * -1.0).exp();
    };
    const CubeGrid grid({1}, 41, chi, 1, "", 1e-25);
    boost::math::quadrature::tanh_sinh<double> ts;
    // convergent: int t^{0.6 - 1} e^{-t} dt
    const double conv = ts.integrate([](double t) { return t > 0 ? std::pow(t, -0.4) * std::exp(-t) : 0.0; }, 0.0, 1.0, 1e-15);
    CHECK(ibp_cube_value({-1}, grid, {1.6}) == Approx(conv).epsilon(1e-10));
    // continued to c = -0.4: int t^{c-1} (e^{-t} - 1) dt + 1/c
    const double c = -0.4;
    const double cont =
        ts.integrate([&](double t) { return t > 0 ? std::pow(t, c) * (std::expm1(-t) / t) : 0.0; }, 0.0, 1.0, 1e-15) + 1 / c;
    CHECK(ibp_cube_value({-1}, grid, {0.6}) == Approx(cont).epsilon(1e-10));
    CHECK_THROWS_AS(ibp_cube_value({-1}, grid, {-0.5}), PreconditionError);
  }
  TEST_CASE("insufficient depth is refused") {
    auto spec = cube(1, {LinearForm::coordinate(1, 0)}, {-2}, 1, poly_chi({{{0}, 1.0}}));
    spec.depth = {1};
    CHECK_THROWS_AS(ibp_extend_cube(spec), PreconditionError);
  }
}
