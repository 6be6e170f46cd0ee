#include "doctest.h"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <random>

#include "germrenorm/chi.hpp"
#include "germrenorm/errors.hpp"
#include "germrenorm/sector.hpp"

using namespace germrenorm;
using doctest::Approx;

namespace {

const double kPi = boost::math::constants::pi<double>();

LabelledGraph banana(int k, std::vector<int> labels = {}) {
  if (labels.empty()) labels.assign(k, 0);
  return {FeynmanGraph({1, 2}, std::vector<std::pair<int, int>>(k, {1, 2})), labels};
}
LabelledGraph triangle() { return {FeynmanGraph({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}}), {0, 0, 0}}; }
LabelledGraph path3() { return {FeynmanGraph({1, 2, 3}, {{1, 2}, {2, 3}}), {0, 0}}; }

BlowupPoint random_point(const SectorChart& c, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::normal_distribution<double> n01;
  BlowupPoint p;
  for (int i = 0; i < c.num_edges(); ++i) p.t.push_back(u(rng));
  for (int v = 0; v < c.num_vertices(); ++v)
    if (c.is_root(v)) {
      Point x(c.d);
      for (auto& xi : x) xi = n01(rng);
      p.x[v] = x;
    }
  for (int e : c.tree_edges) {
    Point h(c.d);
    for (auto& hi : h) hi = n01(rng);
    p.h[e] = h;
  }
  return p;
}

double dist2(const Point& a, const Point& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// exp(-|x1|^2/(2w^2) - |x2 - c|^2/(2w^2)) on two points
TestFunction two_point_gaussian(int d, double c, double w) {
  Polynomial one;
  one[Monomial(2 * d, 0)] = 1.0;
  std::vector<double> center(2 * d, 0.0);
  center[d] = c;
  return TestFunction(d, 2, {GaussianTerm{one, center, {w, w}}});
}

// int phi(x, x) dx for two_point_gaussian
double diagonal_mass(int d, double c, double w) {
  return std::pow(kPi * w * w, 0.5 * d) * std::exp(-c * c / (4 * w * w));
}

}  // namespace

TEST_SUITE("sector") {
  TEST_CASE("exponent form examples") {
    const auto b2 = sector_exponent_forms(banana(2), {0, 1}, 4);
    REQUIRE(b2.size() == 2);
    CHECK(b2[0].first == LinearForm::sum_of(2, {0}, 2));
    CHECK(b2[0].second == 2);
    CHECK(b2[1].first == LinearForm::sum_of(2, {0, 1}, 2));
    CHECK(b2[1].second == 0);
    std::vector<int> c;
    for (const auto& f : sector_exponent_forms(triangle(), {0, 1, 2}, 4)) c.push_back(f.second);
    CHECK(c == std::vector<int>{2, 4, 2});
    const auto k = sector_exponent_forms(banana(2, {1, 0}), {0, 1}, 4);
    CHECK(k[0].second == 4);
    CHECK(k[1].second == 2);
  }
  TEST_CASE("exponent constants follow the betti filtration") {
    const LabelledGraph g{FeynmanGraph({1, 2, 3}, {{1, 2}, {1, 2}, {2, 3}, {1, 3}}), {1, 0, 2, 0}};
    for_each_permutation(4, [&](const std::vector<int>& perm) {
      const auto forms = sector_exponent_forms(g, perm, 3);
      int ksum = 0;
      std::vector<int> prefix;
      for (int e = 0; e < 4; ++e) {
        ksum += g.labels[perm[e]];
        prefix.push_back(perm[e]);
        CHECK(forms[e].second == 2 * (e + 1) + 2 * ksum - 3 * betti(g.graph, prefix));
        CHECK(forms[e].first == LinearForm::sum_of(4, prefix, 2));
      }
    });
  }
  TEST_CASE("IBP depth examples") {
    CHECK(required_ibp_depths(make_chart(banana(2), {0, 1}, 4)) == std::vector<int>{0, 1});
    CHECK(required_ibp_depths(make_chart(triangle(), {0, 1, 2}, 4)) == std::vector<int>{0, 0, 0});
    CHECK(required_ibp_depths(make_chart(banana(3), {0, 1, 2}, 4)) == std::vector<int>{0, 1, 3});
  }
  TEST_CASE("exponent identity") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> us(0.6, 1.4);
    for (const auto& g : {banana(2), banana(3, {0, 1, 0}), triangle(), path3()}) {
      const int E = g.graph.num_edges(), d = 3;
      std::vector<int> perm(E);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      const auto chart = make_chart(g, perm, d);
      const auto forms = sector_exponent_forms(g, perm, d);
      const auto p = random_point(chart, rng);
      const auto cp = pi_forward(chart, p);
      std::vector<double> s(E);
      for (auto& x : s) x = us(rng);
      double lhs = 0, rhs = 0;  // logarithms
      for (int e = 0; e < E; ++e) {
        const double expo = 2 * s[e] + 2 * g.labels[e] - (chart.in_tree[e] ? 0 : d);
        lhs += expo * std::log(cp.lengths[e]) / 2;
      }
      for (int slot = 0; slot < E; ++slot) {
        std::vector<double> sig(E);
        for (int e = 0; e < E; ++e) sig[e] = s[e] - 1;
        rhs += (forms[slot].first.eval(sig) + forms[slot].second) * std::log(p.t[slot]);
      }
      CHECK(std::exp(lhs - rhs) == Approx(1.0).epsilon(1e-12));
    }
  }
  TEST_CASE("pi_forward examples") {
    const auto chart = make_chart(banana(2), {0, 1}, 2);
    BlowupPoint p{{0.3, 0.6}, {{0, {0.5, -1.0}}}, {{0, {2.0, 1.0}}}};
    const auto c = pi_forward(chart, p);
    CHECK(c.positions[0] == Point{0.5, -1.0});
    CHECK(c.positions[1][0] == Approx(0.5 + 0.18 * 2.0));
    CHECK(c.positions[1][1] == Approx(-1.0 + 0.18 * 1.0));
    CHECK(c.lengths[0] == Approx(0.18 * 0.18));
    CHECK(c.lengths[1] == Approx(0.36));
    p.t = {1.0, 1.0};
    const auto one = pi_forward(chart, p);
    CHECK(one.lengths == std::vector<double>{1.0, 1.0});
    CHECK(one.positions[1][0] == Approx(2.5));
    p.h[0] = {0.0, 0.0};
    CHECK(pi_forward(chart, p).positions[1] == p.x[0]);
  }
  TEST_CASE("pi_inverse examples and round trips") {
    const auto chart = make_chart(banana(2), {0, 1}, 1);
    const auto b = pi_inverse(chart, {{{0.0}, {0.25}}, {1.0 / 16, 1.0 / 4}});
    CHECK(b.t[0] == Approx(0.5).epsilon(1e-15));
    CHECK(b.t[1] == Approx(0.5).epsilon(1e-15));
    CHECK(b.h.at(0)[0] == Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(pi_inverse(chart, {{{0.0}, {0.25}}, {0.2, 0.2}}), PreconditionError);
    std::mt19937 rng(2);
    for (const auto& g : {banana(3), triangle(), path3()}) {
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<int> perm(g.graph.num_edges());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto c = make_chart(g, perm, 2);
        const auto p = random_point(c, rng);
        const auto q = pi_inverse(c, pi_forward(c, p));
        for (size_t i = 0; i < p.t.size(); ++i) CHECK(q.t[i] == Approx(p.t[i]).epsilon(1e-12));
        for (const auto& [e, h] : p.h)
          for (int mu = 0; mu < 2; ++mu) CHECK(q.h.at(e)[mu] == Approx(h[mu]).epsilon(1e-10));
        for (const auto& [v, x] : p.x)
          for (int mu = 0; mu < 2; ++mu) CHECK(q.x.at(v)[mu] == Approx(x[mu]).epsilon(1e-12));
      }
    }
  }
  TEST_CASE("pullback examples") {
    const FlatGeometry geom(2);
    const auto chart = make_chart(banana(2), {0, 1}, 2);
    BlowupPoint p{{0.3, 0.6}, {{0, {0.0, 0.0}}}, {{0, {2.0, 1.0}}}};
    CHECK(pullback_edge(chart, 0, p, geom) == Approx(5.0));
    CHECK(pullback_edge(chart, 1, p, geom) == Approx(0.09 * 5.0));
    p.t = {0.0, 0.0};
    CHECK(pullback_edge(chart, 0, p, geom) == Approx(5.0));
    CHECK(std::isfinite(pullback_edge(chart, 1, p, geom)));
  }
  TEST_CASE("smooth pullback matches the configuration distance") {
    std::mt19937 rng(8);
    const FlatGeometry geom(3);
    for (const auto& g : {banana(3), triangle(), path3()}) {
      std::vector<int> perm(g.graph.num_edges());
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      const auto c = make_chart(g, perm, 3);
      const auto p = random_point(c, rng);
      const auto cp = pi_forward(c, p);
      for (int e = 0; e < g.graph.num_edges(); ++e) {
        const auto& ed = g.graph.edge(e);
        CHECK(pullback_edge(c, e, p, geom) * cp.lengths[e] ==
              Approx(dist2(cp.positions[ed.a], cp.positions[ed.b])).epsilon(1e-12));
      }
    }
  }
}

TEST_SUITE("chi") {
  TEST_CASE("banana faces") {
    for (int d : {1, 2}) {
      const double c = 0.4, w = 0.8;
      const ChiEvaluator chi(make_chart(banana(2), {0, 1}, d), two_point_gaussian(d, c, w), FlatGeometry(d), {}, {});
      const double mass = diagonal_mass(d, c, w);
      CHECK(chi.value({0.0, 0.0}) == Approx(4 * std::pow(4 * kPi, 0.5 * d) * mass).epsilon(1e-12));
      CHECK(chi.value({1.0, 0.0}) == Approx(4 * std::pow(2 * kPi, 0.5 * d) * mass).epsilon(1e-12));
    }
  }
  TEST_CASE("vanishing test function") {
    const auto phi = two_point_gaussian(2, 0.0, 1.0).scaled(0.0);
    const ChiEvaluator chi(make_chart(banana(2), {1, 0}, 2), phi, FlatGeometry(2), {}, {});
    CHECK(chi.value({0.3, 0.7}) == 0.0);
  }
  TEST_CASE("parity at the t2 face") {
    const ChiEvaluator chi(make_chart(banana(2), {0, 1}, 2), two_point_gaussian(2, 0.7, 0.9), FlatGeometry(2), {}, {});
    const auto box = BoxShape::get({0, 1});
    CHECK(std::abs(chi.jet({0.4, 0.0}, box).derivative({0, 1})) < 1e-13);
  }
  TEST_CASE("closed form agrees with quadrature") {
    QuadratureConfig q;
    q.force_quadrature = true;
    q.gh_order = 24;
    q.x_order = 48;
    const auto phi = two_point_gaussian(1, 0.3, 0.7);
    const auto chart = make_chart(banana(2), {1, 0}, 1);
    const ChiEvaluator cf(chart, phi, FlatGeometry(1), {}, {});
    const ChiEvaluator qu(chart, phi, FlatGeometry(1), {}, q);
    REQUIRE(cf.closed_form_available());
    for (auto t : {std::vector<double>{0.2, 0.5}, std::vector<double>{0.9, 0.1}})
      CHECK(qu.value(t) == Approx(cf.value(t)).epsilon(1e-8));
  }
  TEST_CASE("jets agree with finite differences") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(0.2, 0.8);
    Polynomial p;
    p[{1, 0, 0, 1, 0, 0}] = 0.5;
    p[{0, 0, 0, 0, 0, 0}] = 1.0;
    const TestFunction phi(2, 3, {GaussianTerm{p, {0, 0, 0.3, 0.1, -0.2, 0.4}, {0.9, 0.8, 1.1}}});
    const ChiEvaluator chi(make_chart(triangle(), {2, 0, 1}, 2), phi, FlatGeometry(2), {}, {});
    const auto box = BoxShape::get({1, 1, 1});
    const double h = 1e-5;
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<double> t{u(rng), u(rng), u(rng)};
      const TJet j = chi.jet(t, box);
      CHECK(j.value() == Approx(chi.value(t)).epsilon(1e-13));
      for (int a = 0; a < 3; ++a) {
        auto tp = t, tm = t;
        tp[a] += h;
        tm[a] -= h;
        std::vector<int> beta(3, 0);
        beta[a] = 1;
        const double fd = (chi.value(tp) - chi.value(tm)) / (2 * h);
        CHECK(std::abs(j.derivative(beta) - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
      }
    }
  }
  TEST_CASE("equivalent charts give identical values") {
    // swapping the two parallel edges of a banana relabels the sector without changing chi
    const auto phi = two_point_gaussian(2, 0.5, 0.6);
    const ChiEvaluator a(make_chart(banana(2), {0, 1}, 2), phi, FlatGeometry(2), {}, {});
    const ChiEvaluator b(make_chart(banana(2), {1, 0}, 2), phi, FlatGeometry(2), {}, {});
    for (auto t : {std::vector<double>{0.2, 0.5}, std::vector<double>{0.9, 0.1}}) CHECK(a.value(t) == b.value(t));
  }
}
