#pragma once

#include <vector>

namespace germrenorm {

struct Rule {
  std::vector<double> x, w;
  int size() const { return static_cast<int>(x.size()); }
};

/// Golub-Welsch rules.
Rule gauss_legendre(int n, double a = -1.0, double b = 1.0);
Rule gauss_hermite(int n);  // weight exp(-x^2) on the real line

/// Fixed-step tanh-sinh rule on (0,1) with an embedded half-resolution rule.
/// Nodes closer to 0 than `cut` are dropped.
struct EndpointRule {
  std::vector<double> t, w, w_coarse;
  int size() const { return static_cast<int>(t.size()); }
};
EndpointRule tanh_sinh_unit(int nodes, double cut = 1e-25);

}  // namespace germrenorm
