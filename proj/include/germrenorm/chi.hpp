#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "germrenorm/geometry.hpp"
#include "germrenorm/sector.hpp"
#include "germrenorm/taylor_box.hpp"
#include "germrenorm/test_function.hpp"

namespace germrenorm {

struct QuadratureConfig {
  int t_nodes = 41;     // tanh-sinh nodes per cube axis
  double t_cut = 1e-12; // tanh-sinh nodes stop this close to the cube faces
  int tau_nodes = 12;   // Gauss-Legendre nodes for tail and remainder superpositions
  int gh_order = 20;    // Gauss-Hermite order for h-axes (quadrature path)
  int x_order = 32;     // Gauss-Legendre order for x-axes (quadrature path)
  long mc_samples = 20000;
  uint64_t seed = 20240601;
  int max_tensor_axes = 8;  // Monte Carlo beyond this many quadrature axes
  bool force_quadrature = false;
  int jobs = 1;
};

/// A smooth factor sum_i w_i exp(-|x_a - x_b|_g^2 / (4 tau_i)) between two vertices.
struct ExtraEdge {
  int a, b;  // vertex positions
  std::shared_ptr<const TauRule> rule;
};

/// chi(t) = 2^E prod a_k int A(t, x, h) dx dh for one sector chart, as a
/// Taylor box in t.
class ChiEvaluator {
 public:
  ChiEvaluator(SectorChart chart, TestFunction phi, FlatGeometry geom, std::vector<ExtraEdge> extras,
               QuadratureConfig cfg);

  const SectorChart& chart() const { return chart_; }
  bool closed_form_available() const;
  bool uses_monte_carlo() const;

  TJet jet(const std::vector<double>& t, const std::shared_ptr<const BoxShape>& box) const;
  double value(const std::vector<double>& t) const;

  /// Gaussian integral in closed form (isotropic flat metric).
  TJet closed_form(const std::vector<double>& t, const std::shared_ptr<const BoxShape>& box) const;
  /// Gauss-Hermite in h, Gauss-Legendre in x; Monte Carlo when too many axes.
  TJet quadrature(const std::vector<double>& t, const std::shared_ptr<const BoxShape>& box) const;

  /// Stable description of everything chi depends on, for caching.
  std::string cache_key() const;

 private:
  SectorChart chart_;
  TestFunction phi_;
  FlatGeometry geom_;
  std::vector<ExtraEdge> extras_;
  QuadratureConfig cfg_;
  double prefactor_ = 1.0;
};

}  // namespace germrenorm
