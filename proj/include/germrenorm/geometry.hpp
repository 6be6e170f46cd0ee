#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "germrenorm/jet.hpp"

namespace germrenorm {

using Point = std::vector<double>;

/// Capabilities a geometry must supply to the sector pipeline.
class GeometryBackend {
 public:
  virtual ~GeometryBackend() = default;
  virtual int dim() const = 0;
  virtual double dist2(const Point& x, const Point& y) const = 0;
  virtual Eigen::MatrixXd metric(const Point& x) const = 0;
  virtual double heat_coefficient(int k, const Point& x, const Point& y) const = 0;
  virtual double cutoff(double r2) const = 0;
  virtual double heat_kernel(double t, const Point& x, const Point& y) const = 0;
  virtual bool has_zero_mode() const = 0;
};

class FlatGeometry : public GeometryBackend {
 public:
  explicit FlatGeometry(int d, double mass = 0.0, std::optional<Eigen::MatrixXd> metric = std::nullopt);

  int dim() const override { return d_; }
  double mass() const { return m_; }
  double dist2(const Point& x, const Point& y) const override;
  Eigen::MatrixXd metric(const Point&) const override { return g_; }
  double heat_coefficient(int k, const Point& x, const Point& y) const override;
  double cutoff(double) const override { return 1.0; }
  double heat_kernel(double t, const Point& x, const Point& y) const override;
  bool has_zero_mode() const override { return false; }

  /// Metric equal to c * identity; c is returned by metric_scale().
  bool isotropic() const;
  double metric_scale() const { return g_(0, 0); }
  double heat_coefficient(int k) const;  // (-m^2)^k / k!

 private:
  int d_;
  double m_;
  Eigen::MatrixXd g_;
};

double flat_heat_kernel(const FlatGeometry& geom, double t, const Point& x, const Point& y);

/// (1/Gamma(s)) int_0^inf K_t(x,y) t^{s-1} dt by double-exponential quadrature.
cplx green_power_quadrature(const FlatGeometry& geom, cplx s, const Point& x, const Point& y);
cplx green_power_closed_form(int d, cplx s, double r);
/// The Green function G^1 at separation r (closed form, massive via Bessel K).
double green_function(const FlatGeometry& geom, double r);

/// sigma-series through order D of (1/Gamma(1+sigma)) int_1^inf K_t(x,y) t^sigma dt.
std::vector<double> green_tail_series(const FlatGeometry& geom, const Point& x, const Point& y, int D);

/// A kernel written as sum_i weight_i * exp(-|x-y|_g^2 / (4 tau_i)).
struct TauRule {
  std::vector<double> tau, weight;
  int size() const { return static_cast<int>(tau.size()); }
  double evaluate(double r2g) const;
};

/// Tail int_1^inf K_t dt plus, for m > 0, the head remainder
/// int_0^1 (4 pi t)^{-d/2} e^{-r^2/4t} (e^{-t m^2} - sum_{k<=p} (-m^2 t)^k/k!) dt.
TauRule tail_rule(const FlatGeometry& geom, int nodes, int heat_order);
/// int_0^inf K_t dt, the full Green function at s = 1. Heat times below
/// tau_min are dropped, which only changes G at distances near sqrt(tau_min).
TauRule full_green_rule(const FlatGeometry& geom, int nodes, double tau_min = 0.0);

}  // namespace germrenorm
