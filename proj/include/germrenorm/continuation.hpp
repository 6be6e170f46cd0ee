#pragma once

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "germrenorm/germ.hpp"
#include "germrenorm/quadrature.hpp"
#include "germrenorm/taylor_box.hpp"

namespace germrenorm {

using ChiFunction = std::function<TJet(const std::vector<double>&, const std::shared_ptr<const BoxShape>&)>;

/// int_{[0,1]^E} prod_e t_e^{lambda_e(sigma) + offset_e - 1} chi(t) dt.
struct CubeIntegralSpec {
  int dim = 0;                     // E
  std::vector<LinearForm> lambda;  // per axis, forms in the germ variables
  std::vector<int> offset;         // per axis, exponent at sigma = 0
  std::vector<int> depth;          // per axis, integrations by parts (empty: minimal)
  int order = 0;                   // target sigma-jet order D
  ChiFunction chi;
  int nodes = 61;                  // tanh-sinh nodes per axis
  double cut = 1e-25;              // smallest node distance from the endpoints
  int jobs = 1;
};

std::vector<int> minimal_depths(const std::vector<int>& offset);

/// chi sampled on the tensor grid: interior tanh-sinh nodes carry the
/// depth-th derivative, the endpoint t = 1 carries derivatives below depth.
class CubeGrid {
 public:
  CubeGrid(std::vector<int> depth, int nodes, const ChiFunction& chi, int jobs = 1, const std::string& cache_key = "",
           double cut = 1e-25);

  int dim() const { return static_cast<int>(depth_.size()); }
  const std::vector<int>& depth() const { return depth_; }
  const EndpointRule& rule() const { return rule_; }

  /// A linear functional on one axis: either d^deriv/dt^deriv at t = 1, or
  /// sum_i w[i] d^depth chi(t_i) over interior nodes.
  struct Functional {
    bool endpoint = false;
    int deriv = 0;
    std::vector<double> w;
  };
  /// Applies one functional list per axis; result is row-major over the lists.
  std::vector<double> contract(const std::vector<std::vector<Functional>>& f) const;

 private:
  std::vector<int> depth_;
  EndpointRule rule_;
  std::vector<int> extent_;  // interior nodes + depth per axis
  std::vector<double> data_;
};

struct CubeResult {
  RawGerm raw;
  double quad_error = 0;  // fine vs embedded coarse rule, largest numerator coefficient gap
};

/// Integration by parts to the required depth; boundary values and log-moment
/// remainders become a raw germ with the linear denominators lambda_e + offset_e + r.
CubeResult ibp_cube_raw(const CubeIntegralSpec& spec, const CubeGrid& grid);
CubeResult ibp_cube_raw(const CubeIntegralSpec& spec);
MeromorphicGerm ibp_extend_cube(const CubeIntegralSpec& spec);

/// The same integration-by-parts identity evaluated at concrete real lambda
/// (lambda_e + offset_e + depth_e > 0 required).
double ibp_cube_value(const std::vector<int>& offset, const CubeGrid& grid, const std::vector<double>& lambda);

/// Exact germ of int prod t^{lambda + offset - 1} psi(t) dt for polynomial psi.
using TPolynomial = std::map<std::vector<int>, double>;
MeromorphicGerm model_integral_exact(const TPolynomial& psi, const std::vector<LinearForm>& lambda,
                                     const std::vector<int>& offset, int order);
RawGerm model_integral_raw(const TPolynomial& psi, const std::vector<LinearForm>& lambda,
                           const std::vector<int>& offset, int order);

/// Taylor box of a polynomial at t.
TJet polynomial_tjet(const TPolynomial& psi, const std::vector<double>& t, const std::shared_ptr<const BoxShape>& box);

/// polynomial_tjet with the coefficients laid out once, for use as a grid chi.
class PolynomialChi {
 public:
  PolynomialChi(const TPolynomial& psi, int dim);
  TJet operator()(const std::vector<double>& t, const std::shared_ptr<const BoxShape>& box) const;

 private:
  int dim_ = 0, top_ = 0;
  std::vector<double> dense_;  // (top+1)^dim, row-major, last axis fastest
};

}  // namespace germrenorm
