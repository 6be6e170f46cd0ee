#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "germrenorm/linear_form.hpp"

namespace germrenorm {

using cplx = std::complex<double>;

/// All multi-indices of total degree <= order in `nvars` variables, graded
/// lexicographic. Exponents are packed 4 bits per variable, so nvars <= 16
/// and order <= 15.
class MonomialTable {
 public:
  static constexpr int kMaxVars = 16;
  static constexpr int kMaxOrder = 15;

  static std::shared_ptr<const MonomialTable> get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(keys_.size()); }
  uint64_t key(int idx) const { return keys_[idx]; }
  int degree(int idx) const { return degree_[idx]; }
  int exponent(int idx, int var) const { return static_cast<int>((keys_[idx] >> (4 * var)) & 0xF); }
  std::vector<int> exponents(int idx) const;
  // index of the monomial with this key, -1 if absent (degree too high)
  int index(uint64_t key) const;
  // number of monomials of degree <= k
  int count_upto(int k) const { return k < 0 ? 0 : upto_[std::min(k, order_)]; }

  static uint64_t pack(const std::vector<int>& alpha);
  static uint64_t unit(int var) { return uint64_t{1} << (4 * var); }

 private:
  MonomialTable(int nvars, int order);
  int nvars_, order_;
  std::vector<uint64_t> keys_;
  std::vector<int> degree_;
  std::vector<int> upto_;
  std::vector<std::pair<uint64_t, int>> sorted_;  // key -> index, sorted by key
};

/// Truncated multivariate Taylor series with complex coefficients. The order
/// is the degree through which the coefficients are known.
class Jet {
 public:
  Jet() : Jet(0, 0) {}
  Jet(int nvars, int order);

  static Jet constant(int nvars, int order, cplx v);
  static Jet variable(int nvars, int order, int var);
  static Jet from_form(const LinearForm& f, int order);
  // univariate series in a single variable `var`, coefficients series[n]
  static Jet univariate(int nvars, int order, int var, const std::vector<cplx>& series);

  int nvars() const { return table_->nvars(); }
  int order() const { return table_->order(); }
  int size() const { return table_->size(); }
  const MonomialTable& table() const { return *table_; }

  cplx operator[](int idx) const { return c_[idx]; }
  cplx& operator[](int idx) { return c_[idx]; }
  cplx coeff(const std::vector<int>& alpha) const;
  void set(const std::vector<int>& alpha, cplx v);
  const std::vector<cplx>& coeffs() const { return c_; }

  Jet truncated(int order) const;
  double max_abs() const;
  bool is_zero() const { return max_abs() == 0.0; }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(cplx a);
  Jet operator+(const Jet& o) const { Jet r = *this; return r += o; }
  Jet operator-(const Jet& o) const { Jet r = *this; return r -= o; }
  Jet operator*(cplx a) const { Jet r = *this; return r *= a; }
  Jet operator*(const Jet& o) const;

  // Product with an exact homogeneous linear polynomial; the order rises by one.
  Jet mul_linear(const std::vector<double>& coeffs) const;
  // Product with a univariate series in variable var.
  Jet mul_univariate(int var, const std::vector<cplx>& series) const;

  /// h(A sigma): old variable i becomes sum_j A[i][j] * new_j, new space has
  /// `new_vars` variables. Order is preserved.
  Jet compose_linear(const std::vector<std::vector<double>>& A, int new_vars) const;

  Jet embed(int new_vars, const std::vector<int>& var_map) const;
  Jet external_product(const Jet& o) const;  // variables of *this first

  cplx evaluate(const std::vector<cplx>& point) const;
  cplx evaluate(const std::vector<double>& point) const;

 private:
  std::shared_ptr<const MonomialTable> table_;
  std::vector<cplx> c_;
};

}  // namespace germrenorm
