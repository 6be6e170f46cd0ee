#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace germrenorm {

using Rational = boost::multiprecision::cpp_rational;

Rational parse_rational(const std::string& s);
std::string rational_to_string(const Rational& r);
double to_double(const Rational& r);

/// Linear function of the shifted variables sigma = s - s0, exact coefficients,
/// no constant term.
class LinearForm {
 public:
  LinearForm() = default;
  explicit LinearForm(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {}

  static LinearForm zero(int p) { return LinearForm(std::vector<Rational>(p)); }
  static LinearForm coordinate(int p, int i);
  // sum of the listed coordinates times `scale`
  static LinearForm sum_of(int p, const std::vector<int>& idx, const Rational& scale = 1);

  int dim() const { return static_cast<int>(c_.size()); }
  const Rational& operator[](int i) const { return c_[i]; }
  Rational& operator[](int i) { return c_[i]; }
  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const;

  std::vector<double> to_doubles() const;
  double eval(const std::vector<double>& sigma) const;

  LinearForm operator+(const LinearForm& o) const;
  LinearForm operator-(const LinearForm& o) const;
  LinearForm operator*(const Rational& a) const;

  bool operator==(const LinearForm& o) const { return c_ == o.c_; }
  bool operator!=(const LinearForm& o) const { return !(*this == o); }
  bool operator<(const LinearForm& o) const;

  /// Returns (f, a) with *this == a * f, f primitive integral and its first
  /// nonzero coefficient positive.
  std::pair<LinearForm, Rational> normalized() const;

  // Same form embedded in a larger variable space: old index i -> var_map[i].
  LinearForm embed(int new_dim, const std::vector<int>& var_map) const;

  std::string to_string() const;

 private:
  std::vector<Rational> c_;
};

Rational qstar_inner(const LinearForm& a, const LinearForm& b);

int rank(const std::vector<LinearForm>& forms);

/// Coefficients c with target = sum c_i basis_i, if target lies in the span.
std::optional<std::vector<Rational>> express_in_span(const LinearForm& target,
                                                     const std::vector<LinearForm>& basis);

/// Basis of the Q*-orthogonal complement of span(forms): Gram-Schmidt over the
/// standard basis in coordinate order, each vector scaled to primitive form.
std::vector<LinearForm> orthogonal_complement(const std::vector<LinearForm>& forms, int p);

/// Inverse of a square rational matrix given by rows; throws on singular input.
std::vector<std::vector<Rational>> invert(const std::vector<std::vector<Rational>>& rows);

}  // namespace germrenorm
