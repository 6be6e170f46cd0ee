#pragma once

#include <memory>
#include <vector>

namespace germrenorm {

/// Multi-indices alpha with alpha_i <= deg_i, row-major with the last axis fastest.
class BoxShape {
 public:
  static std::shared_ptr<const BoxShape> get(const std::vector<int>& deg);

  int axes() const { return static_cast<int>(deg_.size()); }
  int size() const { return size_; }
  const std::vector<int>& deg() const { return deg_; }
  int total_degree() const { return total_; }
  int index(const std::vector<int>& alpha) const;
  std::vector<int> exponents(int idx) const;
  int unit_index(int axis) const { return deg_[axis] > 0 ? stride_[axis] : -1; }

  // (i, j, k): coefficient k of a product receives a_i * b_j
  struct Triple {
    int i, j, k;
  };
  const std::vector<Triple>& products() const { return products_; }

 private:
  explicit BoxShape(std::vector<int> deg);
  std::vector<int> deg_, stride_;
  int size_ = 1, total_ = 0;
  std::vector<Triple> products_;
};

/// Truncated Taylor polynomial in t - t0 over a box of degrees.
class TJet {
 public:
  TJet() = default;
  explicit TJet(std::shared_ptr<const BoxShape> shape, double v = 0.0);
  static TJet variable(std::shared_ptr<const BoxShape> shape, int axis, double t0);

  const BoxShape& shape() const { return *shape_; }
  const std::shared_ptr<const BoxShape>& shape_ptr() const { return shape_; }
  int size() const { return static_cast<int>(c_.size()); }
  double value() const { return c_[0]; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  /// d^beta / dt^beta at t0.
  double derivative(const std::vector<int>& beta) const;

  TJet& operator+=(const TJet& o);
  TJet& operator-=(const TJet& o);
  TJet& operator*=(double a);
  TJet& operator+=(double a) {
    c_[0] += a;
    return *this;
  }
  TJet operator+(const TJet& o) const { TJet r = *this; return r += o; }
  TJet operator-(const TJet& o) const { TJet r = *this; return r -= o; }
  TJet operator*(double a) const { TJet r = *this; return r *= a; }
  TJet operator*(const TJet& o) const;
  TJet operator-() const { return *this * -1.0; }
  /// this += a * b
  void fma(const TJet& a, const TJet& b);

  TJet exp() const;
  TJet reciprocal() const;
  TJet sqrt() const;
  TJet pow(double p) const;
  TJet log() const;

 private:
  // sum_n f_n (x - x0)^n with f_n supplied for n <= total degree
  TJet compose(const std::vector<double>& f) const;

  std::shared_ptr<const BoxShape> shape_;
  std::vector<double> c_;
};

}  // namespace germrenorm
