#include "germrenorm/taylor_box.hpp"

#include "germrenorm/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace germrenorm {

BoxShape::BoxShape(std::vector<int> deg) : deg_(std::move(deg)) {
  stride_.assign(deg_.size(), 1);
  for (int a = axes() - 1; a >= 0; --a) {
    stride_[a] = size_;
    size_ *= deg_[a] + 1;
    total_ += deg_[a];
  }
  for (int i = 0; i < size_; ++i) {
    auto ai = exponents(i);
    for (int j = 0; j < size_; ++j) {
      auto aj = exponents(j);
      bool ok = true;
      int k = 0;
      for (int a = 0; a < axes() && ok; ++a) {
        if (ai[a] + aj[a] > deg_[a]) ok = false;
        k += (ai[a] + aj[a]) * stride_[a];
      }
      if (ok) products_.push_back({i, j, k});
    }
  }
}

std::shared_ptr<const BoxShape> BoxShape::get(const std::vector<int>& deg) {
  for (int d : deg)
    if (d < 0) throw PreconditionError("negative Taylor degree");
  static std::mutex mu;
  static std::map<std::vector<int>, std::shared_ptr<const BoxShape>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[deg];
  if (!slot) slot.reset(new BoxShape(deg));
  return slot;
}

int BoxShape::index(const std::vector<int>& alpha) const {
  int k = 0;
  for (int a = 0; a < axes(); ++a) {
    if (alpha[a] < 0 || alpha[a] > deg_[a]) return -1;
    k += alpha[a] * stride_[a];
  }
  return k;
}

std::vector<int> BoxShape::exponents(int idx) const {
  std::vector<int> a(axes());
  for (int ax = 0; ax < axes(); ++ax) {
    a[ax] = idx / stride_[ax];
    idx %= stride_[ax];
  }
  return a;
}

TJet::TJet(std::shared_ptr<const BoxShape> shape, double v) : shape_(std::move(shape)), c_(shape_->size(), 0.0) {
  c_[0] = v;
}

TJet TJet::variable(std::shared_ptr<const BoxShape> shape, int axis, double t0) {
  TJet j(shape, t0);
  const int u = j.shape_->unit_index(axis);
  if (u >= 0) j.c_[u] = 1.0;
  return j;
}

double TJet::derivative(const std::vector<int>& beta) const {
  const int idx = shape_->index(beta);
  if (idx < 0) throw PreconditionError("derivative beyond the Taylor box");
  double f = c_[idx];
  for (int b : beta)
    for (int i = 2; i <= b; ++i) f *= i;
  return f;
}

TJet& TJet::operator+=(const TJet& o) {
  for (int i = 0; i < size(); ++i) c_[i] += o.c_[i];
  return *this;
}

TJet& TJet::operator-=(const TJet& o) {
  for (int i = 0; i < size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

TJet& TJet::operator*=(double a) {
  for (auto& x : c_) x *= a;
  return *this;
}

TJet TJet::operator*(const TJet& o) const {
  TJet r(shape_);
  if (size() == 1) {
    r.c_[0] = c_[0] * o.c_[0];
    return r;
  }
  for (const auto& p : shape_->products()) r.c_[p.k] += c_[p.i] * o.c_[p.j];
  return r;
}

void TJet::fma(const TJet& a, const TJet& b) {
  if (size() == 1) {
    c_[0] += a.c_[0] * b.c_[0];
    return;
  }
  for (const auto& p : shape_->products()) c_[p.k] += a.c_[p.i] * b.c_[p.j];
}

TJet TJet::compose(const std::vector<double>& f) const {
  TJet r(shape_, f[0]);
  if (size() == 1) return r;
  TJet dx = *this;
  dx.c_[0] = 0.0;
  TJet pw = dx;
  for (size_t n = 1; n < f.size(); ++n) {
    for (int i = 0; i < size(); ++i) r.c_[i] += f[n] * pw.c_[i];
    if (n + 1 < f.size()) pw = pw * dx;
  }
  return r;
}

TJet TJet::exp() const {
  const int N = shape_->total_degree();
  const double e = std::exp(c_[0]);
  std::vector<double> f(N + 1);
  f[0] = e;
  for (int n = 1; n <= N; ++n) f[n] = f[n - 1] / n;
  return compose(f);
}

TJet TJet::reciprocal() const {
  if (c_[0] == 0.0) throw NumericalError("Taylor reciprocal of a vanishing value");
  const int N = shape_->total_degree();
  std::vector<double> f(N + 1);
  f[0] = 1.0 / c_[0];
  for (int n = 1; n <= N; ++n) f[n] = -f[n - 1] / c_[0];
  return compose(f);
}

TJet TJet::pow(double p) const {
  if (!(c_[0] > 0)) throw NumericalError("Taylor power of a nonpositive value");
  const int N = shape_->total_degree();
  std::vector<double> f(N + 1);
  f[0] = std::pow(c_[0], p);
  for (int n = 1; n <= N; ++n) f[n] = f[n - 1] * (p - n + 1) / (n * c_[0]);
  return compose(f);
}

TJet TJet::sqrt() const { return pow(0.5); }

TJet TJet::log() const {
  if (!(c_[0] > 0)) throw NumericalError("Taylor log of a nonpositive value");
  const int N = shape_->total_degree();
  std::vector<double> f(N + 1);
  f[0] = std::log(c_[0]);
  double p = 1;
  for (int n = 1; n <= N; ++n) {
    p /= c_[0];
    f[n] = ((n % 2) ? 1.0 : -1.0) * p / n;
  }
  return compose(f);
}

}  // namespace germrenorm
