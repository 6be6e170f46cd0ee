#include "germrenorm/jet.hpp"

#include "germrenorm/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>

namespace germrenorm {

MonomialTable::MonomialTable(int nvars, int order) : nvars_(nvars), order_(order) {
  std::vector<int> alpha(nvars, 0);
  // all compositions of k into nvars parts, first variable highest first
  std::function<void(int, int)> rec = [&](int var, int remaining) {
    if (var == nvars - 1) {
      alpha[var] = remaining;
      keys_.push_back(pack(alpha));
      return;
    }
    for (int a = remaining; a >= 0; --a) {
      alpha[var] = a;
      rec(var + 1, remaining - a);
    }
    alpha[var] = 0;
  };
  for (int k = 0; k <= order; ++k) {
    if (nvars == 0) {
      if (k == 0) keys_.push_back(0);
    } else {
      rec(0, k);
    }
    upto_.push_back(static_cast<int>(keys_.size()));
  }
  degree_.resize(keys_.size());
  for (size_t i = 0; i < keys_.size(); ++i) {
    int d = 0;
    for (int v = 0; v < nvars; ++v) d += static_cast<int>((keys_[i] >> (4 * v)) & 0xF);
    degree_[i] = d;
  }
  sorted_.reserve(keys_.size());
  for (size_t i = 0; i < keys_.size(); ++i) sorted_.emplace_back(keys_[i], static_cast<int>(i));
  std::sort(sorted_.begin(), sorted_.end());
}

std::shared_ptr<const MonomialTable> MonomialTable::get(int nvars, int order) {
  if (nvars < 0 || nvars > kMaxVars) throw ResourceCapError("jet variable count exceeds 16");
  if (order < 0) throw PreconditionError("negative jet order");
  if (order > kMaxOrder) throw ResourceCapError("jet order exceeds 15");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot.reset(new MonomialTable(nvars, order));
  return slot;
}

std::vector<int> MonomialTable::exponents(int idx) const {
  std::vector<int> a(nvars_);
  for (int v = 0; v < nvars_; ++v) a[v] = exponent(idx, v);
  return a;
}

int MonomialTable::index(uint64_t key) const {
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), std::make_pair(key, -1));
  if (it == sorted_.end() || it->first != key) return -1;
  return it->second;
}

uint64_t MonomialTable::pack(const std::vector<int>& alpha) {
  uint64_t k = 0;
  for (size_t v = 0; v < alpha.size(); ++v) {
    if (alpha[v] < 0 || alpha[v] > kMaxOrder) throw ResourceCapError("exponent out of range");
    k |= static_cast<uint64_t>(alpha[v]) << (4 * v);
  }
  return k;
}

Jet::Jet(int nvars, int order) : table_(MonomialTable::get(nvars, order)), c_(table_->size()) {}

Jet Jet::constant(int nvars, int order, cplx v) {
  Jet j(nvars, order);
  j.c_[0] = v;
  return j;
}

Jet Jet::variable(int nvars, int order, int var) {
  Jet j(nvars, order);
  if (order >= 1) j.c_[j.table_->index(MonomialTable::unit(var))] = 1.0;
  return j;
}

Jet Jet::from_form(const LinearForm& f, int order) {
  Jet j(f.dim(), order);
  if (order >= 1)
    for (int i = 0; i < f.dim(); ++i)
      if (f[i] != 0) j.c_[j.table_->index(MonomialTable::unit(i))] = to_double(f[i]);
  return j;
}

Jet Jet::univariate(int nvars, int order, int var, const std::vector<cplx>& series) {
  Jet j(nvars, order);
  for (int n = 0; n <= order && n < static_cast<int>(series.size()); ++n)
    j.c_[j.table_->index(MonomialTable::unit(var) * n)] = series[n];
  return j;
}

cplx Jet::coeff(const std::vector<int>& alpha) const {
  int idx = table_->index(MonomialTable::pack(alpha));
  return idx < 0 ? cplx(0) : c_[idx];
}

void Jet::set(const std::vector<int>& alpha, cplx v) {
  int idx = table_->index(MonomialTable::pack(alpha));
  if (idx < 0) throw PreconditionError("monomial beyond jet order");
  c_[idx] = v;
}

Jet Jet::truncated(int order) const {
  if (order > this->order()) throw PreconditionError("cannot raise jet order by truncation");
  Jet r(nvars(), order);
  std::copy(c_.begin(), c_.begin() + r.size(), r.c_.begin());
  return r;
}

double Jet::max_abs() const {
  double m = 0;
  for (const auto& x : c_) m = std::max(m, std::abs(x));
  return m;
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.nvars() != nvars()) throw PreconditionError("jet dimension mismatch");
  if (o.order() < order()) *this = truncated(o.order());
  for (int i = 0; i < size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.nvars() != nvars()) throw PreconditionError("jet dimension mismatch");
  if (o.order() < order()) *this = truncated(o.order());
  for (int i = 0; i < size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(cplx a) {
  for (auto& x : c_) x *= a;
  return *this;
}

Jet Jet::operator*(const Jet& o) const {
  if (o.nvars() != nvars()) throw PreconditionError("jet dimension mismatch");
  const int ord = std::min(order(), o.order());
  Jet r(nvars(), ord);
  const auto& T = *r.table_;
  for (int i = 0; i < T.size(); ++i) {
    if (c_[i] == 0.0) continue;
    const int lim = T.count_upto(ord - table_->degree(i));
    for (int j = 0; j < lim; ++j) {
      if (o.c_[j] == 0.0) continue;
      r.c_[T.index(table_->key(i) + o.table_->key(j))] += c_[i] * o.c_[j];
    }
  }
  return r;
}

Jet Jet::mul_linear(const std::vector<double>& a) const {
  Jet r(nvars(), order() + 1);
  const auto& T = *r.table_;
  for (int i = 0; i < size(); ++i) {
    if (c_[i] == 0.0) continue;
    for (int v = 0; v < nvars(); ++v) {
      if (a[v] == 0.0) continue;
      r.c_[T.index(table_->key(i) + MonomialTable::unit(v))] += a[v] * c_[i];
    }
  }
  return r;
}

Jet Jet::mul_univariate(int var, const std::vector<cplx>& series) const {
  Jet r(nvars(), order());
  const auto& T = *table_;
  const uint64_t u = MonomialTable::unit(var);
  for (int i = 0; i < size(); ++i) {
    const int e = T.exponent(i, var);
    cplx acc = 0;
    for (int m = 0; m <= e && m < static_cast<int>(series.size()); ++m) {
      cplx src = c_[T.index(T.key(i) - u * m)];
      if (src != 0.0) acc += series[m] * src;
    }
    r.c_[i] = acc;
  }
  return r;
}

Jet Jet::compose_linear(const std::vector<std::vector<double>>& A, int new_vars) const {
  const int D = order();
  const int p = nvars();
  if (static_cast<int>(A.size()) != p) throw PreconditionError("composition matrix has wrong row count");
  // Horner scheme over the monomial tree: H(a) = h_a + sum_{i>=last(a)} A_i . H(a + e_i)
  std::function<Jet(uint64_t, int, int)> horner = [&](uint64_t key, int deg, int last) {
    int idx = table_->index(key);
    Jet J = Jet::constant(new_vars, D - deg, idx >= 0 ? c_[idx] : cplx(0));
    if (deg < D)
      for (int i = last; i < p; ++i) J += horner(key + MonomialTable::unit(i), deg + 1, i).mul_linear(A[i]);
    return J;
  };
  return horner(0, 0, 0);
}

Jet Jet::embed(int new_vars, const std::vector<int>& var_map) const {
  Jet r(new_vars, order());
  for (int i = 0; i < size(); ++i) {
    if (c_[i] == 0.0) continue;
    uint64_t k = 0;
    for (int v = 0; v < nvars(); ++v)
      k |= static_cast<uint64_t>(table_->exponent(i, v)) << (4 * var_map[v]);
    r.c_[r.table_->index(k)] = c_[i];
  }
  return r;
}

Jet Jet::external_product(const Jet& o) const {
  const int ord = std::min(order(), o.order());
  const int p1 = nvars();
  Jet r(p1 + o.nvars(), ord);
  for (int i = 0; i < table_->count_upto(ord); ++i) {
    if (c_[i] == 0.0) continue;
    const int lim = o.table_->count_upto(ord - table_->degree(i));
    for (int j = 0; j < lim; ++j) {
      if (o.c_[j] == 0.0) continue;
      r.c_[r.table_->index(table_->key(i) | (o.table_->key(j) << (4 * p1)))] += c_[i] * o.c_[j];
    }
  }
  return r;
}

cplx Jet::evaluate(const std::vector<cplx>& x) const {
  const int D = order();
  std::vector<std::vector<cplx>> pw(nvars(), std::vector<cplx>(D + 1, 1.0));
  for (int v = 0; v < nvars(); ++v)
    for (int k = 1; k <= D; ++k) pw[v][k] = pw[v][k - 1] * x[v];
  cplx s = 0;
  for (int i = 0; i < size(); ++i) {
    if (c_[i] == 0.0) continue;
    cplx m = c_[i];
    for (int v = 0; v < nvars(); ++v) m *= pw[v][table_->exponent(i, v)];
    s += m;
  }
  return s;
}

cplx Jet::evaluate(const std::vector<double>& x) const {
  return evaluate(std::vector<cplx>(x.begin(), x.end()));
}

}  // namespace germrenorm
