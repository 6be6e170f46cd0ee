#include "germrenorm/linear_form.hpp"

#include "germrenorm/errors.hpp"

#include <boost/multiprecision/integer.hpp>

namespace germrenorm {

using boost::multiprecision::cpp_int;

Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(cpp_int(s));
    cpp_int num(s.substr(0, slash));
    cpp_int den(s.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in rational '" + s + "'");
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const InputError*>(&e)) throw;
    throw InputError("malformed rational '" + s + "'");
  }
}

std::string rational_to_string(const Rational& r) {
  auto num = boost::multiprecision::numerator(r);
  auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

LinearForm LinearForm::coordinate(int p, int i) {
  LinearForm f = zero(p);
  f.c_[i] = 1;
  return f;
}

LinearForm LinearForm::sum_of(int p, const std::vector<int>& idx, const Rational& scale) {
  LinearForm f = zero(p);
  for (int i : idx) f.c_[i] += scale;
  return f;
}

bool LinearForm::is_zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

std::vector<double> LinearForm::to_doubles() const {
  std::vector<double> out(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) out[i] = to_double(c_[i]);
  return out;
}

double LinearForm::eval(const std::vector<double>& sigma) const {
  double s = 0;
  for (size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) s += to_double(c_[i]) * sigma[i];
  return s;
}

LinearForm LinearForm::operator+(const LinearForm& o) const {
  LinearForm r = *this;
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
  return r;
}

LinearForm LinearForm::operator-(const LinearForm& o) const {
  LinearForm r = *this;
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
  return r;
}

LinearForm LinearForm::operator*(const Rational& a) const {
  LinearForm r = *this;
  for (auto& x : r.c_) x *= a;
  return r;
}

bool LinearForm::operator<(const LinearForm& o) const {
  if (c_.size() != o.c_.size()) return c_.size() < o.c_.size();
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] != o.c_[i]) return c_[i] > o.c_[i];  // larger leading coefficient first
  }
  return false;
}

std::pair<LinearForm, Rational> LinearForm::normalized() const {
  if (is_zero()) throw PreconditionError("cannot normalize the zero form");
  cpp_int l = 1;
  for (const auto& x : c_)
    if (x != 0) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x));
  std::vector<cpp_int> ints(c_.size());
  cpp_int g = 0;
  for (size_t i = 0; i < c_.size(); ++i) {
    Rational v = c_[i] * Rational(l);
    ints[i] = boost::multiprecision::numerator(v);
    g = boost::multiprecision::gcd(g, ints[i]);
  }
  if (g < 0) g = -g;
  int sign = 1;
  for (const auto& v : ints) {
    if (v != 0) {
      sign = v > 0 ? 1 : -1;
      break;
    }
  }
  std::vector<Rational> out(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) out[i] = Rational(ints[i] * sign, g);
  // *this = scale * out, with scale = sign * g / l
  Rational scale(cpp_int(g * sign), l);
  return {LinearForm(std::move(out)), scale};
}

LinearForm LinearForm::embed(int new_dim, const std::vector<int>& var_map) const {
  LinearForm f = zero(new_dim);
  for (size_t i = 0; i < c_.size(); ++i) f.c_[var_map[i]] = c_[i];
  return f;
}

std::string LinearForm::to_string() const {
  std::string s;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    Rational a = c_[i];
    if (!first) s += a > 0 ? " + " : " - ";
    else if (a < 0) s += "-";
    if (a < 0) a = -a;
    if (a != 1) s += rational_to_string(a) + "*";
    s += "s" + std::to_string(i + 1);
    first = false;
  }
  return first ? "0" : s;
}

Rational qstar_inner(const LinearForm& a, const LinearForm& b) {
  if (a.dim() != b.dim()) throw InputError("dimension mismatch in Q* inner product");
  Rational s = 0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

namespace {

// Row reduction pivoting on the first ncols columns; returns rank.
int echelon(std::vector<std::vector<Rational>>& m, int ncols) {
  const int width = m.empty() ? 0 : static_cast<int>(m.front().size());
  int r = 0;
  for (int c = 0; c < ncols && r < static_cast<int>(m.size()); ++c) {
    int piv = -1;
    for (int i = r; i < static_cast<int>(m.size()); ++i)
      if (m[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    for (int i = 0; i < static_cast<int>(m.size()); ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (int k = c; k < width; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

}  // namespace

int rank(const std::vector<LinearForm>& forms) {
  if (forms.empty()) return 0;
  std::vector<std::vector<Rational>> m;
  for (const auto& f : forms) m.push_back(f.coeffs());
  return echelon(m, forms.front().dim());
}

std::optional<std::vector<Rational>> express_in_span(const LinearForm& target,
                                                     const std::vector<LinearForm>& basis) {
  // Solve sum c_i basis_i = target via the augmented transpose system.
  const int p = target.dim();
  const int k = static_cast<int>(basis.size());
  std::vector<std::vector<Rational>> m(p, std::vector<Rational>(k + 1));
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < k; ++i) m[j][i] = basis[i][j];
    m[j][k] = target[j];
  }
  std::vector<int> pivcol;
  int r = 0;
  for (int c = 0; c < k && r < p; ++c) {
    int piv = -1;
    for (int i = r; i < p; ++i)
      if (m[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    Rational inv = 1 / m[r][c];
    for (int kk = c; kk <= k; ++kk) m[r][kk] *= inv;
    for (int i = 0; i < p; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (int kk = c; kk <= k; ++kk) m[i][kk] -= f * m[r][kk];
    }
    pivcol.push_back(c);
    ++r;
  }
  for (int i = r; i < p; ++i)
    if (m[i][k] != 0) return std::nullopt;
  std::vector<Rational> c(k);
  for (int i = 0; i < r; ++i) c[pivcol[i]] = m[i][k];
  return c;
}

std::vector<LinearForm> orthogonal_complement(const std::vector<LinearForm>& forms, int p) {
  std::vector<std::vector<Rational>> ortho;  // orthogonal basis built so far
  auto project_out = [&](std::vector<Rational> v) {
    for (const auto& u : ortho) {
      Rational uu = 0, uv = 0;
      for (int i = 0; i < p; ++i) {
        uu += u[i] * u[i];
        uv += u[i] * v[i];
      }
      if (uv == 0) continue;
      Rational f = uv / uu;
      for (int i = 0; i < p; ++i) v[i] -= f * u[i];
    }
    return v;
  };
  auto nonzero = [&](const std::vector<Rational>& v) {
    for (const auto& x : v)
      if (x != 0) return true;
    return false;
  };
  for (const auto& f : forms) {
    auto v = project_out(f.coeffs());
    if (nonzero(v)) ortho.push_back(std::move(v));
  }
  std::vector<LinearForm> out;
  for (int j = 0; j < p; ++j) {
    std::vector<Rational> e(p);
    e[j] = 1;
    auto v = project_out(e);
    if (!nonzero(v)) continue;
    ortho.push_back(v);
    out.push_back(LinearForm(v).normalized().first);
  }
  return out;
}

std::vector<std::vector<Rational>> invert(const std::vector<std::vector<Rational>>& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(2 * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = rows[i][j];
    m[i][n + i] = 1;
  }
  if (echelon(m, n) < n) throw PreconditionError("singular change of basis");
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i) {
    // echelon leaves pivots in order on the diagonal for full rank
    Rational d = m[i][i];
    for (int j = 0; j < n; ++j) inv[i][j] = m[i][n + j] / d;
  }
  return inv;
}

}  // namespace germrenorm
