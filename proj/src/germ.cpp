#include "germrenorm/germ.hpp"

#include "germrenorm/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace germrenorm {

namespace {

std::vector<std::vector<double>> to_double_rows(const std::vector<std::vector<Rational>>& m) {
  std::vector<std::vector<double>> out(m.size());
  for (size_t i = 0; i < m.size(); ++i) {
    out[i].resize(m[i].size());
    for (size_t j = 0; j < m[i].size(); ++j) out[i][j] = to_double(m[i][j]);
  }
  return out;
}

std::vector<std::vector<double>> rows_of(const std::vector<LinearForm>& forms) {
  std::vector<std::vector<double>> out;
  for (const auto& f : forms) out.push_back(f.to_doubles());
  return out;
}

int total_mult(const std::vector<Denominator>& dens) {
  int n = 0;
  for (const auto& d : dens) n += d.mult;
  return n;
}

cplx eval_form(const LinearForm& f, const std::vector<cplx>& x) {
  cplx s = 0;
  for (int i = 0; i < f.dim(); ++i)
    if (f[i] != 0) s += to_double(f[i]) * x[i];
  return s;
}

// Primitive forms, proportional ones merged, sorted canonically.
RawTerm normalize_term(const RawTerm& t) {
  RawTerm out{t.num, {}};
  std::map<LinearForm, int> merged;
  for (const auto& d : t.dens) {
    if (d.form.is_zero()) throw PreconditionError("zero linear form in denominator");
    auto [f, a] = d.form.normalized();
    Rational s = 1;
    for (int k = 0; k < d.mult; ++k) s *= a;
    out.num *= 1.0 / to_double(s);
    merged[f] += d.mult;
  }
  for (auto& [f, m] : merged) out.dens.push_back({f, m});
  std::sort(out.dens.begin(), out.dens.end());
  return out;
}

class Decomposer {
 public:
  Decomposer(int p, int D) : p_(p), D_(D), holo_(p, D) {}

  void run(const Jet& h, const std::vector<Denominator>& dens) {
    const int k = static_cast<int>(dens.size());
    if (k == 0) {
      holo_ += h.truncated(D_);
      return;
    }
    std::vector<LinearForm> forms;
    for (const auto& d : dens) forms.push_back(d.form);
    std::vector<LinearForm> comp = orthogonal_complement(forms, p_);
    std::vector<std::vector<Rational>> B;
    for (const auto& f : forms) B.push_back(f.coeffs());
    for (const auto& f : comp) B.push_back(f.coeffs());
    const auto Bd = to_double_rows(B);
    const auto Binv = to_double_rows(invert(B));

    const Jet hz = h.compose_linear(Binv, p_);
    const auto& T = hz.table();
    Jet holo_z(p_, D_);
    std::map<std::vector<int>, Jet> groups;

    for (int idx = 0; idx < hz.size(); ++idx) {
      const cplx c = hz[idx];
      if (c == 0.0) continue;
      std::vector<int> alpha = T.exponents(idx);
      std::vector<int> dvec(k, 0);
      bool holo = true;
      for (int i = 0; i < k; ++i) {
        dvec[i] = std::max(0, dens[i].mult - alpha[i]);
        if (dvec[i] > 0) holo = false;
      }
      std::vector<int> beta = alpha;
      for (int i = 0; i < k; ++i) beta[i] = dvec[i] > 0 ? 0 : alpha[i] - dens[i].mult;
      if (holo) {
        holo_z[holo_z.table().index(MonomialTable::pack(beta))] += c;
        continue;
      }
      int m = 0;
      for (int v : dvec) m += v;
      auto it = groups.find(dvec);
      if (it == groups.end()) it = groups.emplace(dvec, Jet(p_, D_ + m)).first;
      it->second[it->second.table().index(MonomialTable::pack(beta))] += c;
    }

    holo_ += holo_z.compose_linear(Bd, p_);

    for (auto& [dvec, num_z] : groups) {
      std::vector<Denominator> sub;
      bool all = true;
      for (int i = 0; i < k; ++i) {
        if (dvec[i] > 0) sub.push_back({dens[i].form, dvec[i]});
        else all = false;
      }
      if (all) {
        // numerator lives on the complement coordinates z_k..z_{p-1}
        const int q = p_ - k;
        Jet num(q, num_z.order());
        for (int idx = 0; idx < num_z.size(); ++idx) {
          if (num_z[idx] == 0.0) continue;
          auto a = num_z.table().exponents(idx);
          std::vector<int> b(a.begin() + k, a.end());
          num[num.table().index(MonomialTable::pack(b))] += num_z[idx];
        }
        add_polar(sub, comp, num);
      } else {
        run(num_z.compose_linear(Bd, p_), sub);
      }
    }
  }

  MeromorphicGerm result() {
    MeromorphicGerm g(p_, D_);
    g.holo = holo_;
    for (auto& [key, term] : polar_)
      if (!term.num.is_zero()) g.polar.push_back(term);
    return g;
  }

 private:
  void add_polar(const std::vector<Denominator>& dens, const std::vector<LinearForm>& ell, const Jet& num) {
    auto it = polar_.find(dens);
    if (it == polar_.end()) {
      polar_.emplace(dens, PolarTerm{dens, ell, num});
    } else {
      it->second.num += num;
    }
  }

  int p_, D_;
  Jet holo_;
  std::map<std::vector<Denominator>, PolarTerm> polar_;
};

}  // namespace

int PolarTerm::pole_degree() const { return total_mult(dens); }

Jet PolarTerm::numerator_in_sigma() const {
  const int p = dens.front().form.dim();
  return num.compose_linear(rows_of(ell), p);
}

cplx PolarTerm::evaluate(const std::vector<cplx>& sigma) const {
  std::vector<cplx> z;
  for (const auto& f : ell) z.push_back(eval_form(f, sigma));
  cplx v = num.evaluate(z);
  for (const auto& d : dens) v /= std::pow(eval_form(d.form, sigma), d.mult);
  return v;
}

int MeromorphicGerm::max_pole_degree() const {
  int m = 0;
  for (const auto& t : polar) m = std::max(m, t.pole_degree());
  return m;
}

cplx MeromorphicGerm::evaluate(const std::vector<cplx>& sigma) const {
  cplx v = holo.evaluate(sigma);
  for (const auto& t : polar) v += t.evaluate(sigma);
  return v;
}

cplx MeromorphicGerm::evaluate(const std::vector<double>& sigma) const {
  return evaluate(std::vector<cplx>(sigma.begin(), sigma.end()));
}

void RawGerm::add(Jet num, std::vector<Denominator> dens) {
  if (num.nvars() != dim) throw PreconditionError("raw term dimension mismatch");
  terms.push_back({std::move(num), std::move(dens)});
}

void RawGerm::append(const RawGerm& o) {
  if (o.dim != dim) throw PreconditionError("raw germ dimension mismatch");
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
}

cplx RawGerm::evaluate(const std::vector<cplx>& sigma) const {
  cplx s = 0;
  for (const auto& t : terms) {
    cplx v = t.num.evaluate(sigma);
    for (const auto& d : t.dens) v /= std::pow(eval_form(d.form, sigma), d.mult);
    s += v;
  }
  return s;
}

int RawGerm::attainable_order() const {
  if (terms.empty()) return 0;
  int D = MonomialTable::kMaxOrder;
  for (const auto& t : terms) D = std::min(D, t.num.order() - total_mult(t.dens));
  return D;
}

RawGerm reduce_dependent_denominators(const RawGerm& raw) {
  RawGerm out(raw.dim);
  std::deque<RawTerm> queue;
  for (const auto& t : raw.terms) queue.push_back(normalize_term(t));
  while (!queue.empty()) {
    RawTerm t = std::move(queue.front());
    queue.pop_front();
    // first form lying in the span of its predecessors
    std::vector<LinearForm> prefix;
    int dep = -1;
    std::vector<Rational> coef;
    for (size_t i = 0; i < t.dens.size(); ++i) {
      if (!prefix.empty()) {
        auto c = express_in_span(t.dens[i].form, prefix);
        if (c) {
          dep = static_cast<int>(i);
          coef = *c;
          break;
        }
      }
      prefix.push_back(t.dens[i].form);
    }
    if (dep < 0) {
      out.terms.push_back(std::move(t));
      continue;
    }
    // 1 = sum_i c_i L_i / L_dep
    for (int i = 0; i < dep; ++i) {
      if (coef[i] == 0) continue;
      RawTerm nt{t.num * to_double(coef[i]), {}};
      for (int j = 0; j < static_cast<int>(t.dens.size()); ++j) {
        int m = t.dens[j].mult;
        if (j == i) m -= 1;
        if (j == dep) m += 1;
        if (m > 0) nt.dens.push_back({t.dens[j].form, m});
      }
      queue.push_back(std::move(nt));
    }
  }
  return out;
}

MeromorphicGerm decompose(const RawGerm& raw, int out_order) {
  const int attainable = raw.attainable_order();
  const int D = out_order < 0 ? attainable : out_order;
  if (D > attainable)
    throw PreconditionError("insufficient truncation order: requested " + std::to_string(D) +
                            ", attainable " + std::to_string(attainable));
  RawGerm reduced = reduce_dependent_denominators(raw);
  Decomposer dec(raw.dim, D);
  for (const auto& t : reduced.terms) dec.run(t.num.truncated(D + total_mult(t.dens)), t.dens);
  return dec.result();
}

RawGerm to_raw(const MeromorphicGerm& g) {
  RawGerm r(g.dim);
  r.add(g.holo, {});
  for (const auto& t : g.polar) r.add(t.num.compose_linear(rows_of(t.ell), g.dim), t.dens);
  return r;
}

Jet project_holomorphic(const MeromorphicGerm& g) { return g.holo; }

cplx evaluate_at_base(const Jet& j) { return j[0]; }

MeromorphicGerm external_product(const MeromorphicGerm& a, const MeromorphicGerm& b) {
  const int p1 = a.dim, p2 = b.dim, p = p1 + p2;
  const int D = std::min(a.order() - b.max_pole_degree(), b.order() - a.max_pole_degree());
  if (D < 0) throw PreconditionError("external product: jets too short for the pole orders");
  std::vector<int> map1(p1), map2(p2);
  for (int i = 0; i < p1; ++i) map1[i] = i;
  for (int i = 0; i < p2; ++i) map2[i] = p1 + i;

  auto shift_dens = [](const std::vector<Denominator>& ds, int p, const std::vector<int>& m) {
    std::vector<Denominator> out;
    for (const auto& d : ds) out.push_back({d.form.embed(p, m), d.mult});
    return out;
  };
  auto shift_forms = [](const std::vector<LinearForm>& fs, int p, const std::vector<int>& m) {
    std::vector<LinearForm> out;
    for (const auto& f : fs) out.push_back(f.embed(p, m));
    return out;
  };
  auto coords = [&](int lo, int hi) {
    std::vector<LinearForm> out;
    for (int j = lo; j < hi; ++j) out.push_back(LinearForm::coordinate(p, j));
    return out;
  };

  MeromorphicGerm g(p, D);
  g.holo = a.holo.truncated(D).external_product(b.holo.truncated(D));
  std::map<std::vector<Denominator>, PolarTerm> acc;
  auto put = [&](std::vector<Denominator> dens, std::vector<LinearForm> ell, Jet num) {
    std::sort(dens.begin(), dens.end());
    auto it = acc.find(dens);
    if (it == acc.end()) acc.emplace(dens, PolarTerm{dens, std::move(ell), std::move(num)});
    else it->second.num += num;
  };
  for (const auto& ta : a.polar) {
    const int m1 = ta.pole_degree();
    for (const auto& tb : b.polar) {
      const int m2 = tb.pole_degree();
      auto dens = shift_dens(ta.dens, p, map1);
      auto d2 = shift_dens(tb.dens, p, map2);
      dens.insert(dens.end(), d2.begin(), d2.end());
      auto ell = shift_forms(ta.ell, p, map1);
      auto e2 = shift_forms(tb.ell, p, map2);
      ell.insert(ell.end(), e2.begin(), e2.end());
      const int o = D + m1 + m2;
      put(dens, ell, ta.num.truncated(o).external_product(tb.num.truncated(o)));
    }
    auto ell = shift_forms(ta.ell, p, map1);
    auto e2 = coords(p1, p);
    ell.insert(ell.end(), e2.begin(), e2.end());
    const int o = D + m1;
    put(shift_dens(ta.dens, p, map1), ell, ta.num.truncated(o).external_product(b.holo.truncated(o)));
  }
  for (const auto& tb : b.polar) {
    const int m2 = tb.pole_degree();
    auto ell = coords(0, p1);
    auto e2 = shift_forms(tb.ell, p, map2);
    ell.insert(ell.end(), e2.begin(), e2.end());
    const int o = D + m2;
    put(shift_dens(tb.dens, p, map2), ell, a.holo.truncated(o).external_product(tb.num.truncated(o)));
  }
  for (auto& [k, t] : acc)
    if (!t.num.is_zero()) g.polar.push_back(std::move(t));
  return g;
}

MeromorphicGerm multiply_by_holomorphic(const MeromorphicGerm& g, const Jet& h, int out_order) {
  if (h.nvars() != g.dim) throw PreconditionError("holomorphic factor dimension mismatch");
  RawGerm r = to_raw(g);
  for (auto& t : r.terms) t.num = t.num * h;
  return decompose(r, out_order < 0 ? g.order() : out_order);
}

MeromorphicGerm add(const MeromorphicGerm& a, const MeromorphicGerm& b) {
  RawGerm r = to_raw(a);
  r.append(to_raw(b));
  return decompose(r, std::min(a.order(), b.order()));
}

MeromorphicGerm scale(const MeromorphicGerm& g, cplx a) {
  MeromorphicGerm out = g;
  out.holo *= a;
  for (auto& t : out.polar) t.num *= a;
  return out;
}

MeromorphicGerm embed(const MeromorphicGerm& g, int new_dim, const std::vector<int>& var_map) {
  RawGerm r = to_raw(g);
  RawGerm out(new_dim);
  for (const auto& t : r.terms) {
    std::vector<Denominator> dens;
    for (const auto& d : t.dens) dens.push_back({d.form.embed(new_dim, var_map), d.mult});
    out.add(t.num.embed(new_dim, var_map), dens);
  }
  return decompose(out, g.order());
}

MeromorphicGerm permute_variables(const MeromorphicGerm& g, const std::vector<int>& perm) {
  return embed(g, g.dim, perm);
}

std::vector<LinearForm> realized_poles(const MeromorphicGerm& g, double rel_tol) {
  double scale = g.holo.max_abs();
  for (const auto& t : g.polar) scale = std::max(scale, t.num.max_abs());
  std::vector<LinearForm> out;
  for (const auto& t : g.polar) {
    if (t.num.max_abs() <= rel_tol * scale) continue;
    for (const auto& d : t.dens) out.push_back(d.form);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace germrenorm
