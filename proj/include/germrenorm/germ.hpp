#pragma once

#include <vector>

#include "germrenorm/jet.hpp"
#include "germrenorm/linear_form.hpp"

namespace germrenorm {

struct Denominator {
  LinearForm form;
  int mult = 1;
  bool operator==(const Denominator& o) const { return mult == o.mult && form == o.form; }
  bool operator<(const Denominator& o) const {
    if (form != o.form) return form < o.form;
    return mult < o.mult;
  }
};

/// h(ell sigma) / prod L_i^{n_i} with the rows of ell Q*-orthogonal to every L_i.
struct PolarTerm {
  std::vector<Denominator> dens;
  std::vector<LinearForm> ell;
  Jet num;  // in ell.size() variables, order = germ order + total multiplicity

  int pole_degree() const;
  cplx evaluate(const std::vector<cplx>& sigma) const;
  Jet numerator_in_sigma() const;  // num(ell sigma) as a jet in sigma
};

struct MeromorphicGerm {
  int dim = 0;
  std::vector<PolarTerm> polar;
  Jet holo;

  MeromorphicGerm() = default;
  MeromorphicGerm(int p, int order) : dim(p), holo(p, order) {}

  int order() const { return holo.order(); }
  int max_pole_degree() const;
  std::vector<double> base() const { return std::vector<double>(dim, 1.0); }
  cplx evaluate(const std::vector<cplx>& sigma) const;
  cplx evaluate(const std::vector<double>& sigma) const;
};

struct RawTerm {
  Jet num;  // in sigma
  std::vector<Denominator> dens;
};

struct RawGerm {
  int dim = 0;
  std::vector<RawTerm> terms;

  RawGerm() = default;
  explicit RawGerm(int p) : dim(p) {}
  void add(Jet num, std::vector<Denominator> dens);
  void append(const RawGerm& o);
  cplx evaluate(const std::vector<cplx>& sigma) const;
  // smallest (order - total multiplicity) over terms: the attainable output order
  int attainable_order() const;
};

/// Merges proportional forms and applies partial fractions until every term
/// has linearly independent primitive denominators.
RawGerm reduce_dependent_denominators(const RawGerm& raw);

/// Canonical split into Q*-orthogonal polar terms plus a holomorphic jet of the
/// given order; out_order < 0 selects the attainable order.
MeromorphicGerm decompose(const RawGerm& raw, int out_order = -1);

RawGerm to_raw(const MeromorphicGerm& g);

Jet project_holomorphic(const MeromorphicGerm& g);
cplx evaluate_at_base(const Jet& j);

MeromorphicGerm external_product(const MeromorphicGerm& a, const MeromorphicGerm& b);
MeromorphicGerm multiply_by_holomorphic(const MeromorphicGerm& g, const Jet& h, int out_order = -1);
MeromorphicGerm add(const MeromorphicGerm& a, const MeromorphicGerm& b);
MeromorphicGerm scale(const MeromorphicGerm& g, cplx a);

/// Old variable i becomes variable perm[i].
MeromorphicGerm permute_variables(const MeromorphicGerm& g, const std::vector<int>& perm);
MeromorphicGerm embed(const MeromorphicGerm& g, int new_dim, const std::vector<int>& var_map);

/// Distinct denominator forms of polar terms whose numerator exceeds
/// rel_tol times the germ's largest coefficient.
std::vector<LinearForm> realized_poles(const MeromorphicGerm& g, double rel_tol = 1e-9);

}  // namespace germrenorm
