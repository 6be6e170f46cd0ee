#pragma once

#include <vector>

#include "germrenorm/chi.hpp"
#include "germrenorm/continuation.hpp"
#include "germrenorm/germ.hpp"

namespace germrenorm {

struct AmplitudeConfig {
  QuadratureConfig quad;
  int order = -1;       // sigma-jet order D; negative selects the default
  int heat_order = -1;  // p; negative selects the default
};

struct AmplitudeGermResult {
  MeromorphicGerm germ;
  std::vector<LinearForm> realized_poles;
  double quad_error = 0;
  long sectors = 0;
};

/// Largest number of non-positive sector exponents over all orderings, plus two.
int default_jet_order(const LabelledGraph& g, int d);
/// Heat-expansion order used for massive tails: floor(d/2), zero when massless.
int default_heat_order(const FlatGeometry& geom);

struct LabelledRaw {
  RawGerm raw;
  double quad_error = 0;
  long sectors = 0;
};

/// Sum over all sector charts of the continued cube integrals, times the
/// reciprocal Gamma jet and (4 pi)^{-dE/2}; not yet decomposed.
LabelledRaw labelled_amplitude_raw(const LabelledGraph& g, const TestFunction& phi, const FlatGeometry& geom,
                                   const QuadratureConfig& cfg, int order, const std::vector<ExtraEdge>& extras = {});

AmplitudeGermResult labelled_amplitude_germ(const LabelledGraph& g, const TestFunction& phi, const FlatGeometry& geom,
                                            const QuadratureConfig& cfg, int order = -1,
                                            const std::vector<ExtraEdge>& extras = {});

/// Sector-sum value at a real point s where every remainder integral converges.
double labelled_amplitude_at(const LabelledGraph& g, const std::vector<double>& s, const TestFunction& phi,
                             const FlatGeometry& geom, const QuadratureConfig& cfg,
                             const std::vector<ExtraEdge>& extras = {});

/// Nested tanh-sinh over the heat times in the original variables, Gaussian
/// pairing in x. Needs Re(s_e) >= d/2 + 1/2 and an isotropic metric.
double direct_amplitude_oracle(const LabelledGraph& g, const std::vector<double>& s, const TestFunction& phi,
                               const FlatGeometry& geom, int nodes = 101);

/// Germ of <t_G(s), phi> at s = (1, ..., 1): every edge subset E1 is a head
/// graph with heat-expanded labels, the remaining edges enter as tail factors
/// at s = 1. `fixed` edges are extra smooth factors outside the germ.
AmplitudeGermResult assemble_full_amplitude(const FeynmanGraph& g, const TestFunction& phi, const FlatGeometry& geom,
                                            const AmplitudeConfig& cfg, const std::vector<ExtraEdge>& fixed = {});

}  // namespace germrenorm
