#pragma once

#include <string>
#include <vector>

#include "germrenorm/amplitude.hpp"

namespace germrenorm {

struct RenormResult {
  cplx value;
  MeromorphicGerm germ;
  Jet holo_jet;
  std::vector<LinearForm> realized_poles;
  double quad_error = 0;
  long sectors = 0;
};

/// ev o pi of the full amplitude germ.
RenormResult renormalize(const FeynmanGraph& g, const TestFunction& phi, const FlatGeometry& geom,
                         const AmplitudeConfig& cfg, const std::vector<ExtraEdge>& fixed = {});

/// int phi prod_e G^1(x_a, x_b) with every Green factor written as a
/// superposition of Gaussians in the Schwinger time. Valid off the diagonals;
/// tau_min > 0 drops the short-distance part, where a Gaussian phi still has
/// a (tiny) mass but t_G may not be integrable.
double direct_pairing(const FeynmanGraph& g, const TestFunction& phi, const FlatGeometry& geom, int tau_nodes,
                      double tau_min = 0.0);

/// Cutoff for Green factors paired with points at least `distance` apart:
/// dropped heat times reach distance/2 with weight below e^{-40}.
double off_diagonal_tau_min(double distance);

/// Smallest center separation between distinct points over all terms, in
/// units of the largest width of the term.
double diagonal_separation(const TestFunction& phi);

struct CheckReport {
  std::string name;
  double lhs = 0, rhs = 0;
  double discrepancy = 0;  // relative unless both sides vanish
  double tolerance = 0;
  double quad_error = 0;
  bool pass = false;
  std::string warning;
};

CheckReport make_report(std::string name, double lhs, double rhs, double tolerance, bool exact = false);

CheckReport check_extension(const FeynmanGraph& g, const TestFunction& phi, const FlatGeometry& geom,
                            const AmplitudeConfig& cfg, double tolerance = 1e-4);

/// phi_u lives on the vertices of I in increasing id order, phi_v on the rest.
CheckReport check_locality(const FeynmanGraph& g, const std::vector<int>& inside_ids, const TestFunction& phi_u,
                           const TestFunction& phi_v, const FlatGeometry& geom, const AmplitudeConfig& cfg,
                           double tolerance = 1e-3);

CheckReport check_translation(const FeynmanGraph& g, const TestFunction& phi, const std::vector<double>& shift,
                              const FlatGeometry& geom, const AmplitudeConfig& cfg, double tolerance = 1e-4);

/// Vertex relabelling, embedding with an unused vertex, and edge permutation.
std::vector<CheckReport> check_compatibility(const FeynmanGraph& g, const TestFunction& phi,
                                             const FlatGeometry& geom, const AmplitudeConfig& cfg);

}  // namespace germrenorm
