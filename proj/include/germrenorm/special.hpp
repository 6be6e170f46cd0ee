#pragma once

#include <vector>

#include "germrenorm/jet.hpp"

namespace germrenorm {

cplx lgamma_complex(cplx z);
/// 1/Gamma(z); entire, exactly zero at non-positive integers.
cplx rgamma(cplx z);

/// Taylor coefficients of 1/Gamma(1+x) about x = 0 through x^order.
std::vector<double> rgamma1_series(int order);

/// prod_i 1/Gamma(1 + sigma_i) as a jet in p variables.
Jet reciprocal_gamma_jet(int p, int order);

/// Taylor coefficients of exp(a x) through x^order.
std::vector<double> exp_series(double a, int order);

}  // namespace germrenorm
