#ifndef STOMOYAL_GAUSSIAN_MOMENTS_HPP
#define STOMOYAL_GAUSSIAN_MOMENTS_HPP

#include <vector>

#include "stomoyal/functional_algebra.hpp"

namespace stomoyal {

// Law of the atlas variables: Sigma[i][j] = inner(h_i, h_j) when the
// variables share a Wiener factor, 0 across factors (the two factors are
// independent).
struct CovarianceModel {
  std::vector<std::vector<Rational>> sigma;
};

CovarianceModel covariance_matrix(const VariableAtlas& atlas);

inline constexpr int kDefaultDegreeCap = 12;

// Exact expectation under the Wiener measure by the Gaussian pairing
// formula: monomials expand to index multisets, odd ones vanish, even ones
// sum products of covariances over perfect matchings (memoized). Refuses
// monomials above the degree cap; the matching count grows as (d-1)!!.
Rational expectation_exact(const PolynomialFunctional& f,
                           int degree_cap = kDefaultDegreeCap);

// The functional |grad^r F|^2: full contraction of the order-r derivative
// tensor against itself, slot kernels paired within the same Wiener factor
// only. This is the integrand shared by the exact norm and its Monte Carlo
// estimator.
PolynomialFunctional gradient_norm_squared(const PolynomialFunctional& f,
                                           int r);

struct SobolevNorm {
  Rational squared;  // exact E[|grad^r F|^2]
  double value;      // its nonnegative square root
};

// ||F||_{r,2} = E[|grad^r F|^2]^{1/2}, the p = 2 Sobolev norm; the squared
// value is exact.
SobolevNorm sobolev_norm_exact_p2(const PolynomialFunctional& f, int r,
                                  int degree_cap = kDefaultDegreeCap);

}  // namespace stomoyal

#endif
