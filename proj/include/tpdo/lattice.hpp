#pragma once

#include <vector>

#include "tpdo/indices.hpp"

namespace tpdo {

/// A lattice series split into a symmetric box partial sum and an estimated
/// tail; `tail_uncertainty` bounds |true tail - tail_estimate|.
struct LatticeSum {
  int cutoff = 0;  ///< box half-width L of the partial sum
  double partial = 0.0;
  double tail_estimate = 0.0;
  double tail_uncertainty = 0.0;

  double value() const noexcept { return partial + tail_estimate; }
  /// Certified upper bound on the full series.
  double upper() const noexcept { return value() + tail_uncertainty; }
};

/// sum_{l in Z} |l|^a (1 + l^2)^{-b/2}, b >= a + 2. The tail beyond L is
/// bracketed between the integrals from L+1 and from L (terms decrease there).
LatticeSum weighted_series_1d(int a, int b, double tol = 1e-10);

/// C_p = sum_{l in Z^n} (1 + |l|^2)^{-p}, p > n/2. For n >= 2 the tail is the
/// integral over the complement of the box with a midpoint-rule error bound;
/// the cutoff grows until that bound is below tol or max_cutoff is reached.
LatticeSum lattice_constant(int dim, int p, double tol = 1e-10, int max_cutoff = 2048);

/// S_{alpha,beta} = prod_i sum_l |l|^{alpha_i} (1 + l^2)^{-beta_i/2},
/// requires beta_i >= alpha_i + 2.
struct SeriesProduct {
  std::vector<LatticeSum> factors;
  double value = 0.0;
  double upper = 0.0;
};

SeriesProduct derivative_series(const MultiIndex& alpha, const MultiIndex& beta, double tol = 1e-10);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace tpdo
