#pragma once

#include "tpdo/lattice.hpp"
#include "tpdo/operator.hpp"
#include "tpdo/symbol.hpp"

namespace tpdo {

struct ApplyOptions {
  /// Fraction of the input energy outside |j|_inf <= J above which apply warns.
  double cutoff_warning = 1e-10;
  /// Escalate the cutoff warning to Error(cutoff).
  bool strict = false;
};

struct ApplyResult {
  PeriodicFunction value;
  double discarded_energy_fraction = 0.0;
  bool cutoff_warning = false;
};

/// A u = (2 pi)^{-n} sum_{|j|_inf <= J} a_j e_j u_hat_j, each product a_j e_j
/// formed on the 2x zero-padded grid.
ApplyResult apply_detailed(const DiscreteSymbol& s, const PeriodicFunction& u, const ApplyOptions& options = {});
PeriodicFunction apply(const DiscreteSymbol& s, const PeriodicFunction& u, const ApplyOptions& options = {});

/// Matrix of Op(a_j) on |k|_inf <= K: M(l, k) = (a_k)^_{l-k} / (2 pi)^n.
/// Requires K <= J and K + bandwidth(s) <= N/2, so that a_k e_k is still
/// resolved on the grid.
TruncatedOperator to_matrix(const DiscreteSymbol& s, int cutoff, double bandwidth_tol = 1e-10);

/// Matrix of Op(d^alpha a_j). Differentiation keeps the band of a_j but lifts
/// rounding noise in the top modes, so resolution is checked on s itself.
TruncatedOperator derivative_matrix(const DiscreteSymbol& s, const MultiIndex& alpha, int cutoff,
                                    double bandwidth_tol = 1e-10);

/// Matrix straight from the coefficients, without the resolution check.
/// Needs 2K <= N/2 - 1 so every offset l - k is stored.
TruncatedOperator coefficient_matrix(const DiscreteSymbol& s, int cutoff);

/// Read a_j = e_{-j} (A e_j) off column j for |j|_inf <= J_out, keeping modes
/// |m|_inf <= bandwidth (default K - J_out) so every coefficient comes from
/// inside the matrix. The result lives on `grid`.
DiscreteSymbol extract_symbol(const TruncatedOperator& a, int out_cutoff, const TorusGrid& grid, int bandwidth = -1);

/// Coefficient-wise distance between two symbols over modes |m|_inf <= bandwidth
/// and |j|_inf <= cutoff (the interior where extraction is exact).
double interior_symbol_diff(const DiscreteSymbol& a, const DiscreteSymbol& b, int cutoff, int bandwidth);

/// Check of ||Op(a_j)|| <= C_p sup_{j,x} |(1 - Laplacian)^p a_j(x)| on the
/// truncated space.
struct NormBoundRecord {
  int dim = 0;
  int p = 0;
  int matrix_cutoff = 0;
  int symbol_cutoff = 0;
  LatticeSum c_p;
  double sup_term = 0.0;
  double bound = 0.0;     ///< upper(C_p) * sup_term
  double measured = 0.0;  ///< power-iteration norm of the truncated matrix
  double slack = 0.0;
  double tolerance = 1e-8;
  bool holds = false;
  NormEstimate norm_estimate;
};

NormBoundRecord norm_bound_check(const DiscreteSymbol& s, int p, int cutoff, double tolerance = 1e-8,
                                 const PowerIterationOptions& power = {});

}  // namespace tpdo
