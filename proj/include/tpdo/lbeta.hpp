#pragma once

#include <vector>

#include "tpdo/lattice.hpp"
#include "tpdo/quantize.hpp"

namespace tpdo {

/// L^beta u = prod (1 + d_i)^{beta_i} u, i.e. coefficient l times prod (1 + i l_i)^{beta_i}.
PeriodicFunction lbeta_apply(const PeriodicFunction& u, const MultiIndex& beta);
/// Inverse multiplier prod (1 + i l_i)^{-beta_i}; never singular on Z^n.
PeriodicFunction lbeta_inverse(const PeriodicFunction& u, const MultiIndex& beta);

/// (L^beta a_j)_j, the symbol of B^beta. beta = 0 is rejected.
DiscreteSymbol bbeta_build(const DiscreteSymbol& s, const MultiIndex& beta);
/// Entrywise inverse of bbeta_build.
DiscreteSymbol recover_symbol(const DiscreteSymbol& bs, const MultiIndex& beta);

struct BoundChainRecord {
  MultiIndex alpha;
  MultiIndex beta;  ///< alpha + (2, ..., 2)
  int matrix_cutoff = 0;
  double bbeta_norm = 0.0;  ///< ||B^beta|| on |k|_inf <= K
  bool norm_converged = true;  ///< false: bbeta_norm is a Rayleigh lower estimate
  SeriesProduct series;     ///< S_{alpha,beta}
  double bound = 0.0;       ///< bbeta_norm * upper(S)
  /// sup_{|j|<=K, x} |d^alpha a_j| keeping only modes m with |j + m|_inf <= K,
  /// the part of a_j the truncated matrix sees.
  double measured = 0.0;
  double measured_full = 0.0;  ///< same without the mode restriction
  double slack = 0.0;
  bool holds = false;  ///< slack >= -1e-6 * bound
  double alpha_factorial = 0.0;
  double beta_factorial = 0.0;
};

BoundChainRecord bound_chain_check(const DiscreteSymbol& s, const MultiIndex& alpha, int cutoff);

struct MuConstant {
  int p = 0;
  double mu = 0.0;
  double t_star = 0.0;
  double scan_mu = 0.0;  ///< dense-scan cross-check on [0, 10p], step 1e-4
  /// min over a = 0..60 of mu 2^a a! / (a + 2p)!; >= 1 means the inequality holds.
  double min_margin = 0.0;
  int worst_a = 0;
  bool verified = false;
};

/// mu = sup_{t > 0} 2^{-t} (t + 1)(t + 2)...(t + 2p).
MuConstant mu_constant(int p);

struct FactorialShiftRecord {
  int p = 0;
  MultiIndex alpha;
  double mu = 0.0;
  double lhs = 0.0;  ///< prod (alpha_i + 2p)!
  double rhs = 0.0;  ///< mu^n 2^{|alpha|} alpha!
  bool holds = false;
};

/// prod (alpha_i + 2p)! <= mu^n 2^{|alpha|} alpha!, the step that turns the
/// rho_{2p} estimate into a (2C)^{|alpha|} alpha! bound.
FactorialShiftRecord factorial_shift_check(int p, const MultiIndex& alpha);

}  // namespace tpdo
