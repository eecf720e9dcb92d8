#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tpdo/classify.hpp"
#include "tpdo/quantize.hpp"

namespace tpdo {

/// f(y) = T_y A T_{-y} = Op(T_y a_j), evaluated through the symbol side.
TruncatedOperator orbit_eval(const DiscreteSymbol& s, std::span<const double> y, int cutoff);

/// Exact orbit derivative d^alpha_y f(y) = (-1)^{|alpha|} T_y A^alpha T_{-y}
/// with A^alpha = Op(d^alpha a_j). The sign comes from d/dy a(x - y) = -a'(x - y).
TruncatedOperator orbit_derivative_exact(const DiscreteSymbol& s, const MultiIndex& alpha,
                                         std::span<const double> y, int cutoff);

/// Central finite-difference weights for the given derivative order on
/// offsets -r..r (Fornberg's recursion), r chosen for accuracy order 4.
std::vector<double> central_weights(int derivative_order, int accuracy_order = 4);

struct OrbitDerivativeRecord {
  MultiIndex alpha;
  std::vector<double> y;
  double step = 0.0;
  int scheme_order = 4;
  double fd_estimate = 0.0;     ///< ||FD approximation of d^alpha f(y)||
  double exact_norm = 0.0;      ///< ||T_y A^alpha T_{-y}||
  double identity_error = 0.0;  ///< ||FD - (-1)^{|alpha|} T_y A^alpha T_{-y}||
};

/// Needs |alpha| <= 4 and h in [1e-4, 1e-1]; the stencil is applied along
/// each coordinate in turn to orbit_eval.
OrbitDerivativeRecord orbit_derivative_check(const DiscreteSymbol& s, const MultiIndex& alpha,
                                             std::span<const double> y, double step, int cutoff);

struct RichardsonRecord {
  OrbitDerivativeRecord coarse;
  OrbitDerivativeRecord fine;  ///< step / 2
  double ratio = 0.0;          ///< coarse.identity_error / fine.identity_error (0 if both vanish)
  bool resolved = false;       ///< errors above the rounding floor, ratio meaningful
};

RichardsonRecord richardson_check(const DiscreteSymbol& s, const MultiIndex& alpha, std::span<const double> y,
                                  double step, int cutoff, double floor = 1e-13);

struct OrbitGrowthTable {
  int matrix_cutoff = 0;
  GrowthFit fit;  ///< magnitudes are ||A^alpha|| on the truncated space
  /// Largest | ||T_y A^alpha T_{-y}|| - ||A^alpha|| | over the sampled y.
  double max_conjugation_deviation = 0.0;
  std::size_t sampled_points = 0;
};

/// ||A^alpha|| for |alpha| <= max_order, with a_j cleaned by drop_below(rounding_floor)
/// first (the same treatment analyticity_fit gives the symbol side).
OrbitGrowthTable orbit_growth_table(const DiscreteSymbol& s, int max_order, int cutoff,
                                    const std::vector<std::vector<double>>& y_samples = {},
                                    const GrowthOptions& options = {}, double rounding_floor = 1e-13);

/// Columns: alpha,norm,c_alpha; multi-index components joined with ':'.
void write_growth_csv(const GrowthFit& fit, std::ostream& os);

struct TaylorRemainderRow {
  int degree = 0;
  double max_remainder = 0.0;
  double ratio_to_previous = 0.0;  ///< 0 for the first row
};

struct TaylorRemainderReport {
  std::vector<double> center;
  double radius = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<TaylorRemainderRow> rows;
  bool geometric_decay = false;  ///< every ratio_to_previous < 1 (or remainder at rounding level)
};

/// max over sampled |y - y0|_inf <= r of ||f(y) - P_D(y)|| with
/// P_D(y) = sum_{|alpha| <= D} (y - y0)^alpha / alpha! d^alpha f(y0).
TaylorRemainderReport taylor_remainder_check(const DiscreteSymbol& s, std::span<const double> center,
                                             const std::vector<int>& degrees, double radius, std::size_t samples,
                                             int cutoff, std::uint64_t seed = 7, double floor = 1e-13);

/// Operator norm used for differences and remainders: largest singular value
/// from a dense SVD.
double difference_norm(const TruncatedOperator& a);

}  // namespace tpdo
