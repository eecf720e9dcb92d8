#pragma once

#include <string>
#include <vector>

#include "tpdo/symbol.hpp"

namespace tpdo {

/// rho_m(a) = max over |beta| <= m of sup |d^beta a|.
double seminorm_rho(const PeriodicFunction& a, int m, int oversample = 4);

// ---------------------------------------------------------------------------
// Order test: sup_{|j|<=J, x} (1+|j|)^{-m} |d^alpha a_j(x)| for listed alpha.

struct OrderRow {
  MultiIndex alpha;
  double ratio = 0.0;        ///< M_{alpha,m} over the full box
  double inner_ratio = 0.0;  ///< same over |j|_inf <= J/2
  /// Least-squares slope of log(shell max) against log(1 + r) over the
  /// shells |j|_inf = r >= 1; about s for ratios growing like (1+|j|)^s.
  double shell_slope = 0.0;
  FreqIndex witness_j;
};

struct OrderOptions {
  double bound = 1e6;          ///< B_max
  double growth_tol = 0.05;    ///< relative full/inner excess flagged as growth in J
  /// Growth also needs a shell slope above this, so bounded quasi-periodic
  /// families whose maximum happens to sit in the outer half are not flagged.
  double growth_slope = 0.25;
  int oversample = 4;
  int max_derivative_order = kDefaultMaxDerivativeOrder;
};

struct OrderReport {
  double order = 0.0;
  int cutoff = 0;
  OrderOptions options;
  std::vector<OrderRow> rows;
  double max_ratio = 0.0;
  MultiIndex witness_alpha;
  FreqIndex witness_j;
  bool bounded = false;
  /// The largest ratio keeps growing between J/2 and J.
  bool grows_with_cutoff = false;
};

OrderReport order_test(const DiscreteSymbol& s, double m, const std::vector<MultiIndex>& alphas,
                       const OrderOptions& options = {});

// ---------------------------------------------------------------------------
// Growth fit shared by the symbol-side and orbit-side analyticity tests:
// c_alpha = (M_alpha / alpha!)^{1/(1+|alpha|)}, C* = max c_alpha, and a
// plateau statistic on the per-degree maxima over the upper half of the range.

enum class AnalyticVerdict { uniformly_analytic, not_analytic, inconclusive };

const char* to_string(AnalyticVerdict v);

struct GrowthOptions {
  double slope_tol = 0.05;  ///< max plateau slope (per unit |alpha|) for a positive verdict
  double rise_tol = 0.2;    ///< min relative rise over the upper half for a negative verdict
};

struct GrowthEntry {
  MultiIndex alpha;
  double magnitude = 0.0;  ///< M_alpha
  double c_alpha = 0.0;
};

struct GrowthFit {
  int max_order = 0;
  GrowthOptions options;
  std::vector<GrowthEntry> entries;
  std::vector<double> degree_c;  ///< max c_alpha over |alpha| = d, d = 0..max_order
  double c_star = 0.0;
  double plateau_slope = 0.0;
  double rise = 1.0;             ///< degree_c[max] / degree_c[max/2]
  AnalyticVerdict verdict = AnalyticVerdict::inconclusive;
  std::string diagnostic;
};

/// c_alpha for a single entry, computed in log space.
double growth_constant(double magnitude, const MultiIndex& alpha);

/// Fit the tabulated magnitudes. Requires max_order >= 4 and an entry for
/// every alpha with |alpha| <= max_order.
GrowthFit fit_growth(std::vector<GrowthEntry> entries, int max_order, const GrowthOptions& options = {});

struct AnalyticityOptions {
  GrowthOptions growth;
  int oversample = 4;
  int max_derivative_order = kDefaultMaxDerivativeOrder;
  /// Relative C* change between J/2 and J flagged as cutoff sensitivity.
  double cutoff_tol = 0.1;
  /// Coefficients below this fraction of an entry's largest one are treated
  /// as rounding noise and dropped before differentiating (0 keeps all).
  double rounding_floor = 1e-13;
};

struct AnalyticityReport {
  int cutoff = 0;
  int max_order = 0;
  AnalyticityOptions options;
  GrowthFit fit;
  /// C* recomputed from entries with |j|_inf <= J/2.
  double inner_c_star = 0.0;
  bool cutoff_sensitive = false;
};

/// M_alpha = sup_{j,x} |d^alpha a_j(x)| for |alpha| <= max_order and the fit.
AnalyticityReport analyticity_fit(const DiscreteSymbol& s, int max_order, const AnalyticityOptions& options = {});

}  // namespace tpdo
