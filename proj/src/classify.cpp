#include "tpdo/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "tpdo/error.hpp"

namespace tpdo {

namespace {

/// Distinct coefficient buffers of a symbol with the box positions using them.
struct UniqueEntries {
  std::vector<const PeriodicFunction*> functions;
  std::vector<std::vector<std::size_t>> positions;
};

UniqueEntries unique_entries(const DiscreteSymbol& s) {
  UniqueEntries u;
  std::map<const void*, std::size_t> index;
  auto entries = s.entries();
  for (std::size_t p = 0; p < entries.size(); ++p) {
    const void* key = entries[p].coefficients().data();
    auto [it, inserted] = index.emplace(key, u.functions.size());
    if (inserted) {
      u.functions.push_back(&entries[p]);
      u.positions.emplace_back();
    }
    u.positions[it->second].push_back(p);
  }
  return u;
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace

double seminorm_rho(const PeriodicFunction& a, int m, int oversample) {
  if (m < 0) throw Error(ErrorKind::invalid_argument, "seminorm order must be >= 0");
  double r = 0.0;
  for (const auto& beta : multi_indices_up_to(a.grid().dim(), m)) {
    r = std::max(r, sup_norm(derivative(a, beta, std::max(m, kDefaultMaxDerivativeOrder)), oversample));
  }
  return r;
}

namespace {

double shell_slope(const std::vector<double>& shell) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (std::size_t r = 1; r < shell.size(); ++r) {
    if (!(shell[r] > 0.0) || !std::isfinite(shell[r])) continue;
    const double x = std::log1p(static_cast<double>(r)), y = std::log(shell[r]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++count;
  }
  const double den = count * sxx - sx * sx;
  return count >= 2 && den > 0.0 ? (count * sxy - sx * sy) / den : 0.0;
}

}  // namespace

OrderReport order_test(const DiscreteSymbol& s, double m, const std::vector<MultiIndex>& alphas,
                       const OrderOptions& options) {
  if (alphas.empty()) throw Error(ErrorKind::invalid_argument, "order test needs at least one multi-index");
  OrderReport rep;
  rep.order = m;
  rep.cutoff = s.cutoff();
  rep.options = options;
  rep.witness_alpha = alphas.front();
  rep.witness_j = FreqIndex(s.dim());
  const auto uniq = unique_entries(s);
  const int inner = s.cutoff() / 2;
  for (const auto& alpha : alphas) {
    OrderRow row{alpha, 0.0, 0.0, 0.0, FreqIndex(s.dim())};
    std::vector<double> shell(static_cast<std::size_t>(s.cutoff()) + 1, 0.0);
    for (std::size_t u = 0; u < uniq.functions.size(); ++u) {
      const double sup =
          sup_norm(derivative(*uniq.functions[u], alpha, options.max_derivative_order), options.oversample);
      for (std::size_t p : uniq.positions[u]) {
        const FreqIndex j = s.freq_of(p);
        const double ratio = std::pow(1.0 + j.euclidean_norm(), -m) * sup;
        if (ratio > row.ratio) {
          row.ratio = ratio;
          row.witness_j = j;
        }
        if (j.sup_norm() <= inner) row.inner_ratio = std::max(row.inner_ratio, ratio);
        auto& sh = shell[static_cast<std::size_t>(j.sup_norm())];
        sh = std::max(sh, ratio);
      }
    }
    row.shell_slope = shell_slope(shell);
    if (row.ratio > rep.max_ratio || rep.rows.empty()) {
      rep.max_ratio = std::max(rep.max_ratio, row.ratio);
      rep.witness_alpha = row.alpha;
      rep.witness_j = row.witness_j;
    }
    if (row.ratio > (1.0 + options.growth_tol) * row.inner_ratio && row.shell_slope > options.growth_slope) {
      rep.grows_with_cutoff = true;
    }
    rep.rows.push_back(row);
  }
  rep.bounded = std::isfinite(rep.max_ratio) && rep.max_ratio <= options.bound;
  return rep;
}

const char* to_string(AnalyticVerdict v) {
  switch (v) {
    case AnalyticVerdict::uniformly_analytic: return "uniformly-analytic";
    case AnalyticVerdict::not_analytic: return "not-analytic";
    case AnalyticVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double growth_constant(double magnitude, const MultiIndex& alpha) {
  if (magnitude == 0.0) return 0.0;
  if (!std::isfinite(magnitude)) return std::numeric_limits<double>::infinity();
  return std::exp((std::log(magnitude) - alpha.log_factorial()) / (1.0 + alpha.order()));
}

GrowthFit fit_growth(std::vector<GrowthEntry> entries, int max_order, const GrowthOptions& options) {
  if (max_order < 4) throw Error(ErrorKind::invalid_argument, "growth fit needs a maximal order >= 4");
  GrowthFit fit;
  fit.max_order = max_order;
  fit.options = options;
  fit.degree_c.assign(static_cast<std::size_t>(max_order) + 1, -1.0);
  bool finite = true;
  for (auto& e : entries) {
    e.c_alpha = growth_constant(e.magnitude, e.alpha);
    const int d = e.alpha.order();
    if (d > max_order) continue;
    finite = finite && std::isfinite(e.c_alpha);
    fit.degree_c[static_cast<std::size_t>(d)] = std::max(fit.degree_c[static_cast<std::size_t>(d)], e.c_alpha);
    fit.c_star = std::max(fit.c_star, e.c_alpha);
  }
  fit.entries = std::move(entries);
  for (std::size_t d = 0; d < fit.degree_c.size(); ++d) {
    if (fit.degree_c[d] < 0.0) {
      throw Error(ErrorKind::invalid_argument, "growth table lacks derivatives of order " + std::to_string(d));
    }
  }
  if (!finite) {
    fit.verdict = AnalyticVerdict::inconclusive;
    fit.diagnostic = "non-finite derivative magnitude";
    return fit;
  }
  const int lo = (max_order + 1) / 2;
  std::vector<double> xs, ys;
  for (int d = lo; d <= max_order; ++d) {
    xs.push_back(d);
    ys.push_back(fit.degree_c[static_cast<std::size_t>(d)]);
  }
  fit.plateau_slope = least_squares_slope(xs, ys);
  const double c_lo = fit.degree_c[static_cast<std::size_t>(lo)];
  const double c_hi = fit.degree_c[static_cast<std::size_t>(max_order)];
  fit.rise = c_lo > 0.0 ? c_hi / c_lo : (c_hi > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  if (fit.plateau_slope <= options.slope_tol) {
    fit.verdict = AnalyticVerdict::uniformly_analytic;
    fit.diagnostic = "c_alpha plateaus over orders " + std::to_string(lo) + ".." + std::to_string(max_order) +
                     " (heuristic: finitely many derivatives cannot prove analyticity)";
  } else if (fit.rise > 1.0 + options.rise_tol) {
    fit.verdict = AnalyticVerdict::not_analytic;
    fit.diagnostic = "c_alpha keeps growing over orders " + std::to_string(lo) + ".." + std::to_string(max_order);
  } else {
    fit.verdict = AnalyticVerdict::inconclusive;
    fit.diagnostic = "plateau slope above tolerance but rise below the growth threshold";
  }
  return fit;
}

AnalyticityReport analyticity_fit(const DiscreteSymbol& s, int max_order, const AnalyticityOptions& options) {
  AnalyticityReport rep;
  rep.cutoff = s.cutoff();
  rep.max_order = max_order;
  rep.options = options;
  if (max_order < 4) throw Error(ErrorKind::invalid_argument, "analyticity fit needs A_max >= 4");
  if (max_order > options.max_derivative_order) {
    rep.fit.max_order = max_order;
    rep.fit.options = options.growth;
    rep.fit.verdict = AnalyticVerdict::inconclusive;
    rep.fit.diagnostic = "A_max = " + std::to_string(max_order) + " exceeds the differentiation cap " +
                         std::to_string(options.max_derivative_order);
    return rep;
  }
  const auto uniq = unique_entries(s);
  const int inner = s.cutoff() / 2;
  std::vector<GrowthEntry> full, inner_entries;
  std::vector<PeriodicFunction> clean;
  clean.reserve(uniq.functions.size());
  for (const auto* f : uniq.functions) {
    clean.push_back(options.rounding_floor > 0.0 ? drop_below(*f, options.rounding_floor) : *f);
  }
  for (const auto& alpha : multi_indices_up_to(s.dim(), max_order)) {
    double m_full = 0.0, m_inner = 0.0;
    for (std::size_t u = 0; u < uniq.functions.size(); ++u) {
      const double sup = sup_norm(derivative(clean[u], alpha, options.max_derivative_order), options.oversample);
      m_full = std::max(m_full, sup);
      for (std::size_t p : uniq.positions[u]) {
        if (s.freq_of(p).sup_norm() <= inner) {
          m_inner = std::max(m_inner, sup);
          break;
        }
      }
    }
    full.push_back({alpha, m_full, 0.0});
    inner_entries.push_back({alpha, m_inner, 0.0});
  }
  rep.fit = fit_growth(std::move(full), max_order, options.growth);
  rep.inner_c_star = fit_growth(std::move(inner_entries), max_order, options.growth).c_star;
  rep.cutoff_sensitive = std::abs(rep.fit.c_star - rep.inner_c_star) > options.cutoff_tol * rep.fit.c_star;
  return rep;
}

}  // namespace tpdo
