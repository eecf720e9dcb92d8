#include "tpdo/orbit.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "tpdo/error.hpp"

namespace tpdo {

namespace {

void check_point(int dim, std::span<const double> y) {
  if (static_cast<int>(y.size()) != dim) {
    throw Error(ErrorKind::size_mismatch, "point has " + std::to_string(y.size()) + " coordinates, expected " +
                                              std::to_string(dim));
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "point coordinates must be finite");
  }
}

double sign_of_order(const MultiIndex& alpha) { return alpha.order() % 2 == 0 ? 1.0 : -1.0; }

}  // namespace

double difference_norm(const TruncatedOperator& a) {
  if (a.matrix().cwiseAbs().maxCoeff() == 0.0) return 0.0;
  // Truncated matrices here are at most a few thousand square; a dense SVD is
  // exact where power iteration stalls on clustered top singular values.
  return Eigen::BDCSVD<Eigen::MatrixXcd>(a.matrix()).singularValues()(0);
}

TruncatedOperator orbit_eval(const DiscreteSymbol& s, std::span<const double> y, int cutoff) {
  check_point(s.dim(), y);
  return to_matrix(symbol_translate(s, y), cutoff);
}

TruncatedOperator orbit_derivative_exact(const DiscreteSymbol& s, const MultiIndex& alpha,
                                         std::span<const double> y, int cutoff) {
  check_point(s.dim(), y);
  const auto d = derivative_matrix(s, alpha, cutoff);
  return scale(conjugate_translation(d, y), sign_of_order(alpha));
}

std::vector<double> central_weights(int derivative_order, int accuracy_order) {
  if (derivative_order < 0 || accuracy_order < 2 || accuracy_order % 2 != 0) {
    throw Error(ErrorKind::invalid_argument, "central stencil needs order >= 0 and even accuracy >= 2");
  }
  if (derivative_order == 0) return {1.0};
  const int r = (derivative_order + 1) / 2 - 1 + accuracy_order / 2;
  const int npts = 2 * r + 1;
  std::vector<double> x(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) x[static_cast<std::size_t>(i)] = i - r;

  // Fornberg: c[i][k] weight of point i for the k-th derivative at 0.
  const int m = derivative_order;
  std::vector<std::vector<double>> c(static_cast<std::size_t>(npts), std::vector<double>(static_cast<std::size_t>(m + 1)));
  double c1 = 1.0, c4 = x[0];
  c[0][0] = 1.0;
  for (int i = 1; i < npts; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) {
      const double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) w[static_cast<std::size_t>(i)] = c[i][m];
  return w;
}

OrbitDerivativeRecord orbit_derivative_check(const DiscreteSymbol& s, const MultiIndex& alpha,
                                             std::span<const double> y, double step, int cutoff) {
  check_point(s.dim(), y);
  if (alpha.dim() != s.dim()) throw Error(ErrorKind::size_mismatch, "multi-index dimension differs from symbol");
  if (alpha.order() > 4) {
    throw Error(ErrorKind::invalid_argument, "finite-difference orbit check supports |alpha| <= 4, got " +
                                                 alpha.str());
  }
  if (!(step >= 1e-4 && step <= 1e-1)) {
    throw Error(ErrorKind::invalid_argument, "step h must lie in [1e-4, 1e-1]");
  }
  OrbitDerivativeRecord rec;
  rec.alpha = alpha;
  rec.y.assign(y.begin(), y.end());
  rec.step = step;
  rec.scheme_order = 4;

  const auto exact = orbit_derivative_exact(s, alpha, y, cutoff);
  rec.exact_norm = difference_norm(exact);
  if (alpha.order() == 0) {
    rec.fd_estimate = rec.exact_norm;
    rec.identity_error = 0.0;
    return rec;
  }

  // Tensor-product stencil: one 1-D central stencil per coordinate.
  const int dim = s.dim();
  std::vector<std::vector<double>> w(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) w[static_cast<std::size_t>(i)] = central_weights(alpha[i], 4);

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(exact.size(), exact.size());
  std::vector<int> pos(static_cast<std::size_t>(dim), 0);
  std::vector<double> point(y.begin(), y.end());
  for (;;) {
    double weight = 1.0;
    for (int i = 0; i < dim; ++i) {
      const auto& wi = w[static_cast<std::size_t>(i)];
      const int r = static_cast<int>(wi.size() / 2);
      const int off = pos[static_cast<std::size_t>(i)] - r;
      weight *= wi[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])];
      point[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] + off * step;
    }
    if (weight != 0.0) acc += weight * orbit_eval(s, point, cutoff).matrix();
    int i = dim - 1;
    while (i >= 0) {
      auto& p = pos[static_cast<std::size_t>(i)];
      if (++p < static_cast<int>(w[static_cast<std::size_t>(i)].size())) break;
      p = 0;
      --i;
    }
    if (i < 0) break;
  }
  acc /= std::pow(step, alpha.order());
  const TruncatedOperator fd(dim, cutoff, acc);
  rec.fd_estimate = difference_norm(fd);
  rec.identity_error = difference_norm(TruncatedOperator(dim, cutoff, acc - exact.matrix()));
  return rec;
}

RichardsonRecord richardson_check(const DiscreteSymbol& s, const MultiIndex& alpha, std::span<const double> y,
                                  double step, int cutoff, double floor) {
  RichardsonRecord r;
  r.coarse = orbit_derivative_check(s, alpha, y, step, cutoff);
  r.fine = orbit_derivative_check(s, alpha, y, step / 2, cutoff);
  const double scale_ = std::max(r.coarse.exact_norm, 1.0);
  r.resolved = r.fine.identity_error > floor * scale_ && r.coarse.identity_error > floor * scale_;
  r.ratio = r.fine.identity_error > 0.0 ? r.coarse.identity_error / r.fine.identity_error : 0.0;
  return r;
}

OrbitGrowthTable orbit_growth_table(const DiscreteSymbol& s, int max_order, int cutoff,
                                    const std::vector<std::vector<double>>& y_samples,
                                    const GrowthOptions& options, double rounding_floor) {
  if (max_order > kDefaultMaxDerivativeOrder) {
    throw Error(ErrorKind::differentiation_cap, "growth table order " + std::to_string(max_order) +
                                                    " exceeds the differentiation cap");
  }
  OrbitGrowthTable t;
  t.matrix_cutoff = cutoff;
  t.sampled_points = y_samples.size();
  const auto clean = rounding_floor > 0.0
                         ? s.map([&](const PeriodicFunction& f) { return drop_below(f, rounding_floor); })
                         : s;
  std::vector<GrowthEntry> entries;
  for (const auto& alpha : multi_indices_up_to(s.dim(), max_order)) {
    const auto m = derivative_matrix(clean, alpha, cutoff);
    const double norm = difference_norm(m);
    for (const auto& y : y_samples) {
      const double ny = difference_norm(conjugate_translation(m, y));
      t.max_conjugation_deviation = std::max(t.max_conjugation_deviation, std::abs(ny - norm));
    }
    entries.push_back({alpha, norm, 0.0});
  }
  t.fit = fit_growth(std::move(entries), max_order, options);
  return t;
}

void write_growth_csv(const GrowthFit& fit, std::ostream& os) {
  os << "alpha,norm,c_alpha\n";
  char buf[64];
  for (const auto& e : fit.entries) {
    std::string a;
    for (int i = 0; i < e.alpha.dim(); ++i) a += (i ? ":" : "") + std::to_string(e.alpha[i]);
    os << a;
    std::snprintf(buf, sizeof buf, ",%.17g", e.magnitude);
    os << buf;
    std::snprintf(buf, sizeof buf, ",%.17g\n", e.c_alpha);
    os << buf;
  }
}

TaylorRemainderReport taylor_remainder_check(const DiscreteSymbol& s, std::span<const double> center,
                                             const std::vector<int>& degrees, double radius, std::size_t samples,
                                             int cutoff, std::uint64_t seed, double floor) {
  check_point(s.dim(), center);
  if (degrees.empty()) throw Error(ErrorKind::invalid_argument, "no Taylor degrees requested");
  const int dmax = *std::max_element(degrees.begin(), degrees.end());
  if (*std::min_element(degrees.begin(), degrees.end()) < 0 || dmax > 8) {
    throw Error(ErrorKind::invalid_argument, "Taylor degrees must lie in [0, 8]");
  }
  if (!(radius > 0.0) || samples == 0) throw Error(ErrorKind::invalid_argument, "radius and samples must be positive");

  TaylorRemainderReport rep;
  rep.center.assign(center.begin(), center.end());
  rep.radius = radius;
  rep.samples = samples;
  rep.seed = seed;

  const int dim = s.dim();
  const auto alphas = multi_indices_up_to(dim, dmax);
  std::vector<Eigen::MatrixXcd> terms;
  terms.reserve(alphas.size());
  for (const auto& a : alphas) {
    terms.push_back(orbit_derivative_exact(s, a, center, cutoff).matrix() /
                    static_cast<double>(a.factorial()));
  }

  // Sample points: the corners of the cube first, then seeded uniform draws.
  std::vector<std::vector<double>> offsets;
  for (int mask = 0; mask < (1 << dim) && offsets.size() < samples; ++mask) {
    std::vector<double> o(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) o[static_cast<std::size_t>(i)] = (mask >> i & 1) ? radius : -radius;
    offsets.push_back(std::move(o));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-radius, radius);
  while (offsets.size() < samples) {
    std::vector<double> o(static_cast<std::size_t>(dim));
    for (auto& v : o) v = unif(rng);
    offsets.push_back(std::move(o));
  }

  std::vector<int> sorted = degrees;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<double> worst(sorted.size(), 0.0);
  double scale_ = 0.0;
  for (const auto& o : offsets) {
    std::vector<double> y(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) y[static_cast<std::size_t>(i)] = center[static_cast<std::size_t>(i)] + o[static_cast<std::size_t>(i)];
    const auto f = orbit_eval(s, y, cutoff);
    scale_ = std::max(scale_, difference_norm(f));
    Eigen::MatrixXcd poly = Eigen::MatrixXcd::Zero(f.size(), f.size());
    std::size_t next = 0;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      const auto& a = alphas[k];
      double mono = 1.0;
      for (int i = 0; i < dim; ++i) mono *= std::pow(o[static_cast<std::size_t>(i)], a[i]);
      poly += mono * terms[k];
      const bool last_of_degree = k + 1 == alphas.size() || alphas[k + 1].order() != a.order();
      if (last_of_degree && next < sorted.size() && a.order() == sorted[next]) {
        worst[next] = std::max(worst[next], difference_norm(TruncatedOperator(dim, cutoff, f.matrix() - poly)));
        ++next;
      }
    }
  }
  rep.geometric_decay = true;
  const double noise = floor * std::max(scale_, 1.0);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    TaylorRemainderRow row{sorted[i], worst[i], 0.0};
    if (i > 0) {
      row.ratio_to_previous = worst[i - 1] > 0.0 ? worst[i] / worst[i - 1] : 0.0;
      if (worst[i] > noise && !(row.ratio_to_previous < 1.0)) rep.geometric_decay = false;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace tpdo
