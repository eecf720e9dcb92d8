#include "tpdo/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "tpdo/error.hpp"

namespace tpdo {

namespace {

/// In-place n-dimensional DFT through cached FFTW plans. Execution with
/// fftw_execute_dft is thread safe; only planning takes the lock.
void fft_inplace(std::vector<cplx>& data, int dim, int n, int sign) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, fftw_plan> plans;

  fftw_plan plan = nullptr;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(dim, n, sign);
    auto it = plans.find(key);
    if (it == plans.end()) {
      std::vector<cplx> scratch(data.size());
      std::array<int, kMaxDim> dims{};
      std::fill(dims.begin(), dims.begin() + dim, n);
      auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
      plan = fftw_plan_dft(dim, dims.data(), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
      plans.emplace(key, plan);
    } else {
      plan = it->second;
    }
  }
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

/// Cyclic shift by N/2 along every axis (centered <-> FFT order; an
/// involution for even N).
std::vector<cplx> half_shift(std::span<const cplx> src, int dim, int n) {
  std::vector<cplx> dst(src.size());
  const std::size_t un = static_cast<std::size_t>(n);
  const std::size_t half = un / 2;
  std::array<std::size_t, kMaxDim> idx{};
  for (std::size_t flat = 0; flat < src.size(); ++flat) {
    std::size_t rest = flat;
    for (int i = dim - 1; i >= 0; --i) {
      idx[static_cast<std::size_t>(i)] = rest % un;
      rest /= un;
    }
    std::size_t target = 0;
    for (int i = 0; i < dim; ++i) target = target * un + (idx[static_cast<std::size_t>(i)] + half) % un;
    dst[target] = src[flat];
  }
  return dst;
}

void require_same_grid(const PeriodicFunction& f, const PeriodicFunction& g) {
  if (!(f.grid() == g.grid())) {
    throw Error(ErrorKind::grid_mismatch, "functions live on different grids");
  }
}

}  // namespace

TorusGrid::TorusGrid(int dim, int points_per_dim) : dim_(dim), n_(points_per_dim), size_(1) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error(ErrorKind::invalid_argument, "torus dimension must be in [1, 3]");
  }
  if (points_per_dim < 4 || points_per_dim % 2 != 0) {
    throw Error(ErrorKind::invalid_argument,
                "points per dimension must be even and >= 4, got " + std::to_string(points_per_dim));
  }
  for (int i = 0; i < dim; ++i) size_ *= static_cast<std::size_t>(points_per_dim);
}

bool TorusGrid::contains_freq(const FreqIndex& k) const noexcept {
  if (k.dim() != dim_) return false;
  for (int v : k.components()) {
    if (v < min_freq() || v > max_freq()) return false;
  }
  return true;
}

double TorusGrid::weight() const noexcept { return std::pow(kTwoPi / n_, dim_); }

std::array<double, kMaxDim> TorusGrid::node(std::size_t flat) const {
  std::array<double, kMaxDim> x{};
  const auto un = static_cast<std::size_t>(n_);
  for (int i = dim_ - 1; i >= 0; --i) {
    x[static_cast<std::size_t>(i)] = kTwoPi * static_cast<double>(flat % un) / n_;
    flat /= un;
  }
  return x;
}

std::size_t TorusGrid::coeff_offset(const FreqIndex& k) const {
  if (!contains_freq(k)) {
    throw Error(ErrorKind::cutoff, "frequency " + k.str() + " outside the grid's box");
  }
  std::size_t off = 0;
  for (int v : k.components()) off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v + n_ / 2);
  return off;
}

FreqIndex TorusGrid::freq_at(std::size_t flat) const {
  FreqIndex k(dim_);
  const auto un = static_cast<std::size_t>(n_);
  for (int i = dim_ - 1; i >= 0; --i) {
    k[i] = static_cast<int>(flat % un) - n_ / 2;
    flat /= un;
  }
  return k;
}

PeriodicFunction::PeriodicFunction(const TorusGrid& grid)
    : grid_(grid), coeffs_(std::make_shared<const std::vector<cplx>>(grid.size())) {}

PeriodicFunction::PeriodicFunction(const TorusGrid& grid, std::vector<cplx> coefficients)
    : grid_(grid) {
  if (coefficients.size() != grid.size()) {
    throw Error(ErrorKind::size_mismatch, "coefficient array has " + std::to_string(coefficients.size()) +
                                              " entries, grid expects " + std::to_string(grid.size()));
  }
  coeffs_ = std::make_shared<const std::vector<cplx>>(std::move(coefficients));
}

PeriodicFunction PeriodicFunction::constant(const TorusGrid& grid, cplx value) {
  std::vector<cplx> c(grid.size());
  c[grid.coeff_offset(FreqIndex(grid.dim()))] = value * std::pow(kTwoPi, grid.dim());
  return {grid, std::move(c)};
}

PeriodicFunction PeriodicFunction::exponential(const TorusGrid& grid, const FreqIndex& j) {
  std::vector<cplx> c(grid.size());
  c[grid.coeff_offset(j)] = std::pow(kTwoPi, grid.dim());
  return {grid, std::move(c)};
}

cplx PeriodicFunction::coefficient(const FreqIndex& k) const { return (*coeffs_)[grid_.coeff_offset(k)]; }

cplx PeriodicFunction::coefficient_or_zero(const FreqIndex& k) const {
  return grid_.contains_freq(k) ? (*coeffs_)[grid_.coeff_offset(k)] : cplx{};
}

std::vector<cplx> PeriodicFunction::values() const { return synthesize(*this); }

bool PeriodicFunction::is_real(double tol) const {
  double scale_ref = 0.0;
  for (const auto& c : *coeffs_) scale_ref = std::max(scale_ref, std::abs(c));
  const double bound = tol * std::max(scale_ref, 1e-300);
  for (std::size_t flat = 0; flat < grid_.size(); ++flat) {
    const FreqIndex k = grid_.freq_at(flat);
    const FreqIndex mk = -k;
    const cplx ck = (*coeffs_)[flat];
    if (grid_.contains_freq(mk)) {
      if (std::abs(coefficient(mk) - std::conj(ck)) > bound) return false;
    } else if (std::abs(ck.imag()) > bound) {
      return false;
    }
  }
  return true;
}

bool PeriodicFunction::all_finite() const {
  return std::all_of(coeffs_->begin(), coeffs_->end(),
                     [](const cplx& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

PeriodicFunction analyze(const TorusGrid& grid, std::span<const cplx> values) {
  if (values.size() != grid.size()) {
    throw Error(ErrorKind::size_mismatch, "got " + std::to_string(values.size()) +
                                              " samples for a grid of " + std::to_string(grid.size()) +
                                              " nodes");
  }
  std::vector<cplx> work(values.begin(), values.end());
  fft_inplace(work, grid.dim(), grid.points_per_dim(), FFTW_FORWARD);
  const double w = grid.weight();
  for (auto& c : work) c *= w;
  return {grid, half_shift(work, grid.dim(), grid.points_per_dim())};
}

std::vector<cplx> synthesize(const PeriodicFunction& f) {
  const auto& grid = f.grid();
  auto work = half_shift(f.coefficients(), grid.dim(), grid.points_per_dim());
  fft_inplace(work, grid.dim(), grid.points_per_dim(), FFTW_BACKWARD);
  const double w = std::pow(kTwoPi, -grid.dim());
  for (auto& v : work) v *= w;
  return work;
}

PeriodicFunction apply_multiplier(const PeriodicFunction& f,
                                  const std::function<cplx(const FreqIndex&)>& m) {
  const auto& grid = f.grid();
  auto src = f.coefficients();
  std::vector<cplx> out(src.size());
  for (std::size_t flat = 0; flat < src.size(); ++flat) {
    if (src[flat] == cplx{}) continue;
    out[flat] = src[flat] * m(grid.freq_at(flat));
  }
  return {grid, std::move(out)};
}

PeriodicFunction derivative(const PeriodicFunction& f, const MultiIndex& alpha, int max_order) {
  if (alpha.dim() != f.grid().dim()) {
    throw Error(ErrorKind::size_mismatch, "multi-index dimension differs from grid dimension");
  }
  if (alpha.order() > max_order) {
    throw Error(ErrorKind::differentiation_cap,
                "derivative order " + std::to_string(alpha.order()) + " exceeds cap " +
                    std::to_string(max_order) + "; (ik)^alpha amplification leaves no significant digits");
  }
  if (alpha.order() == 0) return f;
  return apply_multiplier(f, [&](const FreqIndex& k) {
    cplx m{1.0, 0.0};
    for (int i = 0; i < k.dim(); ++i) {
      const cplx ik{0.0, static_cast<double>(k[i])};
      for (int r = 0; r < alpha[i]; ++r) m *= ik;
    }
    return m;
  });
}

PeriodicFunction translate(const PeriodicFunction& f, std::span<const double> y) {
  if (static_cast<int>(y.size()) != f.grid().dim()) {
    throw Error(ErrorKind::size_mismatch, "translation vector dimension differs from grid dimension");
  }
  return apply_multiplier(f, [&](const FreqIndex& k) {
    double phase = 0.0;
    for (int i = 0; i < k.dim(); ++i) phase -= k[i] * y[static_cast<std::size_t>(i)];
    return std::polar(1.0, phase);
  });
}

PeriodicFunction one_minus_laplacian_pow(const PeriodicFunction& f, int p) {
  if (p < 0) throw Error(ErrorKind::invalid_argument, "power of (1 - Laplacian) must be >= 0");
  if (p == 0) return f;
  return apply_multiplier(f, [&](const FreqIndex& k) {
    const double base = 1.0 + k.euclidean_norm() * k.euclidean_norm();
    return cplx{std::pow(base, p), 0.0};
  });
}

PeriodicFunction resample(const PeriodicFunction& f, const TorusGrid& target) {
  const auto& grid = f.grid();
  if (target.dim() != grid.dim()) throw Error(ErrorKind::grid_mismatch, "resample across dimensions");
  if (target == grid) return f;
  std::vector<cplx> out(target.size());
  auto src = f.coefficients();
  for (std::size_t flat = 0; flat < src.size(); ++flat) {
    if (src[flat] == cplx{}) continue;
    const FreqIndex k = grid.freq_at(flat);
    if (target.contains_freq(k)) out[target.coeff_offset(k)] = src[flat];
  }
  return {target, std::move(out)};
}

double sup_norm(const PeriodicFunction& f, int oversample) {
  if (oversample < 1) throw Error(ErrorKind::invalid_argument, "oversample factor must be >= 1");
  const auto& grid = f.grid();
  const TorusGrid fine(grid.dim(), grid.points_per_dim() * oversample);
  const auto vals = synthesize(resample(f, fine));
  double m = 0.0;
  for (const auto& v : vals) m = std::max(m, std::abs(v));
  return m;
}

PeriodicFunction pointwise_mul(const PeriodicFunction& f, const PeriodicFunction& g) {
  require_same_grid(f, g);
  const auto& grid = f.grid();
  const TorusGrid fine(grid.dim(), 2 * grid.points_per_dim());
  auto fv = synthesize(resample(f, fine));
  const auto gv = synthesize(resample(g, fine));
  for (std::size_t i = 0; i < fv.size(); ++i) fv[i] *= gv[i];
  return resample(analyze(fine, fv), grid);
}

PeriodicFunction pointwise_add(const PeriodicFunction& f, const PeriodicFunction& g) {
  require_same_grid(f, g);
  auto a = f.coefficients();
  auto b = g.coefficients();
  std::vector<cplx> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return {f.grid(), std::move(out)};
}

PeriodicFunction scale(const PeriodicFunction& f, cplx c) {
  auto a = f.coefficients();
  std::vector<cplx> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return {f.grid(), std::move(out)};
}

int numerical_bandwidth(const PeriodicFunction& f, double rel_tol) {
  auto c = f.coefficients();
  double peak = 0.0;
  for (const auto& v : c) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0;
  int bw = 0;
  for (std::size_t flat = 0; flat < c.size(); ++flat) {
    if (std::abs(c[flat]) > rel_tol * peak) bw = std::max(bw, f.grid().freq_at(flat).sup_norm());
  }
  return bw;
}

double max_coefficient_diff(const PeriodicFunction& f, const PeriodicFunction& g) {
  require_same_grid(f, g);
  auto a = f.coefficients();
  auto b = g.coefficients();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

PeriodicFunction drop_below(const PeriodicFunction& f, double rel_tol) {
  auto c = f.coefficients();
  double top = 0.0;
  for (const auto& v : c) top = std::max(top, std::abs(v));
  const double cut = rel_tol * top;
  std::vector<cplx> out(c.begin(), c.end());
  for (auto& v : out) {
    if (std::abs(v) <= cut) v = cplx{};
  }
  return PeriodicFunction(f.grid(), std::move(out));
}

}  // namespace tpdo
