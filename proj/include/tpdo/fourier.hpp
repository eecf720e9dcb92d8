#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "tpdo/indices.hpp"

namespace tpdo {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Default cap on |alpha| for spectral differentiation. (ij)^alpha amplifies
/// roundoff by N^|alpha|; past ~20 nothing is left of double precision.
inline constexpr int kDefaultMaxDerivativeOrder = 20;

/// Uniform grid x_k = 2 pi k / N on T^n = R^n / (2 pi Z)^n.
class TorusGrid {
 public:
  TorusGrid(int dim, int points_per_dim);

  int dim() const noexcept { return dim_; }
  int points_per_dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return size_; }

  /// Frequencies stored by functions on this grid: {-N/2, ..., N/2-1}^n.
  int min_freq() const noexcept { return -n_ / 2; }
  int max_freq() const noexcept { return n_ / 2 - 1; }
  bool contains_freq(const FreqIndex& k) const noexcept;

  /// Quadrature weight (2 pi / N)^n.
  double weight() const noexcept;

  /// Coordinates of node `flat` (row-major, first coordinate slowest).
  std::array<double, kMaxDim> node(std::size_t flat) const;

  /// Position of frequency k in a coefficient array (centered, row-major).
  std::size_t coeff_offset(const FreqIndex& k) const;
  FreqIndex freq_at(std::size_t flat) const;

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) noexcept {
    return a.dim_ == b.dim_ && a.n_ == b.n_;
  }

 private:
  int dim_;
  int n_;
  std::size_t size_;
};

/// Smooth function on T^n held by its Fourier coefficients
/// u_hat_k = int_{T^n} e_{-k} u over the grid's frequency box. Values are
/// immutable; copies share storage.
class PeriodicFunction {
 public:
  /// Zero function.
  explicit PeriodicFunction(const TorusGrid& grid);
  PeriodicFunction(const TorusGrid& grid, std::vector<cplx> coefficients);

  static PeriodicFunction constant(const TorusGrid& grid, cplx value);
  /// e_j(x) = exp(i j.x); requires j inside the grid's frequency box.
  static PeriodicFunction exponential(const TorusGrid& grid, const FreqIndex& j);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<const cplx> coefficients() const noexcept { return *coeffs_; }

  cplx coefficient(const FreqIndex& k) const;
  /// Zero outside the stored box.
  cplx coefficient_or_zero(const FreqIndex& k) const;

  /// Grid samples (synthesized on every call).
  std::vector<cplx> values() const;

  bool shares_storage_with(const PeriodicFunction& other) const noexcept {
    return coeffs_ == other.coeffs_;
  }

  /// u real iff u_hat_{-k} = conj(u_hat_k); the unpaired -N/2 modes must be real.
  bool is_real(double tol = 1e-12) const;

  bool all_finite() const;

 private:
  TorusGrid grid_;
  std::shared_ptr<const std::vector<cplx>> coeffs_;
};

PeriodicFunction analyze(const TorusGrid& grid, std::span<const cplx> values);
std::vector<cplx> synthesize(const PeriodicFunction& f);

/// Multiply coefficient k by m(k).
PeriodicFunction apply_multiplier(const PeriodicFunction& f,
                                  const std::function<cplx(const FreqIndex&)>& m);

/// Spectral derivative: coefficient k times prod (i k_i)^alpha_i.
PeriodicFunction derivative(const PeriodicFunction& f, const MultiIndex& alpha,
                            int max_order = kDefaultMaxDerivativeOrder);

/// (T_y f)(x) = f(x - y); exact for every real y.
PeriodicFunction translate(const PeriodicFunction& f, std::span<const double> y);

/// (1 - Laplacian)^p.
PeriodicFunction one_minus_laplacian_pow(const PeriodicFunction& f, int p);

/// Max |f| on the grid refined `oversample` times by zero padding.
double sup_norm(const PeriodicFunction& f, int oversample = 4);

/// Product evaluated on a 2x zero-padded grid and truncated back.
PeriodicFunction pointwise_mul(const PeriodicFunction& f, const PeriodicFunction& g);
PeriodicFunction pointwise_add(const PeriodicFunction& f, const PeriodicFunction& g);
PeriodicFunction scale(const PeriodicFunction& f, cplx c);

/// Coefficients carried over to another grid of the same dimension: zero
/// padding when finer, truncation when coarser.
PeriodicFunction resample(const PeriodicFunction& f, const TorusGrid& target);

/// Largest |k|_inf whose coefficient exceeds rel_tol times the largest
/// coefficient modulus (0 for the zero function).
int numerical_bandwidth(const PeriodicFunction& f, double rel_tol = 1e-10);

/// Coefficients with modulus <= rel_tol times the largest one set to zero.
/// Used before high-order differentiation, which would otherwise lift FFT
/// rounding noise in the top modes by a factor of (N/2)^|alpha|.
PeriodicFunction drop_below(const PeriodicFunction& f, double rel_tol);

/// Max coefficient modulus |f_hat_k - g_hat_k|.
double max_coefficient_diff(const PeriodicFunction& f, const PeriodicFunction& g);

}  // namespace tpdo
