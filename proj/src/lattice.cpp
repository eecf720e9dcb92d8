#include "tpdo/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tpdo/error.hpp"
#include "tpdo/fourier.hpp"

namespace tpdo {

namespace {

constexpr int kGaussPoints = 20;

struct Quadrature {
  std::vector<double> x, w;
  Quadrature() { gauss_legendre(kGaussPoints, x, w); }
};

const Quadrature& quad() {
  static const Quadrature q;
  return q;
}

template <typename F>
double integrate(F&& f, double lo, double hi) {
  const auto& q = quad();
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double s = 0.0;
  for (std::size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * f(mid + half * q.x[i]);
  return s * half;
}

/// Panels [0,1], [1,2], [2,4], ... up to r; geometric growth keeps the
/// relative accuracy uniform for integrands decaying like powers of x.
std::vector<double> panel_edges(double r) {
  std::vector<double> e{0.0};
  double x = 1.0;
  while (x < r) {
    e.push_back(x);
    x *= 2.0;
  }
  e.push_back(r);
  return e;
}

/// int_{-r}^{r} (a2 + y^2)^{-p} dy by the standard reduction recurrence.
double line_integral(double a2, double r, int p) {
  const double a = std::sqrt(a2);
  double ip = 2.0 * std::atan(r / a) / a;
  for (int q = 1; q < p; ++q) {
    ip = 2.0 * r / (2.0 * q * a2 * std::pow(a2 + r * r, q)) + (2.0 * q - 1.0) / (2.0 * q * a2) * ip;
  }
  return ip;
}

/// int over [-r, r]^n of (1 + |x|^2)^{-p}, n in {2, 3}.
double box_integral(int dim, int p, double r) {
  const auto edges = panel_edges(r);
  auto outer = [&](double x2sum) { return line_integral(1.0 + x2sum, r, p); };
  double total = 0.0;
  if (dim == 2) {
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      total += integrate([&](double x) { return outer(x * x); }, edges[i], edges[i + 1]);
    }
    return 2.0 * total;
  }
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      total += integrate(
          [&](double x) {
            return integrate([&](double y) { return outer(x * x + y * y); }, edges[k], edges[k + 1]);
          },
          edges[i], edges[i + 1]);
    }
  }
  return 4.0 * total;
}

double sphere_area(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return kTwoPi;
    default: return 2.0 * kTwoPi;
  }
}

/// Bound on |sum over cells outside the box - integral over the complement|
/// from the midpoint rule: each cell errs by at most n/24 sup||Hessian||, and
/// ||Hessian of (1+r^2)^{-p}|| <= (2p + 4p(p+1)) (1+r^2)^{-p-1}.
double midpoint_tail_bound(int dim, int p, int cutoff) {
  const double rn = std::sqrt(static_cast<double>(dim));
  const double s0 = cutoff + 0.5 - rn;
  if (s0 <= 1.0) return std::numeric_limits<double>::infinity();
  const double kp = 2.0 * p + 4.0 * p * (p + 1.0);
  double radial = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= dim - 1; ++k) {
    radial += binom * std::pow(rn, dim - 1 - k) * std::pow(s0, k - 2 * p - 1) / (2.0 * p + 1.0 - k);
    binom = binom * (dim - 1 - k) / (k + 1.0);
  }
  return dim * kp / 24.0 * sphere_area(dim) * radial;
}

double box_partial_sum(int dim, int p, int cutoff) {
  // Radial terms depend on |l|^2 only; accumulate from the outside in.
  double total = 0.0;
  if (dim == 2) {
    for (int a = cutoff; a >= -cutoff; --a) {
      double row = 0.0;
      for (int b = cutoff; b >= -cutoff; --b) row += std::pow(1.0 + double(a) * a + double(b) * b, -p);
      total += row;
    }
    return total;
  }
  for (int a = cutoff; a >= -cutoff; --a) {
    double plane = 0.0;
    for (int b = cutoff; b >= -cutoff; --b) {
      double row = 0.0;
      for (int c = cutoff; c >= -cutoff; --c) row += std::pow(1.0 + double(a) * a + double(b) * b + double(c) * c, -p);
      plane += row;
    }
    total += plane;
  }
  return total;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

LatticeSum weighted_series_1d(int a, int b, double tol) {
  if (a < 0 || b < a + 2) {
    throw Error(ErrorKind::invalid_argument, "weighted series needs 0 <= a and b >= a + 2 (got a = " +
                                                 std::to_string(a) + ", b = " + std::to_string(b) + ")");
  }
  auto term = [&](double l) { return std::pow(l, a) * std::pow(1.0 + l * l, -0.5 * b); };
  // int_X^inf x^a (1+x^2)^{-b/2} dx = int_{atan X}^{pi/2} sin^a t cos^{b-a-2} t dt
  auto tail_integral = [&](double x) {
    return integrate([&](double t) { return std::pow(std::sin(t), a) * std::pow(std::cos(t), b - a - 2); },
                     std::atan(x), 0.5 * kPi);
  };
  // Terms decrease for l > sqrt(a / (b - a)).
  int cutoff = std::max(64, static_cast<int>(std::ceil(std::sqrt(double(a) / (b - a)))) + 2);
  while (tail_integral(cutoff) - tail_integral(cutoff + 1) > tol) {
    if (cutoff > (1 << 26)) throw Error(ErrorKind::non_convergence, "weighted series tail does not shrink");
    cutoff *= 2;
  }
  double partial = 0.0;
  for (int l = cutoff; l >= 1; --l) partial += term(l);
  partial = 2.0 * partial + (a == 0 ? 1.0 : 0.0);
  LatticeSum s;
  s.cutoff = cutoff;
  s.partial = partial;
  const double hi = tail_integral(cutoff), lo = tail_integral(cutoff + 1);
  s.tail_estimate = hi + lo;  // two sides, midpoint of the bracket
  s.tail_uncertainty = hi - lo;
  return s;
}

LatticeSum lattice_constant(int dim, int p, double tol, int max_cutoff) {
  if (dim < 1 || dim > kMaxDim) throw Error(ErrorKind::invalid_argument, "lattice dimension must be 1..3");
  if (2 * p <= dim) {
    throw Error(ErrorKind::invalid_argument, "C_p diverges unless p > n/2 (p = " + std::to_string(p) +
                                                 ", n = " + std::to_string(dim) + ")");
  }
  if (dim == 1) return weighted_series_1d(0, 2 * p, tol);
  int cutoff = 16;
  while (midpoint_tail_bound(dim, p, cutoff) > tol && 2 * cutoff <= max_cutoff) cutoff *= 2;
  // Refine between cutoff/2 and cutoff for the smallest passing power-of-two step.
  if (midpoint_tail_bound(dim, p, cutoff) <= tol) {
    int lo = cutoff / 2, hi = cutoff;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      (midpoint_tail_bound(dim, p, mid) <= tol ? hi : lo) = mid;
    }
    cutoff = std::max(hi, 16);
  }
  const double r = cutoff + 0.5;
  const double full = std::pow(kPi, 0.5 * dim) * std::tgamma(p - 0.5 * dim) / std::tgamma(double(p));
  LatticeSum s;
  s.cutoff = cutoff;
  s.partial = box_partial_sum(dim, p, cutoff);
  s.tail_estimate = full - box_integral(dim, p, r);
  s.tail_uncertainty = midpoint_tail_bound(dim, p, cutoff);
  return s;
}

SeriesProduct derivative_series(const MultiIndex& alpha, const MultiIndex& beta, double tol) {
  if (alpha.dim() != beta.dim()) throw Error(ErrorKind::size_mismatch, "alpha and beta differ in dimension");
  SeriesProduct sp;
  sp.value = 1.0;
  sp.upper = 1.0;
  for (int i = 0; i < alpha.dim(); ++i) {
    auto f = weighted_series_1d(alpha[i], beta[i], tol);
    sp.value *= f.value();
    sp.upper *= f.upper();
    sp.factors.push_back(f);
  }
  return sp;
}

}  // namespace tpdo
