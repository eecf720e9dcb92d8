#include "tpdo/lbeta.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tpdo/error.hpp"

namespace tpdo {

namespace {

cplx lbeta_multiplier(const FreqIndex& l, const MultiIndex& beta, int sign) {
  cplx m{1.0, 0.0};
  for (int i = 0; i < beta.dim(); ++i) {
    const cplx f{1.0, static_cast<double>(l[i])};
    for (int k = 0; k < beta[i]; ++k) m *= f;
  }
  return sign > 0 ? m : 1.0 / m;
}

PeriodicFunction lbeta_multiply(const PeriodicFunction& u, const MultiIndex& beta, int sign) {
  if (beta.dim() != u.grid().dim()) throw Error(ErrorKind::size_mismatch, "beta dimension differs from the grid");
  if (beta.order() == 0) return u;
  return apply_multiplier(u, [&](const FreqIndex& l) { return lbeta_multiplier(l, beta, sign); });
}

void require_nonzero(const MultiIndex& beta) {
  if (beta.order() == 0) throw Error(ErrorKind::invalid_argument, "beta must be a nonzero multi-index");
}

// log of prod_{m=1}^{2p} (t + m) - t log 2
double log_g(double t, int p) {
  double s = -t * std::log(2.0);
  for (int m = 1; m <= 2 * p; ++m) s += std::log(t + m);
  return s;
}

double dlog_g(double t, int p) {
  double s = -std::log(2.0);
  for (int m = 1; m <= 2 * p; ++m) s += 1.0 / (t + m);
  return s;
}

}  // namespace

PeriodicFunction lbeta_apply(const PeriodicFunction& u, const MultiIndex& beta) { return lbeta_multiply(u, beta, 1); }

PeriodicFunction lbeta_inverse(const PeriodicFunction& u, const MultiIndex& beta) {
  return lbeta_multiply(u, beta, -1);
}

DiscreteSymbol bbeta_build(const DiscreteSymbol& s, const MultiIndex& beta) {
  require_nonzero(beta);
  return s.map([&](const PeriodicFunction& a) { return lbeta_apply(a, beta); });
}

DiscreteSymbol recover_symbol(const DiscreteSymbol& bs, const MultiIndex& beta) {
  require_nonzero(beta);
  return bs.map([&](const PeriodicFunction& a) { return lbeta_inverse(a, beta); });
}

BoundChainRecord bound_chain_check(const DiscreteSymbol& s, const MultiIndex& alpha, int cutoff) {
  if (alpha.dim() != s.dim()) throw Error(ErrorKind::size_mismatch, "alpha dimension differs from the symbol");
  BoundChainRecord rec;
  rec.alpha = alpha;
  rec.beta = alpha + MultiIndex::constant(s.dim(), 2);
  rec.matrix_cutoff = cutoff;
  rec.alpha_factorial = static_cast<double>(alpha.factorial());
  rec.beta_factorial = static_cast<double>(rec.beta.factorial());

  const auto b = coefficient_matrix(bbeta_build(s, rec.beta), cutoff);
  PowerIterationOptions o;
  o.tol = 1e-12;
  try {
    rec.bbeta_norm = operator_norm_estimate(b, o).norm;
  } catch (const NonConvergence& e) {
    // The Rayleigh quotient never exceeds the true norm, so a chain that
    // holds with it holds a fortiori.
    rec.bbeta_norm = e.best_estimate();
    rec.norm_converged = false;
  }
  rec.series = derivative_series(alpha, rec.beta);
  rec.bound = rec.bbeta_norm * rec.series.upper;

  std::map<const void*, double> full_cache;
  for (const auto& j : frequency_box(s.dim(), cutoff)) {
    const auto& a = s.at(j);
    auto it = full_cache.find(a.coefficients().data());
    if (it == full_cache.end()) {
      it = full_cache.emplace(a.coefficients().data(), sup_norm(derivative(a, alpha))).first;
    }
    rec.measured_full = std::max(rec.measured_full, it->second);
    const auto seen = apply_multiplier(a, [&](const FreqIndex& m) {
      return (j + m).sup_norm() <= cutoff ? cplx{1.0, 0.0} : cplx{};
    });
    rec.measured = std::max(rec.measured, sup_norm(derivative(seen, alpha)));
  }
  rec.slack = rec.bound - rec.measured;
  rec.holds = rec.slack >= -1e-6 * rec.bound;
  return rec;
}

MuConstant mu_constant(int p) {
  if (p < 1) throw Error(ErrorKind::invalid_argument, "mu constant needs p >= 1");
  MuConstant r;
  r.p = p;
  double lo = 0.0, hi = 10.0 * p;
  // log g is concave, so g is unimodal; a sign change of (log g)' brackets the max.
  for (int attempt = 0; dlog_g(hi, p) >= 0.0; ++attempt) {
    if (attempt == 8) throw Error(ErrorKind::non_convergence, "mu bracket failed");
    hi *= 2.0;
  }
  if (dlog_g(lo, p) <= 0.0) {
    r.t_star = 0.0;
  } else {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = log_g(c, p), fd = log_g(d, p);
    while (b - a > 1e-12 * (1.0 + std::abs(a))) {
      if (fc > fd) {
        b = d, d = c, fd = fc;
        c = b - phi * (b - a), fc = log_g(c, p);
      } else {
        a = c, c = d, fc = fd;
        d = a + phi * (b - a), fd = log_g(d, p);
      }
    }
    r.t_star = 0.5 * (a + b);
  }
  r.mu = std::exp(log_g(r.t_star, p));

  const int steps = static_cast<int>(std::lround(10.0 * p / 1e-4));
  double best = 0.0;
  for (int i = 0; i <= steps; ++i) best = std::max(best, log_g(i * 1e-4, p));
  r.scan_mu = std::exp(best);

  r.min_margin = HUGE_VAL;
  for (int a = 0; a <= 60; ++a) {
    long double lhs = 1.0L;  // (a + 2p)! / a!, an integer below 2^64 for these ranges
    for (int m = 1; m <= 2 * p; ++m) lhs *= static_cast<long double>(a + m);
    const long double rhs = static_cast<long double>(r.mu) * std::ldexp(1.0L, a);
    const double margin = static_cast<double>(rhs / lhs);
    if (margin < r.min_margin) r.min_margin = margin, r.worst_a = a;
  }
  r.verified = r.min_margin >= 1.0;
  return r;
}

FactorialShiftRecord factorial_shift_check(int p, const MultiIndex& alpha) {
  if (alpha.order() > 40) throw Error(ErrorKind::invalid_argument, "factorial shift check needs |alpha| <= 40");
  FactorialShiftRecord r;
  r.p = p;
  r.alpha = alpha;
  r.mu = mu_constant(p).mu;
  long double lhs = 1.0L, rhs = std::ldexp(1.0L, alpha.order());
  for (int i = 0; i < alpha.dim(); ++i) {
    for (int m = 2; m <= alpha[i] + 2 * p; ++m) lhs *= m;
    for (int m = 2; m <= alpha[i]; ++m) rhs *= m;
    rhs *= r.mu;
  }
  r.lhs = static_cast<double>(lhs);
  r.rhs = static_cast<double>(rhs);
  r.holds = lhs <= rhs;
  return r;
}

}  // namespace tpdo
