#include "tpdo/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tpdo/error.hpp"

namespace tpdo {

ApplyResult apply_detailed(const DiscreteSymbol& s, const PeriodicFunction& u, const ApplyOptions& options) {
  if (!(u.grid() == s.grid())) throw Error(ErrorKind::grid_mismatch, "function and symbol live on different grids");
  const auto& grid = s.grid();
  const double norm = std::pow(kTwoPi, -grid.dim());
  auto uc = u.coefficients();
  double total = 0.0, outside = 0.0;
  for (std::size_t flat = 0; flat < uc.size(); ++flat) {
    const double e = std::norm(uc[flat]);
    total += e;
    if (grid.freq_at(flat).sup_norm() > s.cutoff()) outside += e;
  }
  ApplyResult res{PeriodicFunction(grid), total > 0.0 ? outside / total : 0.0, false};
  if (res.discarded_energy_fraction > options.cutoff_warning) {
    res.cutoff_warning = true;
    if (options.strict) {
      throw Error(ErrorKind::cutoff, "input carries a fraction " + std::to_string(res.discarded_energy_fraction) +
                                         " of its energy outside the symbol cutoff " + std::to_string(s.cutoff()));
    }
  }
  std::vector<cplx> out(grid.size());
  for (const auto& j : frequency_box(grid.dim(), s.cutoff())) {
    if (!grid.contains_freq(j)) continue;
    const cplx uj = u.coefficient(j);
    if (uj == cplx{}) continue;
    const auto prod = pointwise_mul(s.at(j), PeriodicFunction::exponential(grid, j));
    const cplx w = uj * norm;
    auto pc = prod.coefficients();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * pc[i];
  }
  res.value = PeriodicFunction(grid, std::move(out));
  return res;
}

PeriodicFunction apply(const DiscreteSymbol& s, const PeriodicFunction& u, const ApplyOptions& options) {
  return apply_detailed(s, u, options).value;
}

namespace {

void check_resolved(const DiscreteSymbol& s, int cutoff, double bandwidth_tol) {
  if (cutoff < 0) throw Error(ErrorKind::invalid_argument, "matrix cutoff must be >= 0");
  if (cutoff > s.cutoff()) {
    throw Error(ErrorKind::cutoff, "matrix cutoff K = " + std::to_string(cutoff) + " exceeds symbol cutoff J = " +
                                       std::to_string(s.cutoff()));
  }
  const int bw = s.bandwidth(bandwidth_tol);
  const int half = s.grid().points_per_dim() / 2;
  if (cutoff + bw > half) {
    throw Error(ErrorKind::aliasing, "K + bandwidth = " + std::to_string(cutoff) + " + " + std::to_string(bw) +
                                         " exceeds N/2 = " + std::to_string(half) + "; refine the grid");
  }
}

TruncatedOperator build_matrix(const DiscreteSymbol& s, int cutoff) {
  const double norm = std::pow(kTwoPi, -s.dim());
  const auto basis = frequency_box(s.dim(), cutoff);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto& k = basis[static_cast<std::size_t>(c)];
    const auto& ak = s.at(k);
    for (Eigen::Index r = 0; r < n; ++r) {
      m(r, c) = ak.coefficient_or_zero(basis[static_cast<std::size_t>(r)] - k) * norm;
    }
  }
  return {s.dim(), cutoff, std::move(m)};
}

}  // namespace

TruncatedOperator to_matrix(const DiscreteSymbol& s, int cutoff, double bandwidth_tol) {
  check_resolved(s, cutoff, bandwidth_tol);
  return build_matrix(s, cutoff);
}

TruncatedOperator derivative_matrix(const DiscreteSymbol& s, const MultiIndex& alpha, int cutoff,
                                    double bandwidth_tol) {
  check_resolved(s, cutoff, bandwidth_tol);
  return build_matrix(symbol_derivative(s, alpha), cutoff);
}

TruncatedOperator coefficient_matrix(const DiscreteSymbol& s, int cutoff) {
  if (cutoff < 0 || cutoff > s.cutoff()) throw Error(ErrorKind::cutoff, "matrix cutoff outside [0, J]");
  if (2 * cutoff > s.grid().max_freq()) {
    throw Error(ErrorKind::aliasing, "offsets up to 2K = " + std::to_string(2 * cutoff) + " are not stored on the grid");
  }
  return build_matrix(s, cutoff);
}

DiscreteSymbol extract_symbol(const TruncatedOperator& a, int out_cutoff, const TorusGrid& grid, int bandwidth) {
  if (grid.dim() != a.dim()) throw Error(ErrorKind::grid_mismatch, "grid dimension differs from operator dimension");
  if (out_cutoff < 0) throw Error(ErrorKind::invalid_argument, "output cutoff must be >= 0");
  if (bandwidth < 0) bandwidth = a.cutoff() - out_cutoff;
  if (bandwidth < 0 || out_cutoff + bandwidth > a.cutoff()) {
    throw Error(ErrorKind::cutoff, "J_out + bandwidth = " + std::to_string(out_cutoff) + " + " +
                                       std::to_string(std::max(bandwidth, 0)) + " exceeds the matrix cutoff K = " +
                                       std::to_string(a.cutoff()));
  }
  if (bandwidth > grid.max_freq()) {
    throw Error(ErrorKind::aliasing, "extraction bandwidth " + std::to_string(bandwidth) +
                                         " does not fit the target grid");
  }
  const double scale_factor = std::pow(kTwoPi, a.dim());
  const auto modes = frequency_box(a.dim(), bandwidth);
  return DiscreteSymbol::generate(grid, out_cutoff, [&](const FreqIndex& j) {
    std::vector<cplx> c(grid.size());
    const Eigen::Index col = a.index_of(j);
    for (const auto& m : modes) c[grid.coeff_offset(m)] = scale_factor * a.matrix()(a.index_of(j + m), col);
    return PeriodicFunction(grid, std::move(c));
  });
}

double interior_symbol_diff(const DiscreteSymbol& a, const DiscreteSymbol& b, int cutoff, int bandwidth) {
  if (cutoff > a.cutoff() || cutoff > b.cutoff()) throw Error(ErrorKind::cutoff, "comparison cutoff too large");
  double m = 0.0;
  const auto modes = frequency_box(a.dim(), bandwidth);
  for (const auto& j : frequency_box(a.dim(), cutoff)) {
    const auto& fa = a.at(j);
    const auto& fb = b.at(j);
    for (const auto& k : modes) m = std::max(m, std::abs(fa.coefficient_or_zero(k) - fb.coefficient_or_zero(k)));
  }
  return m;
}

NormBoundRecord norm_bound_check(const DiscreteSymbol& s, int p, int cutoff, double tolerance,
                                 const PowerIterationOptions& power) {
  if (2 * p <= s.dim()) {
    throw Error(ErrorKind::invalid_argument, "norm bound needs an integer p > n/2 (p = " + std::to_string(p) +
                                                 ", n = " + std::to_string(s.dim()) + ")");
  }
  NormBoundRecord rec;
  rec.dim = s.dim();
  rec.p = p;
  rec.matrix_cutoff = cutoff;
  rec.symbol_cutoff = s.cutoff();
  rec.tolerance = tolerance;
  rec.c_p = lattice_constant(s.dim(), p);
  std::map<const void*, bool> seen;
  for (const auto& a : s.entries()) {
    if (!seen.emplace(a.coefficients().data(), true).second) continue;
    rec.sup_term = std::max(rec.sup_term, sup_norm(one_minus_laplacian_pow(a, p)));
  }
  rec.bound = rec.c_p.upper() * rec.sup_term;
  rec.norm_estimate = operator_norm_estimate(to_matrix(s, cutoff), power);
  rec.measured = rec.norm_estimate.norm;
  rec.slack = rec.bound - rec.measured;
  rec.holds = rec.slack >= -tolerance;
  return rec;
}

}  // namespace tpdo
