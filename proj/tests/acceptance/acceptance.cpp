// Property checks at desk scale, one PASS/FAIL line per criterion.
// Oracles here are computed independently of the library code under test
// where possible (direct summation, closed forms, dense linear algebra).

#include <Eigen/LU>
#include <Eigen/SVD>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tpdo/catalog.hpp"
#include "tpdo/classify.hpp"
#include "tpdo/commands.hpp"
#include "tpdo/error.hpp"
#include "tpdo/lattice.hpp"
#include "tpdo/lbeta.hpp"
#include "tpdo/orbit.hpp"
#include "tpdo/quantize.hpp"

using namespace tpdo;

namespace {

bool g_verbose = false;

class Criterion {
 public:
  explicit Criterion(std::string title) : title_(std::move(title)) {}

  void require(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) failures_.push_back(what);
    else if (g_verbose) std::printf("    ok  %s\n", what.c_str());
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool passed() const { return failures_.empty() && checks_ > 0; }

  void report(int number, double seconds) const {
    std::printf("%s criterion %d: %s (%d checks, %.1f s)\n", passed() ? "PASS" : "FAIL", number, title_.c_str(),
                checks_, seconds);
    for (const auto& n : notes_) std::printf("    %s\n", n.c_str());
    for (const auto& f : failures_) std::printf("    failed: %s\n", f.c_str());
    std::fflush(stdout);
  }

 private:
  std::string title_;
  int checks_ = 0;
  std::vector<std::string> failures_, notes_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

DiscreteSymbol catalog_symbol(const CatalogEntry& e, int dim, int points, int cutoff) {
  return build_symbol(e.spec, TorusGrid(dim, std::max(points, e.recommended_points)), cutoff);
}

// 1. extract(to_matrix(s, K), J) = s on interior modes.
void quantization_round_trip(Criterion& c) {
  struct Case { int dim, points, symbol_cutoff, matrix_cutoff, out_cutoff; };
  for (const Case k : {Case{1, 128, 16, 12, 4}, Case{2, 32, 8, 8, 3}}) {
    for (const auto& e : catalog(k.dim)) {
      // The n = 2 grid follows each entry's recommended resolution.
      const auto s = catalog_symbol(e, k.dim, k.points, k.symbol_cutoff);
      const auto m = to_matrix(s, k.matrix_cutoff);
      const int band = k.matrix_cutoff - k.out_cutoff;
      const auto x = extract_symbol(m, k.out_cutoff, s.grid(), band);
      const double err = interior_symbol_diff(x, s, k.out_cutoff, band);
      c.require(err <= 1e-12, "n=" + std::to_string(k.dim) + " " + e.name + ": " + fmt("%.3g", err));
    }
  }
}

// Direct summation of sum_l (1 + l^2)^{-1} with the integral tail 2 (pi/2 - atan L).
double c1_direct() {
  const long L = 2000000;
  double s = 1.0;
  for (long l = L; l >= 1; --l) s += 2.0 / (1.0 + static_cast<double>(l) * static_cast<double>(l));
  return s + 2.0 * (M_PI / 2.0 - std::atan(static_cast<double>(L) + 0.5));
}

// 2. Truncated norm <= C_p sup |(1 - Delta)^p a_j| + 1e-8.
void norm_bound(Criterion& c) {
  const double oracle = c1_direct();
  const double c1 = lattice_constant(1, 1).value();
  c.require(std::abs(c1 - oracle) < 1e-5, "C_1 " + fmt("%.9f", c1) + " vs direct sum " + fmt("%.9f", oracle));
  c.require(std::abs(c1 - 3.15334) < 1e-5, "C_1 near 3.15334");
  c.note("C_1 = " + fmt("%.10f", c1) + ", direct summation " + fmt("%.10f", oracle));

  struct Case { int dim, points, symbol_cutoff, matrix_cutoff; std::vector<int> ps; };
  for (const auto& k : {Case{1, 128, 16, 12, {1, 2}}, Case{2, 32, 8, 8, {2}}}) {
    for (const auto& e : catalog(k.dim)) {
      const auto s = catalog_symbol(e, k.dim, k.points, k.symbol_cutoff);
      for (int p : k.ps) {
        const auto r = norm_bound_check(s, p, k.matrix_cutoff, 1e-8);
        // Dense SVD as an independent measurement of the truncated norm.
        const double svd = Eigen::JacobiSVD<Eigen::MatrixXcd>(to_matrix(s, k.matrix_cutoff).matrix())
                               .singularValues()(0);
        c.require(svd <= r.bound + 1e-8 && r.holds,
                  "n=" + std::to_string(k.dim) + " p=" + std::to_string(p) + " " + e.name + ": " +
                      fmt("%.6g", svd) + " <= " + fmt("%.6g", r.bound));
        c.require(std::abs(svd - r.measured) <= 1e-8 * std::max(1.0, svd),
                  e.name + ": power iteration matches SVD");
      }
    }
  }
}

std::vector<double> random_point(std::mt19937_64& rng, int dim) {
  std::vector<double> y(static_cast<std::size_t>(dim));
  for (auto& v : y) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 * kTwoPi;
  return y;
}

// 3. Two evaluation paths of the translation orbit and the order-4 FD identity.
void orbit_identity(Criterion& c) {
  std::mt19937_64 rng(20240611);
  double worst = 0.0, rmin = HUGE_VAL, rmax = 0.0;
  for (int dim : {1, 2}) {
    const int k = dim == 1 ? 12 : 6;
    for (const auto& e : catalog(dim)) {
      const auto s = catalog_symbol(e, dim, dim == 1 ? 128 : 32, dim == 1 ? 16 : 8);
      const auto base = to_matrix(s, k);
      for (int i = 0; i < 20; ++i) {
        const auto y = random_point(rng, dim);
        const double d =
            (orbit_eval(s, y, k).matrix() - conjugate_translation(base, y).matrix()).cwiseAbs().maxCoeff();
        worst = std::max(worst, d);
        c.require(d <= 1e-12, "two paths n=" + std::to_string(dim) + " " + e.name + ": " + fmt("%.3g", d));
      }
      std::vector<MultiIndex> alphas;
      for (const auto& a : multi_indices_up_to(dim, 2)) {
        if (a.order() >= 1) alphas.push_back(a);
      }
      const auto y = random_point(rng, dim);
      for (const auto& a : alphas) {
        const double h = a.order() == 1 ? 1e-2 : 5e-2;
        const auto r = richardson_check(s, a, y, h, k);
        const std::string tag = "n=" + std::to_string(dim) + " " + e.name + " alpha " + a.str();
        if (r.resolved) {
          rmin = std::min(rmin, r.ratio);
          rmax = std::max(rmax, r.ratio);
          c.require(r.ratio >= 12.0 && r.ratio <= 20.0, tag + ": ratio " + fmt("%.3f", r.ratio));
        } else {
          // Derivative vanishes (constant in x): both differences sit at rounding level.
          c.require(r.coarse.identity_error <= 1e-9 * std::max(1.0, r.coarse.exact_norm),
                    tag + ": unresolved error " + fmt("%.3g", r.coarse.identity_error));
        }
      }
    }
  }
  c.note("max two-path difference " + fmt("%.3g", worst) + "; Richardson ratios in [" + fmt("%.3f", rmin) + ", " +
         fmt("%.3f", rmax) + "]");
}

// 4. Symbol-side and orbit-side analyticity verdicts agree and are stable.
void equivalence(Criterion& c) {
  const int points = 256;
  for (const auto& e : catalog(1)) {
    const auto expected = e.uniformly_analytic ? AnalyticVerdict::uniformly_analytic : AnalyticVerdict::not_analytic;
    std::string row = e.name + ":";
    for (int cutoff : {20, 40}) {
      const auto s = build_symbol(e.spec, TorusGrid(1, points), cutoff);
      for (int amax : {10, 14}) {
        const auto sym = analyticity_fit(s, amax);
        const auto orb = orbit_growth_table(s, amax, cutoff);
        const std::string tag = e.name + " J=K=" + std::to_string(cutoff) + " A=" + std::to_string(amax);
        c.require(sym.fit.verdict == orb.fit.verdict, tag + ": symbol " + to_string(sym.fit.verdict) + ", orbit " +
                                                          to_string(orb.fit.verdict));
        c.require(sym.fit.verdict == expected, tag + ": expected " + to_string(expected));
        row += std::string(" ") + (sym.fit.verdict == AnalyticVerdict::uniformly_analytic ? "A" : "N") +
               (orb.fit.verdict == AnalyticVerdict::uniformly_analytic ? "A" : "N");
      }
    }
    c.note(row + "  (symbol/orbit at J=K=20,40 and A=10,14; A analytic, N not)");
  }
}

// 5. L^beta, B^beta recovery, bound chain, mu.
void converse(Criterion& c) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int dim : {1, 2}) {
    const TorusGrid g(dim, 32);
    std::vector<cplx> coef(g.size());
    for (std::size_t f = 0; f < g.size(); ++f) {
      if (g.freq_at(f).sup_norm() <= 10) coef[f] = {nd(rng), nd(rng)};
    }
    const PeriodicFunction u(g, coef);
    for (const auto& beta : dim == 1 ? std::vector<MultiIndex>{MultiIndex{1}, MultiIndex{2}, MultiIndex{5}}
                                     : std::vector<MultiIndex>{MultiIndex{2, 2}, MultiIndex{0, 3}}) {
      const double e1 = max_coefficient_diff(lbeta_inverse(lbeta_apply(u, beta), beta), u);
      const double e2 = max_coefficient_diff(lbeta_apply(lbeta_inverse(u, beta), beta), u);
      c.require(std::max(e1, e2) <= 1e-13, "L^beta round trip beta " + beta.str() + ": " + fmt("%.3g", std::max(e1, e2)));
    }
  }

  double worst_recovery = 0.0;
  for (const auto& e : catalog(1)) {
    const auto s = catalog_symbol(e, 1, 128, 16);
    const MultiIndex beta{2};
    const int k = 12, out = 6, band = k - out;
    const auto bs = bbeta_build(s, beta);
    const auto recovered = recover_symbol(extract_symbol(to_matrix(bs, k), out, s.grid(), band), beta);
    const double err = interior_symbol_diff(recovered, s, out, band);
    worst_recovery = std::max(worst_recovery, err);
    c.require(err <= 1e-11, "B^beta recovery " + e.name + ": " + fmt("%.3g", err));

    double worst_ratio = 0.0;
    for (const auto& a : multi_indices_up_to(1, 6)) {
      const auto r = bound_chain_check(s, a, k);
      // Independent oracle for S: direct summation of |l|^a (1 + l^2)^{-b/2}.
      double series = 0.0;
      for (long l = -200000; l <= 200000; ++l) {
        series += std::pow(std::abs(static_cast<double>(l)), a[0]) *
                  std::pow(1.0 + static_cast<double>(l) * static_cast<double>(l), -0.5 * r.beta[0]);
      }
      c.require(r.series.upper >= series * (1.0 - 1e-9), e.name + " S" + a.str() + " dominates direct sum");
      c.require(r.measured <= r.bound * (1.0 + 1e-6), e.name + " chain alpha " + a.str() + ": " +
                                                          fmt("%.6g", r.measured) + " <= " + fmt("%.6g", r.bound));
      worst_ratio = std::max(worst_ratio, r.measured / r.bound);
    }
    if (e.name == "analytic-pole") c.note("largest chain ratio M/bound on analytic-pole " + fmt("%.4f", worst_ratio));
  }
  c.note("largest B^beta recovery error " + fmt("%.3g", worst_recovery));

  for (int p : {1, 2, 3}) {
    const auto mu = mu_constant(p);
    // Direct check of (a + 2p)! <= mu 2^a a! in long double for a <= 60.
    bool ok = true;
    for (int a = 0; a <= 60; ++a) {
      long double lhs = 1.0L;
      for (int i = a + 1; i <= a + 2 * p; ++i) lhs *= i;
      ok = ok && lhs <= static_cast<long double>(mu.mu) * std::pow(2.0L, a) * (1.0L + 1e-12L);
    }
    c.require(ok, "mu inequality p=" + std::to_string(p));
    c.require(std::abs(mu.mu - mu.scan_mu) <= 1e-8 * mu.mu, "mu matches dense scan p=" + std::to_string(p));
    c.note("mu(p=" + std::to_string(p) + ") = " + fmt("%.10g", mu.mu));
  }
}

// 6. (4 I + Op(pole))^{-1}: analytic inverse symbol, stable C*, Neumann oracle.
void inverse_analyticity(Criterion& c) {
  ExperimentConfig cfg;
  cfg.symbol.catalog = "analytic-pole";
  cfg.grid_points = 128;
  cfg.symbol_cutoff = 24;
  cfg.matrix_cutoff = 24;
  const auto env = cmd_invert(cfg);
  for (const auto& ch : env.checks) c.require(ch.passed, ch.name + ": " + ch.detail);
  c.note("C* relative change " + fmt("%.4f", env.records["c_star_relative_change"].get<double>()));

  // Independent Neumann oracle on the K = 24 matrix: dense inverse vs partial sums.
  const auto s = build_symbol(catalog_entry("analytic-pole", 1).spec, TorusGrid(1, 128), 24);
  const Eigen::MatrixXcd a = to_matrix(s, 24).matrix();
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXcd inv = (4.0 * Eigen::MatrixXcd::Identity(n, n) + a).inverse();
  const double q = Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues()(0) / 4.0;
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n) / 4.0, sum = term;
  for (int m = 1; m <= 16; ++m) {
    term = (-a / 4.0) * term;
    sum += term;
    const double err = Eigen::JacobiSVD<Eigen::MatrixXcd>(inv - sum).singularValues()(0);
    const double bound = std::pow(q, m + 1) / (1.0 - q);
    c.require(err <= bound, "Neumann M=" + std::to_string(m) + ": " + fmt("%.3g", err) + " <= " + fmt("%.3g", bound));
  }
}

// 7. Every command gives byte-identical JSON on rerun.
void determinism(Criterion& c) {
  ExperimentConfig cfg;
  cfg.analyticity.stability = false;
  for (const char* cmd : {"classify", "norms", "orbit", "invert", "recover"}) {
    const auto a = dump_report_json(envelope_json(run_command(cmd, cfg)));
    const auto b = dump_report_json(envelope_json(run_command(cmd, cfg)));
    c.require(a == b && !a.empty(), std::string(cmd) + " JSON identical (" + std::to_string(a.size()) + " bytes)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) g_verbose = g_verbose || std::string(argv[i]) == "-v";
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> all = {
      {"quantization round trip", quantization_round_trip},
      {"operator norm bound and C_1", norm_bound},
      {"orbit two-path agreement and order-4 derivative identity", orbit_identity},
      {"symbol and orbit analyticity verdicts agree and are stable", equivalence},
      {"L^beta, B^beta recovery, bound chain, mu", converse},
      {"inverse of 4I + Op(pole) has an analytic symbol", inverse_analyticity},
      {"deterministic JSON reports", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Criterion c(all[i].first);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      all[i].second(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.report(static_cast<int>(i + 1), secs);
    failed += c.passed() ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
