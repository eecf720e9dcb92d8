#include "tpdo/commands.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "tpdo/error.hpp"

namespace tpdo {

namespace {

std::vector<std::vector<double>> random_points(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> ys;
  for (int i = 0; i < count; ++i) {
    std::vector<double> y(static_cast<std::size_t>(dim));
    // Top 53 bits scaled to [0, 2 pi); independent of the standard library's
    // distribution implementation.
    for (auto& v : y) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 * kTwoPi;
    ys.push_back(std::move(y));
  }
  return ys;
}

std::string alpha_label(const MultiIndex& a) {
  std::string s;
  for (int i = 0; i < a.dim(); ++i) s += (i ? ":" : "") + std::to_string(a[i]);
  return s;
}

std::string point_label(const std::vector<double>& y) {
  std::string s;
  for (std::size_t i = 0; i < y.size(); ++i) s += (i ? ":" : "") + format_double(y[i]);
  return s;
}

std::string growth_csv(const GrowthFit& f) {
  std::ostringstream os;
  write_growth_csv(f, os);
  return os.str();
}

CheckResult check(std::string name, bool passed, std::string detail) {
  CheckResult c;
  c.name = std::move(name);
  c.passed = passed;
  c.detail = std::move(detail);
  return c;
}

CheckResult verdict_check(std::string name, AnalyticVerdict v, AnalyticVerdict expected) {
  auto c = check(std::move(name), v == expected, std::string("verdict ") + to_string(v));
  c.inconclusive = v == AnalyticVerdict::inconclusive;
  return c;
}

AnalyticityOptions analyticity_options(const ExperimentConfig& c) {
  AnalyticityOptions o;
  o.growth.slope_tol = c.analyticity.slope_tol;
  o.growth.rise_tol = c.analyticity.rise_tol;
  o.cutoff_tol = c.analyticity.cutoff_tol;
  return o;
}

ReportEnvelope envelope(const std::string& command, const ExperimentConfig& c) {
  ReportEnvelope e;
  e.command = command;
  e.config = c;
  return e;
}

DiscreteSymbol symbol_on(const ExperimentConfig& c, int points, int cutoff) {
  return build_symbol(config_symbol_spec(c), TorusGrid(c.dimension, points), cutoff);
}

}  // namespace

int grid_for(int points, int symbol_cutoff, int matrix_cutoff, int bandwidth) {
  int n = points;
  while (4 * symbol_cutoff > n || matrix_cutoff + bandwidth > n / 2) n *= 2;
  return n;
}

// ---------------------------------------------------------------------------

ReportEnvelope cmd_classify(const ExperimentConfig& c, const CommandOptions& opt) {
  auto env = envelope("classify", c);
  const auto s = config_symbol(c);
  const int amax = c.analyticity.max_order;
  const auto ao = analyticity_options(c);

  const auto order = order_test(s, 0.0, multi_indices_up_to(c.dimension, c.analyticity.order_test_max_order));
  const auto sym = analyticity_fit(s, amax, ao);
  const auto ys = random_points(c.dimension, 2, c.seed);
  const auto orb = orbit_growth_table(s, amax, c.matrix_cutoff, ys, ao.growth);

  env.records["order_test"] = to_json(order);
  env.records["symbol_analyticity"] = to_json(sym);
  env.records["orbit_growth"] = to_json(orb);
  env.tables["symbol_growth"] = growth_csv(sym.fit);
  env.tables["orbit_growth"] = growth_csv(orb.fit);

  const bool agree = sym.fit.verdict == orb.fit.verdict;
  env.records["consistent"] = agree;
  auto order_check = check("order_zero_bounded", order.bounded && !order.grows_with_cutoff,
                           std::string("order test at m = 0: ") + (order.bounded ? "bounded" : "unbounded") +
                               (order.grows_with_cutoff ? ", growing with J" : ""));
  // Below B_max but still growing in J: the truncation cannot settle the order.
  order_check.inconclusive = order.bounded && order.grows_with_cutoff;
  env.checks.push_back(order_check);
  env.checks.push_back(verdict_check("symbol_verdict_decided", sym.fit.verdict, sym.fit.verdict));
  env.checks.back().inconclusive = sym.fit.verdict == AnalyticVerdict::inconclusive;
  env.checks.back().passed = !env.checks.back().inconclusive;
  env.checks.push_back(verdict_check("orbit_verdict_decided", orb.fit.verdict, orb.fit.verdict));
  env.checks.back().inconclusive = orb.fit.verdict == AnalyticVerdict::inconclusive;
  env.checks.back().passed = !env.checks.back().inconclusive;
  auto agreement = check("verdicts_agree", agree,
                         std::string("symbol ") + to_string(sym.fit.verdict) + ", orbit " + to_string(orb.fit.verdict));
  // A mismatch against an undecided verdict is itself undecided.
  const bool undecided = sym.fit.verdict == AnalyticVerdict::inconclusive ||
                         orb.fit.verdict == AnalyticVerdict::inconclusive;
  agreement.finding = !agree && !undecided;
  agreement.inconclusive = !agree && undecided;
  env.checks.push_back(agreement);
  if (opt.strict) {
    env.checks.push_back(check("cutoff_insensitive", !sym.cutoff_sensitive,
                               "C* at J/2 = " + format_double(sym.inner_c_star) +
                                   ", at J = " + format_double(sym.fit.c_star)));
  }

  if (c.analyticity.stability) {
    ReportJson stab;
    const int a2 = c.analyticity.compare_max_order;
    const auto sym_a = analyticity_fit(s, a2, ao);
    const auto orb_a = orbit_growth_table(s, a2, c.matrix_cutoff, {}, ao.growth);

    const int j2 = 2 * c.symbol_cutoff, k2 = 2 * c.matrix_cutoff;
    const int n2 = grid_for(c.grid_points, j2, k2, s.bandwidth(c.tolerances.bandwidth));
    const auto s2 = symbol_on(c, n2, j2);
    const auto sym_j = analyticity_fit(s2, amax, ao);
    const auto orb_j = orbit_growth_table(s2, amax, k2, {}, ao.growth);

    stab["compare_max_order"] = a2;
    stab["symbol_at_compare_order"] = to_json(sym_a.fit);
    stab["orbit_at_compare_order"] = to_json(orb_a.fit);
    stab["doubled"] = {{"grid_points", n2}, {"symbol_cutoff", j2}, {"matrix_cutoff", k2}};
    stab["symbol_at_doubled_cutoff"] = to_json(sym_j.fit);
    stab["orbit_at_doubled_cutoff"] = to_json(orb_j.fit);
    env.records["stability"] = stab;

    const AnalyticVerdict all[] = {sym_a.fit.verdict, orb_a.fit.verdict, sym_j.fit.verdict, orb_j.fit.verdict};
    bool stable = true;
    std::string detail;
    for (auto v : all) {
      stable = stable && v == sym.fit.verdict;
      detail += std::string(detail.empty() ? "" : ", ") + to_string(v);
    }
    auto st = check("verdicts_stable", stable, "A_max " + std::to_string(a2) + " and 2J reruns: " + detail);
    st.finding = !stable;
    env.checks.push_back(st);
  }
  return env;
}

// ---------------------------------------------------------------------------

ReportEnvelope cmd_norms(const ExperimentConfig& c, const CommandOptions& opt) {
  auto env = envelope("norms", c);
  const auto s = config_symbol(c);
  PowerIterationOptions power;
  power.tol = c.tolerances.power_iteration;
  ReportJson recs = ReportJson::array();
  std::ostringstream csv;
  csv << "p,c_p,sup_term,bound,measured,slack,holds\n";
  for (int p : c.norms.p) {
    try {
      const auto r = norm_bound_check(s, p, c.matrix_cutoff, c.tolerances.norm_bound, power);
      recs.push_back(to_json(r));
      csv << p << ',' << format_double(r.c_p.upper()) << ',' << format_double(r.sup_term) << ','
          << format_double(r.bound) << ',' << format_double(r.measured) << ',' << format_double(r.slack) << ','
          << (r.holds ? "true" : "false") << '\n';
      env.checks.push_back(check("norm_bound_p" + std::to_string(p), r.holds,
                                 "measured " + format_double(r.measured) + " <= bound " + format_double(r.bound)));
    } catch (const NonConvergence& e) {
      auto ch = check("norm_bound_p" + std::to_string(p), false,
                      std::string("norm not certified: ") + e.what() + "; best estimate " +
                          format_double(e.best_estimate()));
      ch.inconclusive = !opt.strict;
      env.checks.push_back(ch);
    }
  }
  env.records["norm_bounds"] = recs;
  env.tables["norms"] = csv.str();
  return env;
}

// ---------------------------------------------------------------------------

ReportEnvelope cmd_orbit(const ExperimentConfig& c, const CommandOptions&) {
  auto env = envelope("orbit", c);
  const auto s = config_symbol(c);
  const int k = c.matrix_cutoff;
  const auto ys = random_points(c.dimension, c.orbit.points, c.seed);
  const auto base = to_matrix(s, k, c.tolerances.bandwidth);

  double worst_two_path = 0.0;
  ReportJson two = ReportJson::array();
  for (const auto& y : ys) {
    const double d =
        (orbit_eval(s, y, k).matrix() - conjugate_translation(base, y).matrix()).cwiseAbs().maxCoeff();
    worst_two_path = std::max(worst_two_path, d);
    two.push_back({{"y", y}, {"max_entry_difference", d}});
  }
  env.records["two_path"] = two;
  env.checks.push_back(check("two_path_agreement", worst_two_path <= c.tolerances.two_path,
                             "max entry difference " + format_double(worst_two_path)));

  std::vector<MultiIndex> alphas;
  for (const auto& a : multi_indices_up_to(c.dimension, c.orbit.max_order)) {
    if (a.order() == 0) continue;
    bool ok = true;
    for (int i = 0; i < a.dim(); ++i) ok = ok && (c.dimension == 1 || a[i] <= 2);
    if (ok) alphas.push_back(a);
  }
  ReportJson rich = ReportJson::array();
  std::ostringstream csv;
  csv << "y,alpha,h,identity_error,identity_error_half,ratio,resolved\n";
  bool ratios_ok = true, floors_ok = true;
  double rmin = HUGE_VAL, rmax = 0.0;
  for (const auto& y : ys) {
    for (const auto& a : alphas) {
      // Higher derivatives divide by h^|alpha|; a larger step keeps the
      // truncation error above rounding so the ratio stays measurable.
      const double h = a.order() == 1 ? c.orbit.step : std::min(0.1, 5.0 * c.orbit.step);
      const auto r = richardson_check(s, a, y, h, k);
      rich.push_back(to_json(r));
      csv << point_label(y) << ',' << alpha_label(a) << ',' << format_double(h) << ','
          << format_double(r.coarse.identity_error) << ',' << format_double(r.fine.identity_error) << ','
          << format_double(r.ratio) << ',' << (r.resolved ? "true" : "false") << '\n';
      if (r.resolved) {
        rmin = std::min(rmin, r.ratio);
        rmax = std::max(rmax, r.ratio);
        ratios_ok = ratios_ok && r.ratio >= c.orbit.ratio_min && r.ratio <= c.orbit.ratio_max;
      } else {
        floors_ok = floors_ok && r.coarse.identity_error <= 1e-9 * std::max(1.0, r.coarse.exact_norm);
      }
    }
  }
  env.records["richardson"] = rich;
  env.tables["richardson"] = csv.str();
  env.checks.push_back(check("richardson_order4", ratios_ok,
                             rmax > 0.0 ? "resolved ratios in [" + format_double(rmin) + ", " + format_double(rmax) + "]"
                                        : "no resolved ratios (derivatives vanish)"));
  env.checks.push_back(check("unresolved_at_rounding", floors_ok,
                             "identity errors too small to measure a ratio stay below 1e-9"));

  const auto t = taylor_remainder_check(s, ys.front(), c.orbit.taylor_degrees, c.orbit.taylor_radius,
                                        static_cast<std::size_t>(c.orbit.taylor_samples), k, c.seed);
  env.records["taylor"] = to_json(t);
  std::ostringstream tcsv;
  tcsv << "degree,max_remainder,ratio_to_previous\n";
  for (const auto& r : t.rows) {
    tcsv << r.degree << ',' << format_double(r.max_remainder) << ',' << format_double(r.ratio_to_previous) << '\n';
  }
  env.tables["taylor"] = tcsv.str();
  // Geometric decay is expected only for uniformly analytic catalog families.
  bool expect_decay = false;
  if (!c.symbol.catalog.empty()) {
    CatalogOptions co;
    co.decay = c.symbol.decay;
    co.seed = c.symbol.catalog_seed;
    expect_decay = catalog_entry(c.symbol.catalog, c.dimension, co).uniformly_analytic;
  }
  env.records["taylor_decay_expected"] = expect_decay;
  if (expect_decay) {
    env.checks.push_back(check("taylor_geometric_decay", t.geometric_decay, "remainder ratios below 1 as D grows"));
  }
  return env;
}

// ---------------------------------------------------------------------------

namespace {

struct InvertRun {
  int grid_points = 0, symbol_cutoff = 0, matrix_cutoff = 0, out_cutoff = 0, bandwidth = 0;
  double condition = 0.0;
  double perturbation_norm = 0.0;  // ||epsilon Op(a)|| on the truncated space
  double neumann_error = 0.0;
  double neumann_bound = 0.0;       // q^{M+1} / ((1 - q) |lambda|)
  double neumann_bound_loose = 0.0; // q^{M+1} / (1 - q)
  AnalyticityReport fit;
};

InvertRun invert_run(const ExperimentConfig& c, int points, int j, int k, double rel_bandwidth_tol) {
  InvertRun r;
  r.grid_points = points;
  r.symbol_cutoff = j;
  r.matrix_cutoff = k;
  const auto s = symbol_on(c, points, j);
  const auto& grid = s.grid();
  const double lam = c.invert.lambda, eps = c.invert.epsilon;
  const auto a = symbol_add(DiscreteSymbol::constant_in_j(PeriodicFunction::constant(grid, lam), j),
                            symbol_scale(s, eps));
  const auto m = to_matrix(a, k, rel_bandwidth_tol);
  const Eigen::Index n = m.size();

  const auto sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(m.matrix()).singularValues();
  r.condition = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : HUGE_VAL;
  if (!(r.condition <= c.invert.max_condition)) {
    throw Error(ErrorKind::singular, "truncated operator is singular or ill-conditioned (cond = " +
                                         format_double(r.condition) + ")");
  }
  const Eigen::MatrixXcd inv = m.matrix().partialPivLu().inverse();
  const TruncatedOperator inverse(c.dimension, k, inv);

  r.out_cutoff = k / 4;
  r.bandwidth = k - r.out_cutoff;
  const auto inv_symbol = extract_symbol(inverse, r.out_cutoff, grid, r.bandwidth);
  r.fit = analyticity_fit(inv_symbol, c.analyticity.max_order, analyticity_options(c));

  // Neumann series for (lambda I + E)^{-1} with E = epsilon Op(a).
  const Eigen::MatrixXcd e = m.matrix() - lam * Eigen::MatrixXcd::Identity(n, n);
  r.perturbation_norm = difference_norm(TruncatedOperator(c.dimension, k, e));
  const double q = r.perturbation_norm / std::abs(lam);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n) / lam, sum = term;
  for (int t = 1; t <= c.invert.neumann_terms; ++t) {
    term = (-e / lam) * term;
    sum += term;
  }
  r.neumann_error = difference_norm(TruncatedOperator(c.dimension, k, inv - sum));
  if (q < 1.0) {
    r.neumann_bound_loose = std::pow(q, c.invert.neumann_terms + 1) / (1.0 - q);
    r.neumann_bound = r.neumann_bound_loose / std::abs(lam);
  } else {
    r.neumann_bound = r.neumann_bound_loose = HUGE_VAL;
  }
  return r;
}

ReportJson to_json(const InvertRun& r) {
  return {{"grid_points", r.grid_points},
          {"symbol_cutoff", r.symbol_cutoff},
          {"matrix_cutoff", r.matrix_cutoff},
          {"inverse_symbol_cutoff", r.out_cutoff},
          {"inverse_symbol_bandwidth", r.bandwidth},
          {"condition_number", r.condition},
          {"perturbation_norm", r.perturbation_norm},
          {"neumann_error", r.neumann_error},
          {"neumann_bound", r.neumann_bound},
          {"neumann_bound_without_inverse_lambda", r.neumann_bound_loose},
          {"inverse_symbol_analyticity", tpdo::to_json(r.fit)}};
}

}  // namespace

ReportEnvelope cmd_invert(const ExperimentConfig& c, const CommandOptions&) {
  auto env = envelope("invert", c);
  const auto s = config_symbol(c);
  const double lam = std::abs(c.invert.lambda), eps = std::abs(c.invert.epsilon);

  // Two certified upper bounds for ||epsilon Op(a)|| on L^2.
  int p = c.dimension / 2 + 1;
  double sup_term = 0.0;
  for (const auto& f : s.entries()) sup_term = std::max(sup_term, sup_norm(one_minus_laplacian_pow(f, p)));
  const auto cp = lattice_constant(c.dimension, p);
  const double smooth_bound = eps * cp.upper() * sup_term;
  // Op(a) = sum_m e_m * (Fourier multiplier j -> a_hat_j(m) / (2 pi)^n), each
  // term of norm sup_j |a_hat_j(m)| / (2 pi)^n.
  const auto& grid = s.grid();
  double coef_bound = 0.0;
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto mode = grid.freq_at(flat);
    double top = 0.0;
    for (const auto& f : s.entries()) top = std::max(top, std::abs(f.coefficient(mode)));
    coef_bound += top;
  }
  coef_bound *= eps * std::pow(kTwoPi, -c.dimension);
  const double best = std::min(smooth_bound, coef_bound);
  env.records["certification"] = {{"lambda", c.invert.lambda},
                                  {"epsilon", c.invert.epsilon},
                                  {"p", p},
                                  {"c_p", to_json(cp)},
                                  {"smoothness_bound", smooth_bound},
                                  {"coefficient_sum_bound", coef_bound},
                                  {"margin", lam - best}};
  env.checks.push_back(check("invertibility_certified", lam - best > 0.0,
                             "|lambda| - min(bounds) = " + format_double(lam - best)));
  if (!(lam - best > 0.0)) return env;

  const int bw = s.bandwidth(c.tolerances.bandwidth);
  const auto first = invert_run(c, c.grid_points, c.symbol_cutoff, c.matrix_cutoff, c.tolerances.bandwidth);
  const int j2 = 2 * c.symbol_cutoff, k2 = 2 * c.matrix_cutoff;
  const auto second = invert_run(c, grid_for(c.grid_points, j2, k2, bw), j2, k2, c.tolerances.bandwidth);
  env.records["runs"] = ReportJson::array({to_json(first), to_json(second)});
  env.tables["inverse_growth"] = growth_csv(first.fit.fit);
  env.tables["inverse_growth_doubled"] = growth_csv(second.fit.fit);

  env.checks.push_back(verdict_check("inverse_symbol_analytic", first.fit.fit.verdict,
                                     AnalyticVerdict::uniformly_analytic));
  env.checks.push_back(verdict_check("inverse_symbol_analytic_doubled", second.fit.fit.verdict,
                                     AnalyticVerdict::uniformly_analytic));
  const double c1 = first.fit.fit.c_star, c2 = second.fit.fit.c_star;
  const double change = c1 > 0.0 ? std::abs(c2 - c1) / c1 : (c2 == 0.0 ? 0.0 : HUGE_VAL);
  env.records["c_star_relative_change"] = change;
  env.checks.push_back(check("c_star_stable", change < c.invert.stability_tol,
                             "C* " + format_double(c1) + " -> " + format_double(c2)));
  for (const auto* r : {&first, &second}) {
    // Rounding in the dense inverse sets a floor well below any useful bound.
    const double floor = 1e-12 * std::max(1.0, 1.0 / lam);
    env.checks.push_back(check("neumann_within_bound_K" + std::to_string(r->matrix_cutoff),
                               r->neumann_error <= r->neumann_bound * (1.0 + 1e-6) + floor,
                               "error " + format_double(r->neumann_error) + ", bound " +
                                   format_double(r->neumann_bound)));
  }
  return env;
}

// ---------------------------------------------------------------------------

ReportEnvelope cmd_recover(const ExperimentConfig& c, const CommandOptions&) {
  auto env = envelope("recover", c);
  const auto s = config_symbol(c);
  MultiIndex beta = MultiIndex::constant(c.dimension, 2);
  if (!c.recover.beta.empty()) beta = MultiIndex(std::span<const int>(c.recover.beta));
  const int k = c.matrix_cutoff;
  const int out = k / 2, bw = k - out;

  const auto bs = bbeta_build(s, beta);
  const auto m = to_matrix(bs, k, c.tolerances.bandwidth);
  const auto extracted = extract_symbol(m, out, s.grid(), bw);
  const double bs_err = interior_symbol_diff(extracted, bs, out, bw);
  const auto recovered = recover_symbol(extracted, beta);
  const double err = interior_symbol_diff(recovered, s, out, bw);
  env.records["pipeline"] = {{"beta", to_json(beta)},
                             {"matrix_cutoff", k},
                             {"out_cutoff", out},
                             {"bandwidth", bw},
                             {"bbeta_extraction_error", bs_err},
                             {"round_trip_error", err}};
  env.checks.push_back(check("recovery_round_trip", err <= c.recover.tolerance, "error " + format_double(err)));

  ReportJson chain = ReportJson::array();
  std::ostringstream csv;
  csv << "alpha,beta,bbeta_norm,series,bound,measured,slack,holds\n";
  bool all = true;
  for (const auto& a : multi_indices_up_to(c.dimension, c.recover.chain_max_order)) {
    const auto r = bound_chain_check(s, a, k);
    chain.push_back(to_json(r));
    all = all && r.holds;
    csv << alpha_label(a) << ',' << alpha_label(r.beta) << ',' << format_double(r.bbeta_norm) << ','
        << format_double(r.series.upper) << ',' << format_double(r.bound) << ',' << format_double(r.measured) << ','
        << format_double(r.slack) << ',' << (r.holds ? "true" : "false") << '\n';
  }
  env.records["bound_chain"] = chain;
  env.tables["bound_chain"] = csv.str();
  env.checks.push_back(check("bound_chain_holds", all, "M_alpha <= ||B^beta|| S_{alpha,beta} for every alpha"));

  ReportJson mus = ReportJson::array(), shifts = ReportJson::array();
  std::ostringstream mcsv;
  mcsv << "p,mu,t_star,scan_mu,min_margin\n";
  bool mu_ok = true, shift_ok = true;
  for (int p : c.recover.mu_p) {
    const auto mu = mu_constant(p);
    mus.push_back(to_json(mu));
    mu_ok = mu_ok && mu.verified && std::abs(mu.mu - mu.scan_mu) <= 1e-8 * mu.mu;
    mcsv << p << ',' << format_double(mu.mu) << ',' << format_double(mu.t_star) << ','
         << format_double(mu.scan_mu) << ',' << format_double(mu.min_margin) << '\n';
    for (const auto& a : multi_indices_up_to(c.dimension, c.recover.chain_max_order)) {
      const auto r = factorial_shift_check(p, a);
      shifts.push_back(to_json(r));
      shift_ok = shift_ok && r.holds;
    }
  }
  env.records["mu"] = mus;
  env.records["factorial_shift"] = shifts;
  env.tables["mu"] = mcsv.str();
  if (!c.recover.mu_p.empty()) {
    env.checks.push_back(check("mu_inequality", mu_ok, "(a+2p)!/a! <= mu 2^a for a <= 60, scan agrees to 1e-8"));
    env.checks.push_back(check("factorial_shift", shift_ok, "prod (alpha_i+2p)! <= mu^n 2^|alpha| alpha!"));
  }
  return env;
}

ReportEnvelope run_command(const std::string& name, const ExperimentConfig& config, const CommandOptions& options) {
  if (name == "classify") return cmd_classify(config, options);
  if (name == "norms") return cmd_norms(config, options);
  if (name == "orbit") return cmd_orbit(config, options);
  if (name == "invert") return cmd_invert(config, options);
  if (name == "recover") return cmd_recover(config, options);
  throw Error(ErrorKind::config, "unknown command '" + name + "'");
}

}  // namespace tpdo
