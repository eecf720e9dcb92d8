#include <doctest.h>

#include <random>
#include <sstream>

#include "tpdo/catalog.hpp"
#include "tpdo/error.hpp"
#include "tpdo/orbit.hpp"

using namespace tpdo;

namespace {

DiscreteSymbol make(const std::string& text, int dim, int points, int cutoff) {
  return build_symbol(parse_symbol_spec(text), TorusGrid(dim, points), cutoff);
}

double max_entry_diff(const TruncatedOperator& a, const TruncatedOperator& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("central stencil weights") {
  const auto w1 = central_weights(1, 4);
  REQUIRE(w1.size() == 5);
  const double want1[] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
  for (int i = 0; i < 5; ++i) CHECK(w1[i] == doctest::Approx(want1[i]).epsilon(1e-14));
  const auto w2 = central_weights(2, 4);
  const double want2[] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
  for (int i = 0; i < 5; ++i) CHECK(w2[i] == doctest::Approx(want2[i]).epsilon(1e-14));
  // Moments: sum w_i i^k = k! delta_{k,d} up to the accuracy order.
  for (int d = 1; d <= 4; ++d) {
    const auto w = central_weights(d, 4);
    const int r = static_cast<int>(w.size() / 2);
    for (int k = 0; k < d + 4; ++k) {
      double m = 0.0;
      for (int i = -r; i <= r; ++i) m += w[static_cast<std::size_t>(i + r)] * std::pow(i, k);
      const double want = k == d ? std::tgamma(d + 1.0) : 0.0;
      CHECK(m == doctest::Approx(want).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("orbit evaluation paths agree") {
  const auto e = catalog_entry("random-trig", 2);
  const auto s = build_symbol(e.spec, TorusGrid(2, 32), 6);
  const auto m = to_matrix(s, 6);
  const std::vector<double> zero{0.0, 0.0};
  CHECK(max_entry_diff(orbit_eval(s, zero, 6), m) == 0.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int i = 0; i < 5; ++i) {
    const std::vector<double> y{u(rng), u(rng)};
    CHECK(max_entry_diff(orbit_eval(s, y, 6), conjugate_translation(m, y)) < 1e-12);
  }
  // Fourier multipliers commute with translations.
  const auto mult = make("1/(1+abs(j))", 1, 16, 4);
  const std::vector<double> y{1.3};
  CHECK(max_entry_diff(orbit_eval(mult, y, 4), to_matrix(mult, 4)) < 1e-15);
  CHECK_THROWS_AS(orbit_eval(s, y, 6), Error);
}

TEST_CASE("norm is invariant under conjugation") {
  const auto e = catalog_entry("analytic-pole", 1);
  const auto s = build_symbol(e.spec, TorusGrid(1, 128), 10);
  const double n0 = operator_norm(to_matrix(s, 10));
  for (double y : {0.3, 2.0, 5.5}) {
    const std::vector<double> p{y};
    CHECK(operator_norm(orbit_eval(s, p, 10)) == doctest::Approx(n0).epsilon(1e-9));
  }
}

TEST_CASE("finite-difference orbit derivatives") {
  const std::vector<double> y{0.7};
  const auto c = make("1", 1, 16, 4);
  const auto r0 = orbit_derivative_check(c, MultiIndex{0}, y, 1e-2, 4);
  CHECK(r0.identity_error == 0.0);
  CHECK(orbit_derivative_check(c, MultiIndex{1}, y, 1e-2, 4).fd_estimate <= 1e-9);
  CHECK(orbit_derivative_check(c, MultiIndex{2}, y, 1e-2, 4).fd_estimate <= 1e-9);
  CHECK_THROWS_AS(orbit_derivative_check(c, MultiIndex{1}, y, 0.5, 4), Error);
  CHECK_THROWS_AS(orbit_derivative_check(c, MultiIndex{1}, y, 1e-5, 4), Error);
  CHECK_THROWS_AS(orbit_derivative_check(c, MultiIndex{5}, y, 1e-2, 4), Error);

  // Order-4 convergence: halving h divides the error by about 16.
  const auto jd = build_symbol(catalog_entry("j-decay", 1).spec, TorusGrid(1, 16), 6);
  const auto r = richardson_check(jd, MultiIndex{1}, y, 1e-2, 6);
  CHECK(r.resolved);
  CHECK(r.ratio >= 12.0);
  CHECK(r.ratio <= 20.0);
  // Without the (-1)^{|alpha|} factor the first derivative would be off by 2 ||A'||.
  CHECK(r.fine.identity_error < 1e-6 * r.fine.exact_norm);

  const auto mixed = build_symbol(catalog_entry("random-trig", 2).spec, TorusGrid(2, 32), 4);
  const std::vector<double> y2{0.2, 1.9};
  const auto rm = richardson_check(mixed, MultiIndex{1, 1}, y2, 0.05, 4);
  CHECK(rm.ratio == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("orbit growth table") {
  const auto c = orbit_growth_table(make("1", 1, 16, 4), 6, 4);
  for (const auto& e : c.fit.entries) {
    if (e.alpha.order() > 0) CHECK(e.magnitude == 0.0);
  }
  CHECK(c.fit.verdict == AnalyticVerdict::uniformly_analytic);

  // For a multiplication operator ||d^alpha phi(M)|| tends to sup |d^alpha phi|
  // from below as K grows.
  const auto m = make("exp(cos(x1))", 1, 64, 16);
  const std::vector<std::vector<double>> ys{{0.4}, {2.2}};
  const auto t = orbit_growth_table(m, 8, 16, ys);
  const auto sym = analyticity_fit(m, 8);
  CHECK(t.fit.verdict == AnalyticVerdict::uniformly_analytic);
  CHECK(t.max_conjugation_deviation < 1e-8 * t.fit.entries.back().magnitude);
  for (std::size_t i = 0; i < t.fit.entries.size(); ++i) {
    CHECK(t.fit.entries[i].magnitude <= sym.fit.entries[i].magnitude * (1 + 1e-6));
    CHECK(t.fit.entries[i].magnitude == doctest::Approx(sym.fit.entries[i].magnitude).epsilon(0.1));
  }
  std::ostringstream os;
  write_growth_csv(t.fit, os);
  CHECK(os.str().rfind("alpha,norm,c_alpha\n0,", 0) == 0);
}

TEST_CASE("Taylor remainders") {
  const std::vector<double> y0{0.5};
  const auto c = taylor_remainder_check(make("1", 1, 16, 4), y0, {2, 4, 6}, 0.1, 4, 4);
  for (const auto& r : c.rows) CHECK(r.max_remainder < 1e-14);
  const auto mult = taylor_remainder_check(make("1/(1+abs(j))", 1, 16, 4), y0, {2, 4}, 0.1, 4, 4);
  for (const auto& r : mult.rows) CHECK(r.max_remainder < 1e-14);

  const auto pole = build_symbol(catalog_entry("analytic-pole", 1).spec, TorusGrid(1, 128), 12);
  const auto t = taylor_remainder_check(pole, y0, {2, 4, 6}, 0.1, 6, 12);
  CHECK(t.geometric_decay);
  CHECK(t.rows[1].ratio_to_previous < 0.2);
  CHECK(t.rows[2].ratio_to_previous < 0.2);
  CHECK_THROWS_AS(taylor_remainder_check(pole, y0, {9}, 0.1, 2, 12), Error);
}
