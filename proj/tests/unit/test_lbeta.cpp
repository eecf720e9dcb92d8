#include <doctest.h>

#include "test_support.hpp"
#include "tpdo/catalog.hpp"
#include "tpdo/error.hpp"
#include "tpdo/lbeta.hpp"

using namespace tpdo;

TEST_CASE("L^beta multiplier") {
  TorusGrid g(1, 16);
  const auto u = tpdo::testing::random_band_limited(g, 6, 1);
  CHECK(max_coefficient_diff(lbeta_apply(u, MultiIndex{0}), u) == 0.0);
  const auto e = PeriodicFunction::exponential(g, FreqIndex{3});
  CHECK(max_coefficient_diff(lbeta_apply(e, MultiIndex{1}), scale(e, cplx(1, 3))) < 1e-13);

  // (1 + d)^2 cos x = cos x - 2 sin x - cos x = -2 sin x.
  const auto c = tpdo::testing::from_values(g, [](double x) { return std::cos(x); });
  const auto s = tpdo::testing::from_values(g, [](double x) { return -2.0 * std::sin(x); });
  CHECK(max_coefficient_diff(lbeta_apply(c, MultiIndex{2}), s) < 1e-13);

  // Same as composing first-order factors (1 + d_i).
  TorusGrid g2(2, 16);
  const auto v = tpdo::testing::random_band_limited(g2, 5, 2);
  auto step = v;
  for (int k = 0; k < 2; ++k) step = pointwise_add(step, derivative(step, MultiIndex{1, 0}));
  step = pointwise_add(step, derivative(step, MultiIndex{0, 1}));
  CHECK(max_coefficient_diff(lbeta_apply(v, MultiIndex{2, 1}), step) < 1e-11);
}

TEST_CASE("L^beta inverse") {
  TorusGrid g(2, 16);
  const auto u = tpdo::testing::random_band_limited(g, 7, 3);
  const MultiIndex beta{3, 2};
  CHECK(max_coefficient_diff(lbeta_inverse(lbeta_apply(u, beta), beta), u) < 1e-13);
  CHECK(max_coefficient_diff(lbeta_apply(lbeta_inverse(u, beta), beta), u) < 1e-13);
  const auto one = PeriodicFunction::constant(g, 1.0);
  CHECK(max_coefficient_diff(lbeta_inverse(one, beta), one) == 0.0);
}

TEST_CASE("B^beta construction and recovery") {
  TorusGrid g(1, 32);
  const auto one = build_symbol(parse_symbol_spec("1"), g, 4);
  CHECK(max_symbol_diff(bbeta_build(one, MultiIndex{1}), one) == 0.0);
  const auto ex = build_symbol(parse_symbol_spec("exp(i*x1)"), g, 4);
  CHECK(max_symbol_diff(bbeta_build(ex, MultiIndex{1}), symbol_scale(ex, cplx(1, 1))) < 1e-13);
  CHECK_THROWS_AS(bbeta_build(one, MultiIndex{0}), Error);
  CHECK_THROWS_AS(recover_symbol(one, MultiIndex{0}), Error);

  const auto zero = symbol_scale(one, 0.0);
  CHECK(max_symbol_diff(recover_symbol(zero, MultiIndex{2}), zero) == 0.0);

  for (const auto& e : catalog(1)) {
    const auto s = build_symbol(e.spec, TorusGrid(1, e.recommended_points), 6);
    CHECK_MESSAGE(max_symbol_diff(recover_symbol(bbeta_build(s, MultiIndex{2}), MultiIndex{2}), s) <
                      1e-12 * std::max(1.0, max_symbol_coefficient(s)),
                  e.name);
  }
}

TEST_CASE("B^beta matrix columns") {
  const auto s = build_symbol(catalog_entry("random-trig", 1).spec, TorusGrid(1, 32), 6);
  const MultiIndex beta{2};
  const auto b = to_matrix(bbeta_build(s, beta), 6);
  for (const auto& k : b.basis()) {
    // Column k: coefficients of (L^beta a_k) e_k.
    const auto col = pointwise_mul(lbeta_apply(s.at(k), beta), PeriodicFunction::exponential(s.grid(), k));
    for (const auto& l : b.basis()) CHECK(std::abs(col.coefficient(l) / kTwoPi - b.entry(l, k)) < 1e-12);
  }
}

TEST_CASE("bound chain") {
  TorusGrid g(1, 32);
  const auto one = build_symbol(parse_symbol_spec("1"), g, 6);
  const auto r1 = bound_chain_check(one, MultiIndex{1}, 6);
  CHECK(r1.measured == 0.0);
  CHECK(r1.bound > 0.0);
  CHECK(r1.slack == r1.bound);

  const auto r0 = bound_chain_check(one, MultiIndex{0}, 6);
  CHECK(r0.beta == MultiIndex{2});
  CHECK(r0.series.value == doctest::Approx(kPi / std::tanh(kPi)).epsilon(1e-10));
  CHECK(r0.beta_factorial == 2.0);

  const auto pole = build_symbol(catalog_entry("analytic-pole", 1).spec, TorusGrid(1, 128), 12);
  for (int a = 0; a <= 6; ++a) {
    const auto r = bound_chain_check(pole, MultiIndex{a}, 12);
    CHECK(r.holds);
    CHECK(r.measured <= r.measured_full * (1 + 1e-12));
  }
}

TEST_CASE("mu constant") {
  // Dense-scan oracle computed independently of the library.
  auto scan = [](int p) {
    double best = 0.0;
    for (int i = 0; i <= 100000 * p; ++i) {
      const double t = i * 1e-4;
      double g = std::pow(2.0, -t);
      for (int m = 1; m <= 2 * p; ++m) g *= t + m;
      best = std::max(best, g);
    }
    return best;
  };
  const auto m1 = mu_constant(1);
  CHECK(m1.mu == doctest::Approx(scan(1)).epsilon(1e-9));
  CHECK(m1.mu >= 2.0);
  CHECK(m1.t_star > 0.0);
  CHECK(m1.verified);
  for (int p = 2; p <= 3; ++p) {
    const auto m = mu_constant(p);
    CHECK(m.verified);
    CHECK(m.mu >= std::tgamma(2.0 * p + 1));
    CHECK(m.mu == doctest::Approx(m.scan_mu).epsilon(1e-8));
  }
  // p = 2, a = 10: 14 * 13 * 12 * 11 <= mu 2^10.
  CHECK(14.0 * 13 * 12 * 11 <= mu_constant(2).mu * 1024);
  CHECK_THROWS_AS(mu_constant(0), Error);
}

TEST_CASE("factorial shift") {
  const auto r0 = factorial_shift_check(1, MultiIndex{0});
  CHECK(r0.holds);
  CHECK(r0.lhs == 2.0);
  const auto r3 = factorial_shift_check(1, MultiIndex{3});
  CHECK(r3.lhs == 120.0);
  CHECK(r3.rhs == doctest::Approx(48.0 * mu_constant(1).mu));
  CHECK(r3.holds);
  const auto r24 = factorial_shift_check(1, MultiIndex{2, 4});
  CHECK(r24.lhs == 24.0 * 720.0);
  CHECK(r24.holds);
  CHECK_THROWS_AS(factorial_shift_check(1, MultiIndex{41}), Error);
}
