#include <doctest.h>

#include "test_support.hpp"
#include "tpdo/error.hpp"
#include "tpdo/fourier.hpp"

using namespace tpdo;
using tpdo::testing::random_band_limited;

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(TorusGrid(1, 7), Error);
  CHECK_THROWS_AS(TorusGrid(4, 8), Error);
  TorusGrid g(2, 8);
  CHECK(g.size() == 64);
  CHECK(g.min_freq() == -4);
  CHECK(g.max_freq() == 3);
  CHECK(g.freq_at(g.coeff_offset(FreqIndex{-2, 3})) == FreqIndex{-2, 3});
}

TEST_CASE("analyze and synthesize are inverse") {
  for (int dim = 1; dim <= 3; ++dim) {
    TorusGrid g(dim, dim == 3 ? 8 : 16);
    const auto u = random_band_limited(g, g.max_freq(), 11 + dim);
    const auto back = analyze(g, synthesize(u));
    CHECK(max_coefficient_diff(u, back) < 1e-12);
  }
}

TEST_CASE("exponential has coefficient (2 pi)^n") {
  TorusGrid g(2, 16);
  const auto e = PeriodicFunction::exponential(g, FreqIndex{2, -3});
  CHECK(std::abs(e.coefficient(FreqIndex{2, -3}) - kTwoPi * kTwoPi) < 1e-12);
  const auto v = e.values();
  const auto x = g.node(37);
  CHECK(std::abs(v[37] - std::exp(cplx(0, 2 * x[0] - 3 * x[1]))) < 1e-13);
  CHECK_THROWS_AS(PeriodicFunction::exponential(g, FreqIndex{8, 0}), Error);
}

TEST_CASE("Parseval identity") {
  TorusGrid g(2, 16);
  const auto u = random_band_limited(g, 5, 3);
  double lhs = 0.0, rhs = 0.0;
  for (const auto& v : u.values()) lhs += std::norm(v) * g.weight();
  for (const auto& c : u.coefficients()) rhs += std::norm(c);
  CHECK(lhs == doctest::Approx(rhs / (kTwoPi * kTwoPi)).epsilon(1e-12));
}

TEST_CASE("spectral derivative of sin is cos") {
  TorusGrid g(1, 32);
  const auto s = tpdo::testing::from_values(g, [](double x) { return std::sin(3 * x); });
  const auto d = derivative(s, MultiIndex{1});
  const auto c = tpdo::testing::from_values(g, [](double x) { return 3 * std::cos(3 * x); });
  CHECK(max_coefficient_diff(d, c) < 1e-12);
  CHECK_THROWS_AS(derivative(s, MultiIndex{21}), Error);
  CHECK_NOTHROW(derivative(s, MultiIndex{21}, 30));
}

TEST_CASE("translation group law and action on exponentials") {
  TorusGrid g(2, 16);
  const auto u = random_band_limited(g, 6, 5);
  const std::vector<double> y{0.3, -1.1}, z{2.0, 0.7}, yz{2.3, -0.4};
  CHECK(max_coefficient_diff(translate(translate(u, y), z), translate(u, yz)) < 1e-11);
  const auto e = PeriodicFunction::exponential(g, FreqIndex{1, 2});
  const auto te = translate(e, y);
  CHECK(std::abs(te.coefficient(FreqIndex{1, 2}) - kTwoPi * kTwoPi * std::exp(cplx(0, -(0.3 - 2.2)))) < 1e-11);
  // Full periods act trivially.
  const std::vector<double> period{kTwoPi, -2 * kTwoPi};
  CHECK(max_coefficient_diff(translate(u, period), u) < 1e-10);
}

TEST_CASE("sup norm, products and sums") {
  TorusGrid g(1, 16);
  const auto c = tpdo::testing::from_values(g, [](double x) { return std::cos(x + 0.1); });
  CHECK(sup_norm(c) == doctest::Approx(1.0).epsilon(1e-3));
  const auto e1 = PeriodicFunction::exponential(g, FreqIndex{1});
  const auto e2 = PeriodicFunction::exponential(g, FreqIndex{2});
  CHECK(max_coefficient_diff(pointwise_mul(e1, e2), PeriodicFunction::exponential(g, FreqIndex{3})) < 1e-12);
  CHECK(max_coefficient_diff(pointwise_add(e1, scale(e1, -1.0)), PeriodicFunction(g)) == 0.0);
  // Products beyond the stored box are truncated, not aliased.
  const auto e7 = PeriodicFunction::exponential(g, FreqIndex{7});
  CHECK(max_coefficient_diff(pointwise_mul(e7, e2), PeriodicFunction(g)) < 1e-12);
}

TEST_CASE("(1 - Laplacian)^p is the multiplier (1 + |k|^2)^p") {
  TorusGrid g(2, 16);
  const auto e = PeriodicFunction::exponential(g, FreqIndex{2, -1});
  const auto le = one_minus_laplacian_pow(e, 2);
  CHECK(std::abs(le.coefficient(FreqIndex{2, -1}) - 36.0 * kTwoPi * kTwoPi) < 1e-9);
}

TEST_CASE("resample, bandwidth and noise floor") {
  TorusGrid g(1, 16), fine(1, 64);
  const auto u = random_band_limited(g, 5, 9);
  const auto up = resample(u, fine);
  CHECK(max_coefficient_diff(resample(up, g), u) == 0.0);
  CHECK(numerical_bandwidth(u) == 5);
  CHECK(numerical_bandwidth(PeriodicFunction(g)) == 0);
  std::vector<cplx> c(g.size());
  c[g.coeff_offset(FreqIndex{0})] = 1.0;
  c[g.coeff_offset(FreqIndex{6})] = 1e-15;
  const PeriodicFunction f(g, c);
  CHECK(numerical_bandwidth(f) == 0);
  CHECK(drop_below(f, 1e-13).coefficient(FreqIndex{6}) == cplx{});
  CHECK(drop_below(f, 1e-16).coefficient(FreqIndex{6}) == cplx{1e-15});
}

TEST_CASE("realness") {
  TorusGrid g(1, 16);
  CHECK(tpdo::testing::from_values(g, [](double x) { return std::exp(std::cos(x)); }).is_real());
  CHECK_FALSE(PeriodicFunction::exponential(g, FreqIndex{1}).is_real());
}
