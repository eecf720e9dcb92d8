#include <doctest.h>

#include <Eigen/SVD>
#include <random>
#include <sstream>

#include "test_support.hpp"
#include "tpdo/catalog.hpp"
#include "tpdo/error.hpp"
#include "tpdo/lattice.hpp"
#include "tpdo/quantize.hpp"

using namespace tpdo;

namespace {

DiscreteSymbol make(const std::string& text, int dim, int points, int cutoff) {
  return build_symbol(parse_symbol_spec(text), TorusGrid(dim, points), cutoff);
}

double svd_norm(const TruncatedOperator& a) {
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(a.matrix()).singularValues()(0);
}

}  // namespace

TEST_CASE("constant and shift symbols") {
  const auto id = to_matrix(make("1", 2, 16, 3), 3);
  CHECK((id.matrix() - Eigen::MatrixXcd::Identity(id.size(), id.size())).cwiseAbs().maxCoeff() < 1e-14);

  const auto shift = to_matrix(make("exp(i*x1)", 1, 16, 4), 4);
  for (const auto& l : shift.basis()) {
    for (const auto& k : shift.basis()) {
      const double want = l[0] == k[0] + 1 ? 1.0 : 0.0;
      CHECK(std::abs(shift.entry(l, k) - want) < 1e-14);
    }
  }
}

TEST_CASE("matrix columns agree with apply") {
  const auto e = catalog_entry("random-trig", 2);
  const auto s = build_symbol(e.spec, TorusGrid(2, 32), 5);
  const auto m = to_matrix(s, 5);
  const double n2 = kTwoPi * kTwoPi;
  for (const auto& k : {FreqIndex{0, 0}, FreqIndex{-3, 2}, FreqIndex{5, -5}}) {
    const auto ak = apply(s, PeriodicFunction::exponential(s.grid(), k));
    for (const auto& l : m.basis()) CHECK(std::abs(ak.coefficient(l) / n2 - m.entry(l, k)) < 1e-12);
  }
}

TEST_CASE("apply agrees with the matrix on band-limited input") {
  const auto s = make("exp(i*x1)*cos(x1)/(1+abs(j)) + 0.3*sin(x1)", 1, 64, 10);
  const auto u = tpdo::testing::random_band_limited(s.grid(), 10, 4);
  const auto res = apply_detailed(s, u);
  CHECK_FALSE(res.cutoff_warning);
  const auto m = to_matrix(s, 10);
  Eigen::VectorXcd v(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) v(i) = u.coefficient(m.basis()[static_cast<std::size_t>(i)]);
  const Eigen::VectorXcd w = m.matrix() * v;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    CHECK(std::abs(w(i) - res.value.coefficient(m.basis()[static_cast<std::size_t>(i)])) < 1e-11);
  }
}

TEST_CASE("cutoff warning and strict mode") {
  const auto s = make("1", 1, 32, 4);
  const auto u = PeriodicFunction::exponential(s.grid(), FreqIndex{9});
  CHECK(apply_detailed(s, u).cutoff_warning);
  ApplyOptions o;
  o.strict = true;
  CHECK_THROWS_AS(apply_detailed(s, u, o), Error);
}

TEST_CASE("aliasing and cutoff preconditions") {
  const auto s = make("exp(cos(x1))", 1, 32, 12);
  CHECK_THROWS_AS(to_matrix(s, 13), Error);
  try {
    to_matrix(s, 12);
    FAIL("expected aliasing error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::aliasing);
  }
}

TEST_CASE("extraction inverts quantization on interior modes") {
  for (const auto& e : catalog(1)) {
    const auto s = build_symbol(e.spec, TorusGrid(1, std::max(64, e.recommended_points)), 12);
    const auto m = to_matrix(s, 12);
    const auto x = extract_symbol(m, 4, s.grid());
    CHECK_MESSAGE(interior_symbol_diff(x, s, 4, 8) < 1e-12, e.name);
  }
  const auto m = to_matrix(make("1", 1, 16, 4), 4);
  CHECK_THROWS_AS(extract_symbol(m, 3, TorusGrid(1, 16), 2), Error);
}

TEST_CASE("power iteration against the SVD") {
  const auto e = catalog_entry("random-trig", 1);
  const auto m = to_matrix(build_symbol(e.spec, TorusGrid(1, 32), 10), 10);
  const auto est = operator_norm_estimate(m);
  CHECK(est.norm == doctest::Approx(svd_norm(m)).epsilon(1e-9));
  CHECK(operator_norm_estimate(m).norm == est.norm);
  PowerIterationOptions o;
  o.max_iterations = 1;
  o.tol = 1e-15;
  CHECK_THROWS_AS(operator_norm_estimate(m, o), NonConvergence);

  std::vector<cplx> d(21, 0.5);
  d[3] = 3.0;
  d[7] = 2.0;
  CHECK(operator_norm(TruncatedOperator::diagonal(1, 10, d)) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(operator_norm(TruncatedOperator::identity(2, 3)) == doctest::Approx(1.0).epsilon(1e-14));

  // Two top singular values 1e-6 apart: the residual cannot be certified within
  // the cap, but the error carries an accurate Rayleigh estimate.
  d[3] = 1.0;
  d[7] = 1.0 - 1e-6;
  o = PowerIterationOptions{};
  o.max_iterations = 5000;
  try {
    operator_norm_estimate(TruncatedOperator::diagonal(1, 10, d), o);
    FAIL("expected non-convergence");
  } catch (const NonConvergence& e) {
    CHECK(e.best_estimate() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(e.residual() > o.tol);
  }

  // Random 50 x 50 complex matrix.
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd r(49, 49);
  for (Eigen::Index i = 0; i < r.size(); ++i) r.data()[i] = {nd(rng), nd(rng)};
  const TruncatedOperator rm(1, 24, r);
  CHECK(operator_norm(rm) == doctest::Approx(svd_norm(rm)).epsilon(1e-9));
}

TEST_CASE("operator algebra") {
  const auto a = to_matrix(make("exp(i*x1)+0.5", 1, 16, 3), 3);
  const auto b = adjoint(a);
  CHECK((compose(a, b).matrix() - a.matrix() * a.matrix().adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((add(a, scale(a, -1.0)).matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(compose(a, to_matrix(make("1", 1, 16, 2), 2)), Error);
}

TEST_CASE("matrix serialization round trip") {
  const auto a = to_matrix(make("exp(i*x1)*cos(x2)", 2, 16, 2), 2);
  std::stringstream ss;
  write_matrix(a, ss);
  const auto b = read_matrix(ss);
  CHECK(b.dim() == 2);
  CHECK(b.cutoff() == 2);
  CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() == 0.0);
  std::stringstream bad("NOTAMATRIX");
  CHECK_THROWS_AS(read_matrix(bad), Error);
  std::ostringstream csv;
  write_matrix_csv(a, csv);
  CHECK(csv.str().rfind("l1,l2,k1,k2,re,im\n", 0) == 0);
}

TEST_CASE("lattice constants against direct summation") {
  // Closed form: sum_{l in Z} 1/(1+l^2) = pi coth(pi).
  const double c1 = kPi / std::tanh(kPi);
  const auto s = lattice_constant(1, 1);
  CHECK(std::abs(s.value() - c1) < 1e-9);
  CHECK(s.upper() >= c1);
  CHECK(std::abs(s.value() - 3.15334) < 1e-5);

  // n = 2, p = 2 by brute force over a large box plus the tail integral of |l|^-4
  // outside the square, (pi/2 + 1) / L^2.
  const int big = 1500;
  double direct = 0.0;
  for (int a = -big; a <= big; ++a) {
    for (int b = -big; b <= big; ++b) direct += 1.0 / std::pow(1.0 + a * a + b * b, 2);
  }
  direct += (kPi / 2 + 1.0) / (static_cast<double>(big) * big);
  const auto s2 = lattice_constant(2, 2);
  CHECK(s2.value() == doctest::Approx(direct).epsilon(1e-6));
  CHECK(s2.upper() >= s2.value());
  CHECK_THROWS_AS(lattice_constant(2, 1), Error);

  const auto w = weighted_series_1d(0, 2);
  CHECK(std::abs(w.value() - c1) < 1e-9);
  // sum |l| / (1+l^2)^{3/2}, a = 1, b = 3: brute force with an integral tail 1/L.
  double d1 = 0.0;
  for (int l = 1; l <= 2000000; ++l) d1 += 2.0 * l / std::pow(1.0 + double(l) * l, 1.5);
  d1 += 2.0 / 2000000.5;
  CHECK(weighted_series_1d(1, 3).value() == doctest::Approx(d1).epsilon(1e-9));
  CHECK_THROWS_AS(weighted_series_1d(2, 3), Error);
}

TEST_CASE("Gauss-Legendre exactness") {
  std::vector<double> x, w;
  gauss_legendre(8, x, w);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 14);
  CHECK(s == doctest::Approx(2.0 / 15.0).epsilon(1e-14));
}

TEST_CASE("norm bound check") {
  const auto id = norm_bound_check(make("1", 1, 16, 6), 1, 6);
  CHECK(id.holds);
  CHECK(id.measured == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(id.slack == doctest::Approx(kPi / std::tanh(kPi) - 1.0).epsilon(1e-8));
  CHECK_THROWS_AS(norm_bound_check(make("1", 1, 16, 6), 0, 6), Error);
  CHECK_THROWS_AS(norm_bound_check(make("1", 2, 16, 4), 1, 4), Error);
  for (const auto& e : catalog(1)) {
    const auto s = build_symbol(e.spec, TorusGrid(1, std::max(64, e.recommended_points)), 10);
    CHECK_MESSAGE(norm_bound_check(s, 2, 10).holds, e.name);
  }
}
