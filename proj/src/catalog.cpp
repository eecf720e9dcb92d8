#include "tpdo/catalog.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "tpdo/error.hpp"

namespace tpdo {

namespace {

/// Uniform double in [-1, 1) from raw engine bits, identical on every platform.
double unit_symmetric(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string random_trig_expression(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::ostringstream expr;
  bool first = true;
  const int degree = 2;
  // Modes m with |m|_inf <= 2; each carries a bounded j-dependent modulation
  // so the family is order zero without being a multiplication operator.
  const int side = 2 * degree + 1;
  int total = 1;
  for (int i = 0; i < dim; ++i) total *= side;
  for (int flat = 0; flat < total; ++flat) {
    int rest = flat;
    std::vector<int> m(static_cast<std::size_t>(dim));
    for (int i = dim - 1; i >= 0; --i) {
      m[static_cast<std::size_t>(i)] = rest % side - degree;
      rest /= side;
    }
    const double re = 0.25 * unit_symmetric(rng);
    const double im = 0.25 * unit_symmetric(rng);
    const double phase = 3.0 * unit_symmetric(rng);
    const double freq = 0.5 + 0.5 * std::abs(unit_symmetric(rng));
    if (!first) expr << " + ";
    first = false;
    expr << "(" << fmt(re) << " + " << fmt(im) << "*i)*exp(i*(";
    for (int i = 0; i < dim; ++i) {
      if (i) expr << " + ";
      expr << m[static_cast<std::size_t>(i)] << "*x" << (i + 1);
    }
    expr << "))*(1 + 0.5*cos(" << fmt(freq) << "*j1 + " << fmt(phase) << "))";
  }
  return expr.str();
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"constant", "multiplication", "j-decay", "analytic-pole", "bump", "random-trig"};
}

CatalogEntry catalog_entry(const std::string& name, int dim, const CatalogOptions& options) {
  if (dim < 1 || dim > 3) throw Error(ErrorKind::config, "catalog dimension must be 1, 2 or 3");
  CatalogEntry e;
  e.name = name;
  if (name == "constant") {
    e.description = "a_j = 1 (identity operator)";
    e.spec = parse_symbol_spec("1", {}, name);
    e.constant_in_j = true;
    e.constant_in_x = true;
    e.recommended_points = 16;
  } else if (name == "multiplication") {
    e.description = "a_j = exp(cos x1 [+ sin(x2)/2]) for all j (multiplication by an entire function)";
    e.spec = parse_symbol_spec(dim == 1 ? "exp(cos(x1))" : "exp(cos(x1) + 0.5*sin(x2))", {}, name);
    e.constant_in_j = true;
    e.recommended_points = 64;
  } else if (name == "j-decay") {
    e.description = "a_j = exp(i x1) / (1 + |j|)^s";
    e.spec = parse_symbol_spec("exp(i*x1)/(1+abs(j))^s", {{"s", options.decay}}, name);
    e.order = -options.decay;
    e.recommended_points = 16;
  } else if (name == "analytic-pole") {
    e.description = "a_j = 1 / (2 - exp(i x1)) for all j (pole at distance log 2 from the real axis)";
    e.spec = parse_symbol_spec("1/(2-exp(i*x1))", {}, name);
    e.constant_in_j = true;
    e.recommended_points = 128;
  } else if (name == "bump") {
    e.description = "a_j = exp(-1/sin^2(x1/2)) for all j (smooth, flat at x1 = 0, not analytic)";
    e.spec = parse_symbol_spec("flatexp(sin(x1/2)^2)", {}, name);
    e.constant_in_j = true;
    e.uniformly_analytic = false;
    e.recommended_points = 256;
  } else if (name == "random-trig") {
    e.description = "random trigonometric polynomial of degree 2 with bounded j-modulation";
    e.spec = parse_symbol_spec(random_trig_expression(dim, options.seed), {}, name);
    e.recommended_points = 32;
  } else {
    std::string known;
    for (const auto& n : catalog_names()) known += (known.empty() ? "" : ", ") + n;
    throw Error(ErrorKind::config, "unknown catalog entry '" + name + "' (known: " + known + ")");
  }
  return e;
}

std::vector<CatalogEntry> catalog(int dim, const CatalogOptions& options) {
  std::vector<CatalogEntry> out;
  for (const auto& n : catalog_names()) out.push_back(catalog_entry(n, dim, options));
  return out;
}

}  // namespace tpdo
