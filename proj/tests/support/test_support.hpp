#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "tpdo/fourier.hpp"

namespace tpdo::testing {

/// Random trigonometric polynomial with modes |k|_inf <= band.
inline PeriodicFunction random_band_limited(const TorusGrid& g, int band, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> c(g.size());
  for (std::size_t f = 0; f < g.size(); ++f) {
    if (g.freq_at(f).sup_norm() <= band) c[f] = {nd(rng), nd(rng)};
  }
  return PeriodicFunction(g, std::move(c));
}

inline PeriodicFunction from_values(const TorusGrid& g, double (*fn)(double)) {
  std::vector<cplx> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = fn(g.node(i)[0]);
  return analyze(g, v);
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace tpdo::testing
