#include "tpdo/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tpdo/error.hpp"

namespace tpdo {

namespace {

std::size_t box_count(int dim, int cutoff) {
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(2 * cutoff + 1);
  return n;
}

}  // namespace

DiscreteSymbol::DiscreteSymbol(const TorusGrid& grid, int cutoff, std::vector<PeriodicFunction> table)
    : grid_(grid), cutoff_(cutoff), table_(std::move(table)) {
  if (cutoff < 0) throw Error(ErrorKind::invalid_argument, "symbol cutoff must be >= 0");
  if (table_.size() != box_count(grid.dim(), cutoff)) {
    throw Error(ErrorKind::size_mismatch, "symbol table does not cover the box |j|_inf <= " + std::to_string(cutoff));
  }
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (!(table_[i].grid() == grid)) throw Error(ErrorKind::grid_mismatch, "symbol entries must share one grid");
    if (!table_[i].all_finite()) {
      throw Error(ErrorKind::domain, "symbol entry a_j for j = " + freq_of(i).str() + " is not finite");
    }
  }
}

DiscreteSymbol DiscreteSymbol::generate(const TorusGrid& grid, int cutoff, const Entry& entry) {
  if (cutoff < 0) throw Error(ErrorKind::invalid_argument, "symbol cutoff must be >= 0");
  const std::size_t count = box_count(grid.dim(), cutoff);
  std::vector<PeriodicFunction> table;
  table.reserve(count);
  const int side = 2 * cutoff + 1;
  for (std::size_t flat = 0; flat < count; ++flat) {
    FreqIndex j(grid.dim());
    std::size_t rest = flat;
    for (int i = grid.dim() - 1; i >= 0; --i) {
      j[i] = static_cast<int>(rest % static_cast<std::size_t>(side)) - cutoff;
      rest /= static_cast<std::size_t>(side);
    }
    table.push_back(entry(j));
  }
  return {grid, cutoff, std::move(table)};
}

DiscreteSymbol DiscreteSymbol::constant_in_j(const PeriodicFunction& f, int cutoff) {
  return generate(f.grid(), cutoff, [&](const FreqIndex&) { return f; });
}

const PeriodicFunction& DiscreteSymbol::at(const FreqIndex& j) const {
  if (j.dim() != dim()) throw Error(ErrorKind::size_mismatch, "frequency dimension differs from symbol dimension");
  return table_[box_offset(j, cutoff_)];
}

FreqIndex DiscreteSymbol::freq_of(std::size_t box_position) const {
  FreqIndex j(dim());
  const auto side = static_cast<std::size_t>(2 * cutoff_ + 1);
  for (int i = dim() - 1; i >= 0; --i) {
    j[i] = static_cast<int>(box_position % side) - cutoff_;
    box_position /= side;
  }
  return j;
}

DiscreteSymbol DiscreteSymbol::map(const std::function<PeriodicFunction(const PeriodicFunction&)>& f) const {
  std::map<const void*, PeriodicFunction> done;
  std::vector<PeriodicFunction> out;
  out.reserve(table_.size());
  for (const auto& a : table_) {
    const void* key = a.coefficients().data();
    auto it = done.find(key);
    if (it == done.end()) it = done.emplace(key, f(a)).first;
    out.push_back(it->second);
  }
  return {grid_, cutoff_, std::move(out)};
}

DiscreteSymbol DiscreteSymbol::restrict_to(int cutoff) const {
  if (cutoff > cutoff_) {
    throw Error(ErrorKind::cutoff, "cannot restrict a symbol of cutoff " + std::to_string(cutoff_) + " to " +
                                       std::to_string(cutoff));
  }
  return generate(grid_, cutoff, [&](const FreqIndex& j) { return at(j); });
}

int DiscreteSymbol::bandwidth(double rel_tol) const {
  double peak = max_symbol_coefficient(*this);
  if (peak == 0.0) return 0;
  int bw = 0;
  std::map<const void*, bool> seen;
  for (const auto& a : table_) {
    if (!seen.emplace(a.coefficients().data(), true).second) continue;
    auto c = a.coefficients();
    for (std::size_t flat = 0; flat < c.size(); ++flat) {
      if (std::abs(c[flat]) > rel_tol * peak) bw = std::max(bw, grid_.freq_at(flat).sup_norm());
    }
  }
  return bw;
}

DiscreteSymbol build_symbol(const SymbolSpec& spec, const TorusGrid& grid, int cutoff) {
  if (spec.max_variable_index() > grid.dim()) {
    throw Error(ErrorKind::domain, "symbol '" + spec.name + "' references component " +
                                       std::to_string(spec.max_variable_index()) + " on a " +
                                       std::to_string(grid.dim()) + "-dimensional torus");
  }
  std::vector<double> x(static_cast<std::size_t>(grid.dim()));
  std::vector<cplx> values(grid.size());
  auto sample = [&](const FreqIndex& j) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto node = grid.node(k);
      std::copy(node.begin(), node.begin() + grid.dim(), x.begin());
      cplx v;
      try {
        v = evaluate(spec, x, j.components());
      } catch (const Error& e) {
        throw Error(e.kind(), std::string(e.what()) + " (symbol '" + spec.name + "', j = " + j.str() + ", node " +
                                  std::to_string(k) + ")");
      }
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw Error(ErrorKind::domain, "symbol '" + spec.name + "' is not finite at j = " + j.str() + ", node " +
                                           std::to_string(k));
      }
      values[k] = v;
    }
    return analyze(grid, values);
  };
  if (!spec.depends_on_j()) {
    return DiscreteSymbol::constant_in_j(sample(FreqIndex(grid.dim())), cutoff);
  }
  return DiscreteSymbol::generate(grid, cutoff, sample);
}

DiscreteSymbol symbol_translate(const DiscreteSymbol& s, std::span<const double> y) {
  return s.map([&](const PeriodicFunction& a) { return translate(a, y); });
}

DiscreteSymbol symbol_derivative(const DiscreteSymbol& s, const MultiIndex& alpha, int max_order) {
  return s.map([&](const PeriodicFunction& a) { return derivative(a, alpha, max_order); });
}

DiscreteSymbol symbol_scale(const DiscreteSymbol& s, cplx c) {
  return s.map([&](const PeriodicFunction& a) { return scale(a, c); });
}

DiscreteSymbol symbol_add(const DiscreteSymbol& a, const DiscreteSymbol& b) {
  if (!(a.grid() == b.grid()) || a.cutoff() != b.cutoff()) {
    throw Error(ErrorKind::grid_mismatch, "symbols differ in grid or cutoff");
  }
  return DiscreteSymbol::generate(a.grid(), a.cutoff(),
                                  [&](const FreqIndex& j) { return pointwise_add(a.at(j), b.at(j)); });
}

double max_symbol_diff(const DiscreteSymbol& a, const DiscreteSymbol& b) {
  if (!(a.grid() == b.grid())) throw Error(ErrorKind::grid_mismatch, "symbols live on different grids");
  const int cutoff = std::min(a.cutoff(), b.cutoff());
  double m = 0.0;
  for (const auto& j : frequency_box(a.dim(), cutoff)) m = std::max(m, max_coefficient_diff(a.at(j), b.at(j)));
  return m;
}

double max_symbol_coefficient(const DiscreteSymbol& s) {
  double m = 0.0;
  for (const auto& a : s.entries()) {
    for (const auto& c : a.coefficients()) m = std::max(m, std::abs(c));
  }
  return m;
}

}  // namespace tpdo
