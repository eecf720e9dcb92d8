#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tpdo/expression.hpp"
#include "tpdo/fourier.hpp"

namespace tpdo {

/// Truncated discrete symbol: one PeriodicFunction a_j for every j with
/// |j|_inf <= cutoff. Immutable; entries may share coefficient storage.
class DiscreteSymbol {
 public:
  using Entry = std::function<PeriodicFunction(const FreqIndex&)>;

  DiscreteSymbol(const TorusGrid& grid, int cutoff, std::vector<PeriodicFunction> table);

  /// Fill the table by calling `entry` for every j in the box.
  static DiscreteSymbol generate(const TorusGrid& grid, int cutoff, const Entry& entry);
  /// a_j = f for all j (multiplication operator).
  static DiscreteSymbol constant_in_j(const PeriodicFunction& f, int cutoff);

  const TorusGrid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return grid_.dim(); }
  int cutoff() const noexcept { return cutoff_; }
  std::size_t size() const noexcept { return table_.size(); }

  const PeriodicFunction& at(const FreqIndex& j) const;
  /// Entries in the dense box order (first coordinate slowest).
  std::span<const PeriodicFunction> entries() const noexcept { return table_; }
  FreqIndex freq_of(std::size_t box_position) const;

  /// Entrywise transform, same cutoff. Shared storage is transformed once.
  DiscreteSymbol map(const std::function<PeriodicFunction(const PeriodicFunction&)>& f) const;
  /// Entries with |j|_inf <= cutoff (cutoff must not exceed the current one).
  DiscreteSymbol restrict_to(int cutoff) const;

  /// Largest numerical bandwidth over all entries.
  int bandwidth(double rel_tol = 1e-10) const;

 private:
  TorusGrid grid_;
  int cutoff_;
  std::vector<PeriodicFunction> table_;
};

/// Evaluate `spec` at every node for every |j|_inf <= cutoff and analyze.
/// Specs that do not mention j are evaluated once and shared.
DiscreteSymbol build_symbol(const SymbolSpec& spec, const TorusGrid& grid, int cutoff);

/// (T_y a_j)_j: the symbol of T_y A T_{-y}.
DiscreteSymbol symbol_translate(const DiscreteSymbol& s, std::span<const double> y);
/// (d^alpha a_j)_j: the symbol of A^alpha.
DiscreteSymbol symbol_derivative(const DiscreteSymbol& s, const MultiIndex& alpha,
                                 int max_order = kDefaultMaxDerivativeOrder);
DiscreteSymbol symbol_scale(const DiscreteSymbol& s, cplx c);
DiscreteSymbol symbol_add(const DiscreteSymbol& a, const DiscreteSymbol& b);

/// Largest coefficient difference over all shared j.
double max_symbol_diff(const DiscreteSymbol& a, const DiscreteSymbol& b);
/// Largest coefficient modulus over all entries.
double max_symbol_coefficient(const DiscreteSymbol& s);

}  // namespace tpdo
