#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tpdo/expression.hpp"

namespace tpdo {

/// Shipped symbol families. Each entry is an expression in the symbol
/// grammar plus what is known about it in closed form.
struct CatalogEntry {
  std::string name;
  std::string description;
  SymbolSpec spec;
  /// Order m for which the order test must report "bounded".
  double order = 0.0;
  /// Whether the family satisfies the uniform analyticity estimate.
  bool uniformly_analytic = true;
  /// Whether a_j does not depend on j (multiplication operator).
  bool constant_in_j = false;
  /// Whether a_j does not depend on x (Fourier multiplier).
  bool constant_in_x = false;
  /// Grid size needed to resolve the family to ~1e-12 without aliasing.
  int recommended_points = 64;
};

struct CatalogOptions {
  /// Decay exponent of the j-decay family.
  double decay = 1.0;
  /// Seed of the random trigonometric family.
  std::uint64_t seed = 20240611;
};

std::vector<std::string> catalog_names();

/// Entry for the given dimension. Throws Error(config) for unknown names.
CatalogEntry catalog_entry(const std::string& name, int dim, const CatalogOptions& options = {});

std::vector<CatalogEntry> catalog(int dim, const CatalogOptions& options = {});

}  // namespace tpdo
