#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tpdo/catalog.hpp"
#include "tpdo/symbol.hpp"

namespace tpdo {

/// Experiment description shared by every command. Stored as JSON with one
/// nested object per section; see docs/config.md for the field list.
struct ExperimentConfig {
  int dimension = 1;
  int grid_points = 128;
  int symbol_cutoff = 16;  ///< J
  int matrix_cutoff = 12;  ///< K

  struct Symbol {
    std::string catalog = "analytic-pole";  ///< catalog entry, or empty when expression is set
    std::string expression;
    std::map<std::string, double> parameters;
    double decay = 1.0;                    ///< j-decay exponent
    std::uint64_t catalog_seed = 20240611;  ///< random-trig seed
    bool operator==(const Symbol&) const = default;
  } symbol;

  struct Tolerances {
    double round_trip = 1e-12;
    double norm_bound = 1e-8;
    double power_iteration = 1e-10;
    double bandwidth = 1e-10;
    double two_path = 1e-12;
    bool operator==(const Tolerances&) const = default;
  } tolerances;

  struct Analyticity {
    int max_order = 14;          ///< A_max
    int compare_max_order = 10;  ///< second A_max for the stability check
    double slope_tol = 0.05;
    double rise_tol = 0.2;
    double cutoff_tol = 0.1;
    int order_test_max_order = 2;
    bool stability = true;  ///< rerun at 2J (and 2K) and at compare_max_order
    bool operator==(const Analyticity&) const = default;
  } analyticity;

  struct Norms {
    std::vector<int> p{1, 2};
    bool operator==(const Norms&) const = default;
  } norms;

  struct Orbit {
    int points = 3;  ///< random base points
    int max_order = 2;
    double step = 1e-2;
    double ratio_min = 12.0;
    double ratio_max = 20.0;
    std::vector<int> taylor_degrees{2, 4, 6};
    double taylor_radius = 0.1;
    int taylor_samples = 6;
    bool operator==(const Orbit&) const = default;
  } orbit;

  struct Invert {
    double lambda = 4.0;
    double epsilon = 1.0;
    int neumann_terms = 12;
    double max_condition = 1e12;
    double stability_tol = 0.1;
    bool operator==(const Invert&) const = default;
  } invert;

  struct Recover {
    std::vector<int> beta;  ///< empty: (2, ..., 2)
    int chain_max_order = 6;
    std::vector<int> mu_p{1, 2, 3};
    double tolerance = 1e-11;
    bool operator==(const Recover&) const = default;
  } recover;

  std::uint64_t seed = 42;

  struct Output {
    std::string directory = "tpdo-out";
    std::string stem;  ///< file name prefix; empty: the command name
    bool operator==(const Output&) const = default;
  } output;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parse and validate. Unknown keys, wrong types and violated invariants
/// raise Error(config) naming the field path (e.g. "orbit.step").
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
/// Canonical JSON text with every field present.
std::string emit_config(const ExperimentConfig& config);
/// Invariants: n in {1,2,3}, N a power of two >= 8, K <= J <= N/4, tolerances > 0.
void validate_config(const ExperimentConfig& config);

/// Catalog entry or custom expression described by the config.
SymbolSpec config_symbol_spec(const ExperimentConfig& config);
/// The symbol at cutoff J on the configured grid.
DiscreteSymbol config_symbol(const ExperimentConfig& config);

}  // namespace tpdo
