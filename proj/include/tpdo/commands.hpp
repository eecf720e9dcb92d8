#pragma once

#include <string>

#include "tpdo/report.hpp"

namespace tpdo {

struct CommandOptions {
  /// Warnings (cutoff-sensitive constants, uncertified norms) become failures
  /// and inconclusive outcomes count as failures.
  bool strict = false;
};

/// Order test at m = 0, symbol-side analyticity fit and orbit growth table,
/// with the verdict cross-check and (optionally) stability reruns at 2J and
/// at a second A_max.
ReportEnvelope cmd_classify(const ExperimentConfig& config, const CommandOptions& options = {});
/// Norm bound check for every configured p.
ReportEnvelope cmd_norms(const ExperimentConfig& config, const CommandOptions& options = {});
/// Two-path orbit evaluation, finite-difference derivative identity with
/// Richardson ratios and Taylor remainders at seeded random points.
ReportEnvelope cmd_orbit(const ExperimentConfig& config, const CommandOptions& options = {});
/// Inverse of lambda I + epsilon Op(a): certification, dense inverse,
/// extracted inverse symbol, its analyticity, C* stability and a Neumann
/// series cross-check.
ReportEnvelope cmd_invert(const ExperimentConfig& config, const CommandOptions& options = {});
/// B^beta recovery pipeline, bound chain table, mu constants and factorial shifts.
ReportEnvelope cmd_recover(const ExperimentConfig& config, const CommandOptions& options = {});

/// Dispatch by name ("classify", "norms", "orbit", "invert", "recover").
ReportEnvelope run_command(const std::string& name, const ExperimentConfig& config,
                           const CommandOptions& options = {});

/// Smallest power of two N' >= N with 4 J <= N' and K + bandwidth <= N'/2.
int grid_for(int points, int symbol_cutoff, int matrix_cutoff, int bandwidth);

}  // namespace tpdo
