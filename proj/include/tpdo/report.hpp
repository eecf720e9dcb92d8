#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tpdo/classify.hpp"
#include "tpdo/config.hpp"
#include "tpdo/lbeta.hpp"
#include "tpdo/orbit.hpp"

namespace tpdo {

using ReportJson = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

enum class ReportStatus { pass, fail, inconclusive, finding };

const char* to_string(ReportStatus s);
/// 0 pass, 1 fail, 2 inconclusive or finding.
int exit_code(ReportStatus s);

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Checks that cannot decide (e.g. an inconclusive verdict) count as
  /// inconclusive rather than failed.
  bool inconclusive = false;
  /// Two computations that should agree did not (e.g. symbol-side and
  /// orbit-side verdicts). Reported as status "finding", never as a pass.
  bool finding = false;
  std::string detail;
};

struct ReportEnvelope {
  std::string command;
  ExperimentConfig config;
  ReportJson records = ReportJson::object();
  std::vector<CheckResult> checks;
  /// CSV tables keyed by file suffix, e.g. "orbit_growth" -> contents.
  std::map<std::string, std::string> tables;

  ReportStatus status(bool strict = false) const;
};

/// Deterministic text: two-space indent, keys in insertion order, floats with
/// 17 significant digits, NaN and infinities as null.
std::string dump_report_json(const ReportJson& j);

ReportJson envelope_json(const ReportEnvelope& env, bool strict = false);

/// Write via a temporary file in the same directory and rename.
void write_file_atomic(const std::string& path, const std::string& contents);

struct WrittenReport {
  std::vector<std::string> files;
  std::string json_path;
};

/// Writes <dir>/<stem>.json and <dir>/<stem>_<table>.csv as requested, plus
/// <dir>/<stem>.timestamp.json holding the wall-clock time, which is kept out
/// of the main report so that reruns are byte-identical.
WrittenReport write_report(const ReportEnvelope& env, const std::string& directory, bool json, bool csv,
                           bool strict = false);

// Record serializers.
ReportJson to_json(const GrowthFit& f);
ReportJson to_json(const OrderReport& r);
ReportJson to_json(const AnalyticityReport& r);
ReportJson to_json(const NormBoundRecord& r);
ReportJson to_json(const LatticeSum& s);
ReportJson to_json(const OrbitDerivativeRecord& r);
ReportJson to_json(const RichardsonRecord& r);
ReportJson to_json(const OrbitGrowthTable& t);
ReportJson to_json(const TaylorRemainderReport& r);
ReportJson to_json(const BoundChainRecord& r);
ReportJson to_json(const MuConstant& m);
ReportJson to_json(const FactorialShiftRecord& r);
ReportJson to_json(const MultiIndex& a);
ReportJson to_json(const FreqIndex& j);

/// "%.17g" for finite values, "nan"/"inf"/"-inf" otherwise (CSV cells).
std::string format_double(double v);

}  // namespace tpdo
