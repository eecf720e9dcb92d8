#include "tpdo/report.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tpdo/error.hpp"

namespace tpdo {

namespace {

void write_string(const std::string& s, std::string& out) {
  // Reuse nlohmann's escaping for strings.
  out += ReportJson(s).dump();
}

void write_value(const ReportJson& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case ReportJson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write_string(it.key(), out);
        out += ": ";
        write_value(it.value(), indent + 2, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case ReportJson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write_value(j[i], indent + 2, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case ReportJson::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      // Keep floats recognisable as floats.
      if (std::string(buf).find_first_of(".eEn") == std::string::npos) out += ".0";
      return;
    }
    default:
      out += j.dump();
  }
}

ReportJson fit_entries(const GrowthFit& f) {
  ReportJson a = ReportJson::array();
  for (const auto& e : f.entries) {
    a.push_back({{"alpha", to_json(e.alpha)}, {"magnitude", e.magnitude}, {"c_alpha", e.c_alpha}});
  }
  return a;
}

std::string iso_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const char* to_string(ReportStatus s) {
  switch (s) {
    case ReportStatus::pass: return "pass";
    case ReportStatus::fail: return "fail";
    case ReportStatus::inconclusive: return "inconclusive";
    case ReportStatus::finding: return "finding";
  }
  return "?";
}

int exit_code(ReportStatus s) {
  switch (s) {
    case ReportStatus::pass: return 0;
    case ReportStatus::fail: return 1;
    default: return 2;
  }
}

ReportStatus ReportEnvelope::status(bool strict) const {
  bool failed = false, undecided = false, finding = false;
  for (const auto& c : checks) {
    if (c.passed) continue;
    if (c.finding) {
      finding = true;
    } else if (c.inconclusive) {
      undecided = true;
    } else {
      failed = true;
    }
  }
  if (failed) return ReportStatus::fail;
  if (finding) return ReportStatus::finding;
  if (undecided) return strict ? ReportStatus::fail : ReportStatus::inconclusive;
  return ReportStatus::pass;
}

std::string dump_report_json(const ReportJson& j) {
  std::string out;
  write_value(j, 0, out);
  out += "\n";
  return out;
}

ReportJson envelope_json(const ReportEnvelope& env, bool strict) {
  ReportJson j;
  j["artifact"] = "tpdo-report";
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = "0.1.0";
  j["command"] = env.command;
  j["strict"] = strict;
  j["config"] = ReportJson::parse(emit_config(env.config));
  j["records"] = env.records;
  ReportJson checks = ReportJson::array();
  for (const auto& c : env.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"inconclusive", c.inconclusive},
                      {"finding", c.finding},
                      {"detail", c.detail}});
  }
  j["checks"] = checks;
  j["status"] = to_string(env.status(strict));
  return j;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / ("." + target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorKind::io, "failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::io, "cannot move report into place at '" + target.string() + "'");
  }
}

WrittenReport write_report(const ReportEnvelope& env, const std::string& directory, bool json, bool csv,
                           bool strict) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory '" + directory + "'");
  const std::string stem = env.config.output.stem.empty() ? env.command : env.config.output.stem;
  WrittenReport w;
  if (json) {
    w.json_path = (fs::path(directory) / (stem + ".json")).string();
    write_file_atomic(w.json_path, dump_report_json(envelope_json(env, strict)));
    w.files.push_back(w.json_path);
  }
  if (csv) {
    for (const auto& [suffix, text] : env.tables) {
      const auto p = (fs::path(directory) / (stem + "_" + suffix + ".csv")).string();
      write_file_atomic(p, text);
      w.files.push_back(p);
    }
  }
  const auto ts = (fs::path(directory) / (stem + ".timestamp.json")).string();
  ReportJson t;
  t["generated_at"] = iso_now();
  t["report"] = stem;
  write_file_atomic(ts, t.dump(2) + "\n");
  w.files.push_back(ts);
  return w;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ReportJson to_json(const MultiIndex& a) {
  ReportJson j = ReportJson::array();
  for (int c : a.components()) j.push_back(c);
  return j;
}

ReportJson to_json(const FreqIndex& k) {
  ReportJson j = ReportJson::array();
  for (int c : k.components()) j.push_back(c);
  return j;
}

ReportJson to_json(const GrowthFit& f) {
  return {{"max_order", f.max_order},
          {"slope_tol", f.options.slope_tol},
          {"rise_tol", f.options.rise_tol},
          {"c_star", f.c_star},
          {"plateau_slope", f.plateau_slope},
          {"rise", f.rise},
          {"degree_c", f.degree_c},
          {"verdict", to_string(f.verdict)},
          {"diagnostic", f.diagnostic},
          {"entries", fit_entries(f)}};
}

ReportJson to_json(const OrderReport& r) {
  ReportJson rows = ReportJson::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"alpha", to_json(row.alpha)},
                    {"ratio", row.ratio},
                    {"inner_ratio", row.inner_ratio},
                    {"shell_slope", row.shell_slope},
                    {"witness_j", to_json(row.witness_j)}});
  }
  return {{"order", r.order},
          {"cutoff", r.cutoff},
          {"bound", r.options.bound},
          {"growth_tol", r.options.growth_tol},
          {"growth_slope", r.options.growth_slope},
          {"max_ratio", r.max_ratio},
          {"witness_alpha", to_json(r.witness_alpha)},
          {"witness_j", to_json(r.witness_j)},
          {"bounded", r.bounded},
          {"grows_with_cutoff", r.grows_with_cutoff},
          {"rows", rows}};
}

ReportJson to_json(const AnalyticityReport& r) {
  return {{"cutoff", r.cutoff},
          {"max_order", r.max_order},
          {"cutoff_tol", r.options.cutoff_tol},
          {"rounding_floor", r.options.rounding_floor},
          {"inner_c_star", r.inner_c_star},
          {"cutoff_sensitive", r.cutoff_sensitive},
          {"fit", to_json(r.fit)}};
}

ReportJson to_json(const LatticeSum& s) {
  return {{"cutoff", s.cutoff},
          {"partial", s.partial},
          {"tail_estimate", s.tail_estimate},
          {"tail_uncertainty", s.tail_uncertainty},
          {"value", s.value()},
          {"upper", s.upper()}};
}

ReportJson to_json(const NormBoundRecord& r) {
  return {{"dim", r.dim},
          {"p", r.p},
          {"matrix_cutoff", r.matrix_cutoff},
          {"symbol_cutoff", r.symbol_cutoff},
          {"c_p", to_json(r.c_p)},
          {"sup_term", r.sup_term},
          {"bound", r.bound},
          {"measured", r.measured},
          {"slack", r.slack},
          {"tolerance", r.tolerance},
          {"holds", r.holds},
          {"power_iteration",
           {{"residual", r.norm_estimate.residual},
            {"iterations", r.norm_estimate.iterations},
            {"seed", r.norm_estimate.seed}}}};
}

ReportJson to_json(const OrbitDerivativeRecord& r) {
  return {{"alpha", to_json(r.alpha)},
          {"y", r.y},
          {"step", r.step},
          {"scheme_order", r.scheme_order},
          {"fd_estimate", r.fd_estimate},
          {"exact_norm", r.exact_norm},
          {"identity_error", r.identity_error}};
}

ReportJson to_json(const RichardsonRecord& r) {
  return {{"coarse", to_json(r.coarse)}, {"fine", to_json(r.fine)}, {"ratio", r.ratio}, {"resolved", r.resolved}};
}

ReportJson to_json(const OrbitGrowthTable& t) {
  return {{"matrix_cutoff", t.matrix_cutoff},
          {"sampled_points", t.sampled_points},
          {"max_conjugation_deviation", t.max_conjugation_deviation},
          {"fit", to_json(t.fit)}};
}

ReportJson to_json(const TaylorRemainderReport& r) {
  ReportJson rows = ReportJson::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"degree", row.degree},
                    {"max_remainder", row.max_remainder},
                    {"ratio_to_previous", row.ratio_to_previous}});
  }
  return {{"center", r.center},
          {"radius", r.radius},
          {"samples", r.samples},
          {"seed", r.seed},
          {"geometric_decay", r.geometric_decay},
          {"rows", rows}};
}

ReportJson to_json(const BoundChainRecord& r) {
  ReportJson factors = ReportJson::array();
  for (const auto& f : r.series.factors) factors.push_back(to_json(f));
  return {{"alpha", to_json(r.alpha)},
          {"beta", to_json(r.beta)},
          {"matrix_cutoff", r.matrix_cutoff},
          {"bbeta_norm", r.bbeta_norm},
          {"norm_converged", r.norm_converged},
          {"series", {{"value", r.series.value}, {"upper", r.series.upper}, {"factors", factors}}},
          {"bound", r.bound},
          {"measured", r.measured},
          {"measured_full", r.measured_full},
          {"slack", r.slack},
          {"holds", r.holds},
          {"alpha_factorial", r.alpha_factorial},
          {"beta_factorial", r.beta_factorial}};
}

ReportJson to_json(const MuConstant& m) {
  return {{"p", m.p},
          {"mu", m.mu},
          {"t_star", m.t_star},
          {"scan_mu", m.scan_mu},
          {"min_margin", m.min_margin},
          {"worst_a", m.worst_a},
          {"verified", m.verified}};
}

ReportJson to_json(const FactorialShiftRecord& r) {
  return {{"p", r.p}, {"alpha", to_json(r.alpha)}, {"mu", r.mu}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}};
}

}  // namespace tpdo
