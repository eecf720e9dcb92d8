#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "tpdo/commands.hpp"
#include "tpdo/error.hpp"

namespace {

constexpr int kUsageExit = 3;

// Errors whose remedy is a different config (bad field, unparsable symbol,
// grid too coarse for the cutoffs) share the usage exit code.
bool is_config_error(tpdo::ErrorKind k) {
  using tpdo::ErrorKind;
  return k == ErrorKind::config || k == ErrorKind::syntax || k == ErrorKind::aliasing || k == ErrorKind::cutoff ||
         k == ErrorKind::differentiation_cap;
}

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool strict = false;
  bool json = false;
  bool csv = false;
};

int run(const std::string& command, const Flags& f) {
  tpdo::ExperimentConfig config = f.config_path.empty() ? tpdo::ExperimentConfig{} : tpdo::load_config(f.config_path);
  if (f.seed) config.seed = *f.seed;
  if (f.out) config.output.directory = *f.out;
  tpdo::validate_config(config);

  const auto env = tpdo::run_command(command, config, {f.strict});
  // Neither flag given: JSON only.
  const bool json = f.json || !f.csv;
  const auto written = tpdo::write_report(env, config.output.directory, json, f.csv, f.strict);

  const auto status = env.status(f.strict);
  for (const auto& c : env.checks) {
    const char* tag = c.passed ? "pass" : c.finding ? "finding" : c.inconclusive ? "inconclusive" : "fail";
    std::cout << "  [" << tag << "] " << c.name << ": " << c.detail << '\n';
  }
  std::cout << command << ": " << tpdo::to_string(status) << '\n';
  for (const auto& file : written.files) std::cout << "  wrote " << file << '\n';
  return tpdo::exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-symbol pseudodifferential experiments on the torus"};
  app.require_subcommand(1);
  Flags flags;
  std::uint64_t seed = 0;
  std::string out;
  app.add_option("--config", flags.config_path, "experiment config (JSON)")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed, overrides the config");
  auto* out_opt = app.add_option("--out", out, "output directory, overrides the config");
  app.add_flag("--strict", flags.strict, "treat inconclusive outcomes and warnings as failures");
  app.add_flag("--json", flags.json, "write the JSON report (default)");
  app.add_flag("--csv", flags.csv, "write CSV tables");

  const std::pair<const char*, const char*> commands[] = {
      {"classify", "order test, symbol and orbit analyticity verdicts"},
      {"norms", "operator norm bound for each configured p"},
      {"orbit", "translation orbit identities, Richardson ratios, Taylor remainders"},
      {"invert", "inverse of lambda I + epsilon Op(a) and its symbol"},
      {"recover", "B^beta recovery pipeline, bound chain and mu constants"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageExit;
  }
  if (seed_opt->count()) flags.seed = seed;
  if (out_opt->count()) flags.out = out;

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, flags);
  } catch (const tpdo::Error& e) {
    std::cerr << "tpdo " << command << ": " << tpdo::to_string(e.kind()) << " error: " << e.what() << '\n';
    return is_config_error(e.kind()) ? kUsageExit : 1;
  } catch (const std::exception& e) {
    std::cerr << "tpdo " << command << ": " << e.what() << '\n';
    return 1;
  }
}
