#include "tpdo/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tpdo/error.hpp"

namespace tpdo {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::config, path + ": " + msg);
}

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

// Reads the keys of one object and rejects whatever is left over.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "(root)" : path_, "expected an object");
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    convert(*it, join(path_, key), out);
  }

  Section sub(const std::string& key) {
    seen_.insert(key);
    static const json empty = json::object();
    auto it = j_.find(key);
    return Section(it == j_.end() ? empty : *it, join(path_, key));
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail(join(path_, it.key()), "unknown key");
    }
  }

 private:
  static void convert(const json& v, const std::string& path, int& out) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    const auto x = v.get<long long>();
    if (x < -1000000000LL || x > 1000000000LL) fail(path, "integer out of range");
    out = static_cast<int>(x);
  }
  static void convert(const json& v, const std::string& path, std::uint64_t& out) {
    if (!v.is_number_unsigned()) fail(path, "expected a non-negative integer");
    out = v.get<std::uint64_t>();
  }
  static void convert(const json& v, const std::string& path, double& out) {
    if (!v.is_number()) fail(path, "expected a number");
    out = v.get<double>();
  }
  static void convert(const json& v, const std::string& path, bool& out) {
    if (!v.is_boolean()) fail(path, "expected true or false");
    out = v.get<bool>();
  }
  static void convert(const json& v, const std::string& path, std::string& out) {
    if (!v.is_string()) fail(path, "expected a string");
    out = v.get<std::string>();
  }
  static void convert(const json& v, const std::string& path, std::vector<int>& out) {
    if (!v.is_array()) fail(path, "expected an array of integers");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      int x = 0;
      convert(v[i], path + "[" + std::to_string(i) + "]", x);
      out.push_back(x);
    }
  }
  static void convert(const json& v, const std::string& path, std::map<std::string, double>& out) {
    if (!v.is_object()) fail(path, "expected an object of numbers");
    out.clear();
    for (auto it = v.begin(); it != v.end(); ++it) convert(it.value(), join(path, it.key()), out[it.key()]);
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void positive(double v, const char* path) {
  if (!(v > 0.0)) fail(path, "must be > 0");
}

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

void validate_config(const ExperimentConfig& c) {
  if (c.dimension < 1 || c.dimension > 3) fail("dimension", "must be 1, 2 or 3");
  if (c.grid_points < 8 || !power_of_two(c.grid_points)) fail("grid.points", "must be a power of two >= 8");
  if (c.matrix_cutoff < 0) fail("cutoffs.matrix", "must be >= 0");
  if (c.matrix_cutoff > c.symbol_cutoff) fail("cutoffs.matrix", "K must not exceed J");
  if (c.symbol_cutoff > c.grid_points / 4) fail("cutoffs.symbol", "J must not exceed N/4");

  const bool has_cat = !c.symbol.catalog.empty(), has_expr = !c.symbol.expression.empty();
  if (has_cat == has_expr) fail("symbol", "set exactly one of 'catalog' and 'expression'");
  if (!has_expr && !c.symbol.parameters.empty()) fail("symbol.parameters", "only used with 'expression'");

  positive(c.tolerances.round_trip, "tolerances.round_trip");
  positive(c.tolerances.norm_bound, "tolerances.norm_bound");
  positive(c.tolerances.power_iteration, "tolerances.power_iteration");
  positive(c.tolerances.bandwidth, "tolerances.bandwidth");
  positive(c.tolerances.two_path, "tolerances.two_path");

  const auto& a = c.analyticity;
  if (a.max_order < 4 || a.max_order > kDefaultMaxDerivativeOrder) fail("analyticity.max_order", "must lie in [4, 20]");
  if (a.compare_max_order < 4 || a.compare_max_order > kDefaultMaxDerivativeOrder) {
    fail("analyticity.compare_max_order", "must lie in [4, 20]");
  }
  positive(a.slope_tol, "analyticity.slope_tol");
  positive(a.rise_tol, "analyticity.rise_tol");
  positive(a.cutoff_tol, "analyticity.cutoff_tol");
  if (a.order_test_max_order < 0 || a.order_test_max_order > kDefaultMaxDerivativeOrder) {
    fail("analyticity.order_test_max_order", "must lie in [0, 20]");
  }

  if (c.norms.p.empty()) fail("norms.p", "must not be empty");
  for (std::size_t i = 0; i < c.norms.p.size(); ++i) {
    if (2 * c.norms.p[i] <= c.dimension) {
      fail("norms.p[" + std::to_string(i) + "]", "p must satisfy p > n/2 (p >= 1, and p >= 2 for n >= 2)");
    }
  }

  const auto& o = c.orbit;
  if (o.points < 1) fail("orbit.points", "must be >= 1");
  if (o.max_order < 1 || o.max_order > 4) fail("orbit.max_order", "must lie in [1, 4]");
  // Orders >= 2 use 5h and every Richardson pair also runs at h/2.
  if (!(o.step >= 2e-4 && o.step <= 2e-2)) fail("orbit.step", "must lie in [2e-4, 2e-2]");
  positive(o.ratio_min, "orbit.ratio_min");
  if (!(o.ratio_max > o.ratio_min)) fail("orbit.ratio_max", "must exceed orbit.ratio_min");
  if (o.taylor_degrees.empty()) fail("orbit.taylor_degrees", "must not be empty");
  for (std::size_t i = 0; i < o.taylor_degrees.size(); ++i) {
    if (o.taylor_degrees[i] < 0 || o.taylor_degrees[i] > 8) {
      fail("orbit.taylor_degrees[" + std::to_string(i) + "]", "must lie in [0, 8]");
    }
  }
  positive(o.taylor_radius, "orbit.taylor_radius");
  if (o.taylor_samples < 1) fail("orbit.taylor_samples", "must be >= 1");

  const auto& v = c.invert;
  if (!std::isfinite(v.lambda) || v.lambda == 0.0) fail("invert.lambda", "must be finite and nonzero");
  if (!std::isfinite(v.epsilon)) fail("invert.epsilon", "must be finite");
  if (v.neumann_terms < 0 || v.neumann_terms > 200) fail("invert.neumann_terms", "must lie in [0, 200]");
  positive(v.max_condition, "invert.max_condition");
  positive(v.stability_tol, "invert.stability_tol");

  const auto& r = c.recover;
  if (!r.beta.empty()) {
    if (static_cast<int>(r.beta.size()) != c.dimension) fail("recover.beta", "needs one entry per dimension");
    int total = 0;
    for (std::size_t i = 0; i < r.beta.size(); ++i) {
      if (r.beta[i] < 0) fail("recover.beta[" + std::to_string(i) + "]", "must be >= 0");
      total += r.beta[i];
    }
    if (total == 0) fail("recover.beta", "must be nonzero");
  }
  if (r.chain_max_order < 0 || r.chain_max_order > 12) fail("recover.chain_max_order", "must lie in [0, 12]");
  for (std::size_t i = 0; i < r.mu_p.size(); ++i) {
    if (r.mu_p[i] < 1 || r.mu_p[i] > 10) fail("recover.mu_p[" + std::to_string(i) + "]", "must lie in [1, 10]");
  }
  positive(r.tolerance, "recover.tolerance");
  if (c.output.directory.empty()) fail("output.directory", "must not be empty");
  if (c.output.stem.find('/') != std::string::npos) fail("output.stem", "must be a plain file name prefix");
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config, std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  Section root(j, "");
  root.read("dimension", c.dimension);
  root.read("seed", c.seed);

  auto grid = root.sub("grid");
  grid.read("points", c.grid_points);
  grid.finish();

  auto cut = root.sub("cutoffs");
  cut.read("symbol", c.symbol_cutoff);
  cut.read("matrix", c.matrix_cutoff);
  cut.finish();

  auto sym = root.sub("symbol");
  if (sym.has("expression") && !sym.has("catalog")) c.symbol.catalog.clear();
  sym.read("catalog", c.symbol.catalog);
  sym.read("expression", c.symbol.expression);
  sym.read("parameters", c.symbol.parameters);
  sym.read("decay", c.symbol.decay);
  sym.read("catalog_seed", c.symbol.catalog_seed);
  sym.finish();

  auto tol = root.sub("tolerances");
  tol.read("round_trip", c.tolerances.round_trip);
  tol.read("norm_bound", c.tolerances.norm_bound);
  tol.read("power_iteration", c.tolerances.power_iteration);
  tol.read("bandwidth", c.tolerances.bandwidth);
  tol.read("two_path", c.tolerances.two_path);
  tol.finish();

  auto an = root.sub("analyticity");
  an.read("max_order", c.analyticity.max_order);
  an.read("compare_max_order", c.analyticity.compare_max_order);
  an.read("slope_tol", c.analyticity.slope_tol);
  an.read("rise_tol", c.analyticity.rise_tol);
  an.read("cutoff_tol", c.analyticity.cutoff_tol);
  an.read("order_test_max_order", c.analyticity.order_test_max_order);
  an.read("stability", c.analyticity.stability);
  an.finish();

  auto no = root.sub("norms");
  // The default p list must satisfy p > n/2 in every dimension.
  if (!no.has("p") && c.dimension >= 2) c.norms.p = {c.dimension / 2 + 1, c.dimension / 2 + 2};
  no.read("p", c.norms.p);
  no.finish();

  auto ob = root.sub("orbit");
  ob.read("points", c.orbit.points);
  ob.read("max_order", c.orbit.max_order);
  ob.read("step", c.orbit.step);
  ob.read("ratio_min", c.orbit.ratio_min);
  ob.read("ratio_max", c.orbit.ratio_max);
  ob.read("taylor_degrees", c.orbit.taylor_degrees);
  ob.read("taylor_radius", c.orbit.taylor_radius);
  ob.read("taylor_samples", c.orbit.taylor_samples);
  ob.finish();

  auto inv = root.sub("invert");
  inv.read("lambda", c.invert.lambda);
  inv.read("epsilon", c.invert.epsilon);
  inv.read("neumann_terms", c.invert.neumann_terms);
  inv.read("max_condition", c.invert.max_condition);
  inv.read("stability_tol", c.invert.stability_tol);
  inv.finish();

  auto rec = root.sub("recover");
  rec.read("beta", c.recover.beta);
  rec.read("chain_max_order", c.recover.chain_max_order);
  rec.read("mu_p", c.recover.mu_p);
  rec.read("tolerance", c.recover.tolerance);
  rec.finish();

  auto out = root.sub("output");
  out.read("directory", c.output.directory);
  out.read("stem", c.output.stem);
  out.finish();

  root.finish();
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::config, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const ExperimentConfig& c) {
  json j;
  j["dimension"] = c.dimension;
  j["grid"] = {{"points", c.grid_points}};
  j["cutoffs"] = {{"symbol", c.symbol_cutoff}, {"matrix", c.matrix_cutoff}};
  json sym = json::object();
  if (!c.symbol.catalog.empty()) sym["catalog"] = c.symbol.catalog;
  if (!c.symbol.expression.empty()) {
    sym["expression"] = c.symbol.expression;
    sym["parameters"] = json::object();
    for (const auto& [k, v] : c.symbol.parameters) sym["parameters"][k] = v;
  }
  sym["decay"] = c.symbol.decay;
  sym["catalog_seed"] = c.symbol.catalog_seed;
  j["symbol"] = sym;
  j["tolerances"] = {{"round_trip", c.tolerances.round_trip},
                     {"norm_bound", c.tolerances.norm_bound},
                     {"power_iteration", c.tolerances.power_iteration},
                     {"bandwidth", c.tolerances.bandwidth},
                     {"two_path", c.tolerances.two_path}};
  const auto& a = c.analyticity;
  j["analyticity"] = {{"max_order", a.max_order},
                      {"compare_max_order", a.compare_max_order},
                      {"slope_tol", a.slope_tol},
                      {"rise_tol", a.rise_tol},
                      {"cutoff_tol", a.cutoff_tol},
                      {"order_test_max_order", a.order_test_max_order},
                      {"stability", a.stability}};
  j["norms"] = {{"p", c.norms.p}};
  const auto& o = c.orbit;
  j["orbit"] = {{"points", o.points},
                {"max_order", o.max_order},
                {"step", o.step},
                {"ratio_min", o.ratio_min},
                {"ratio_max", o.ratio_max},
                {"taylor_degrees", o.taylor_degrees},
                {"taylor_radius", o.taylor_radius},
                {"taylor_samples", o.taylor_samples}};
  const auto& v = c.invert;
  j["invert"] = {{"lambda", v.lambda},
                 {"epsilon", v.epsilon},
                 {"neumann_terms", v.neumann_terms},
                 {"max_condition", v.max_condition},
                 {"stability_tol", v.stability_tol}};
  const auto& r = c.recover;
  j["recover"] = {{"beta", r.beta}, {"chain_max_order", r.chain_max_order}, {"mu_p", r.mu_p}, {"tolerance", r.tolerance}};
  j["seed"] = c.seed;
  j["output"] = {{"directory", c.output.directory}, {"stem", c.output.stem}};
  return j.dump(2) + "\n";
}

SymbolSpec config_symbol_spec(const ExperimentConfig& c) {
  if (!c.symbol.expression.empty()) return parse_symbol_spec(c.symbol.expression, c.symbol.parameters, "custom");
  CatalogOptions o;
  o.decay = c.symbol.decay;
  o.seed = c.symbol.catalog_seed;
  return catalog_entry(c.symbol.catalog, c.dimension, o).spec;
}

DiscreteSymbol config_symbol(const ExperimentConfig& c) {
  const auto spec = config_symbol_spec(c);
  if (spec.max_variable_index() > c.dimension) {
    fail("symbol", "expression uses variables beyond dimension " + std::to_string(c.dimension));
  }
  return build_symbol(spec, TorusGrid(c.dimension, c.grid_points), c.symbol_cutoff);
}

}  // namespace tpdo
