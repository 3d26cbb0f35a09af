#include "shblab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace shblab {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
  if (!obj.is_object()) bad(where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      bad("unknown key '" + it.key() + "' in " + where);
}

double get_num(const json& obj, const std::string& key,
               const std::string& where) {
  if (!obj.contains(key)) bad(where + " is missing key '" + key + "'");
  if (!obj[key].is_number()) bad(where + "." + key + " must be a number");
  return obj[key].get<double>();
}

SpectrumProfile parse_spectrum(const json& j) {
  SpectrumProfile sp;
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    bad("spectrum must be an object with a string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "power_law") {
    require_keys(j, "spectrum", {"kind", "a", "c"});
    sp.kind = SpectrumProfile::Kind::PowerLaw;
    sp.a = get_num(j, "a", "spectrum");
    sp.c = j.contains("c") ? get_num(j, "c", "spectrum") : 1.0;
  } else if (kind == "log_adjusted") {
    require_keys(j, "spectrum", {"kind", "c"});
    sp.kind = SpectrumProfile::Kind::LogAdjusted;
    sp.c = get_num(j, "c", "spectrum");
  } else if (kind == "exponential") {
    require_keys(j, "spectrum", {"kind"});
    sp.kind = SpectrumProfile::Kind::Exponential;
  } else if (kind == "explicit") {
    require_keys(j, "spectrum", {"kind", "values"});
    if (!j.contains("values") || !j["values"].is_array())
      bad("explicit spectrum needs a 'values' array");
    sp.kind = SpectrumProfile::Kind::Explicit;
    for (const json& v : j["values"]) {
      if (!v.is_number()) bad("spectrum.values must all be numbers");
      sp.values.push_back(v.get<double>());
    }
  } else {
    bad("spectrum.kind '" + kind +
        "' not one of power_law, log_adjusted, exponential, explicit");
  }
  return sp;
}

OptimumProfile parse_optimum(const json& j) {
  OptimumProfile op;
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    bad("optimum must be an object with a string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "source_condition") {
    require_keys(j, "optimum", {"kind", "b"});
    op.kind = OptimumProfile::Kind::SourceCondition;
    op.b = get_num(j, "b", "optimum");
  } else if (kind == "linf_constant") {
    require_keys(j, "optimum", {"kind", "c"});
    op.kind = OptimumProfile::Kind::LinfConstant;
    op.c = get_num(j, "c", "optimum");
  } else if (kind == "explicit") {
    require_keys(j, "optimum", {"kind", "values"});
    if (!j.contains("values") || !j["values"].is_array())
      bad("explicit optimum needs a 'values' array");
    op.kind = OptimumProfile::Kind::Explicit;
    for (const json& v : j["values"]) {
      if (!v.is_number()) bad("optimum.values must all be numbers");
      op.values.push_back(v.get<double>());
    }
  } else {
    bad("optimum.kind '" + kind +
        "' not one of source_condition, linf_constant, explicit");
  }
  return op;
}

// Rule cell: a bare number (constant) or {"kind": ...} object.
ParamRule parse_rule(const json& j, const std::string& where) {
  if (j.is_number()) return ParamRule::fixed(j.get<double>());
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    bad(where + " must be a number or an object with a string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "fixed") {
    require_keys(j, where, {"kind", "value"});
    return ParamRule::fixed(get_num(j, "value", where));
  }
  if (kind == "power_of_T") {
    require_keys(j, where, {"kind", "coeff", "exponent"});
    return ParamRule::power(get_num(j, "coeff", where),
                            get_num(j, "exponent", where));
  }
  if (kind == "one_minus_power_of_T") {
    require_keys(j, where, {"kind", "coeff", "exponent"});
    return ParamRule::one_minus_power(get_num(j, "coeff", where),
                                      get_num(j, "exponent", where));
  }
  bad(where + ".kind '" + kind +
      "' not one of fixed, power_of_T, one_minus_power_of_T");
}

bool is_auto(const json& j) { return j.is_string() && j == "auto"; }

}  // namespace

FileConfig parse_config_json(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }

  require_keys(root, "top level",
               {"schema_version", "dim", "spectrum", "optimum", "sigma_sq",
                "beta", "eta0", "a", "b", "mode", "c_A", "T", "trials", "seed",
                "record", "T_grid", "engine", "tail_fraction"});

  FileConfig fc;
  if (!root.contains("schema_version") ||
      !root["schema_version"].is_number_integer())
    bad("schema_version (integer) is required");
  fc.schema_version = root["schema_version"].get<int>();
  if (fc.schema_version != 1) bad("unsupported schema_version");

  if (!root.contains("dim") || !root["dim"].is_number_unsigned() ||
      root["dim"].get<std::uint64_t>() == 0)
    bad("dim must be a positive integer");
  fc.problem.dim = root["dim"].get<std::size_t>();
  if (!root.contains("spectrum")) bad("spectrum is required");
  fc.problem.spectrum = parse_spectrum(root["spectrum"]);
  if (!root.contains("optimum")) bad("optimum is required");
  fc.problem.optimum = parse_optimum(root["optimum"]);
  fc.problem.sigma_sq = get_num(root, "sigma_sq", "top level");

  const bool sweep_mode = root.contains("T_grid");
  if (sweep_mode == root.contains("T"))
    bad("exactly one of T (single run) or T_grid (sweep) is required");

  if (root.contains("trials")) {
    if (!root["trials"].is_number_integer() || root["trials"].get<int>() < 1)
      bad("trials must be a positive integer");
  }
  if (root.contains("seed") && !root["seed"].is_number_unsigned())
    bad("seed must be a nonnegative integer");

  if (sweep_mode) {
    for (const char* k : {"beta", "eta0"})
      if (root.contains(k) && is_auto(root[k]))
        bad("'auto' tuning applies to single runs, not sweeps");
    for (const char* k : {"a", "b", "mode", "c_A", "record"})
      if (root.contains(k))
        bad(std::string("key '") + k + "' is not valid in sweep mode");
    SweepSpec sw;
    if (!root["T_grid"].is_array() || root["T_grid"].empty())
      bad("T_grid must be a nonempty array of integers");
    for (const json& t : root["T_grid"]) {
      if (!t.is_number_integer() || t.get<std::int64_t>() < 2)
        bad("T_grid entries must be integers >= 2");
      sw.T_grid.push_back(t.get<std::int64_t>());
    }
    for (std::size_t i = 1; i < sw.T_grid.size(); ++i)
      if (sw.T_grid[i] <= sw.T_grid[i - 1])
        bad("T_grid must be strictly increasing");
    if (root.contains("eta0")) sw.eta0 = parse_rule(root["eta0"], "eta0");
    if (root.contains("beta")) sw.beta = parse_rule(root["beta"], "beta");
    if (root.contains("engine")) {
      if (!root["engine"].is_string()) bad("engine must be a string");
      const std::string e = root["engine"].get<std::string>();
      if (e == "exact")
        sw.engine = Engine::Exact;
      else if (e == "mc")
        sw.engine = Engine::MonteCarlo;
      else
        bad("engine '" + e + "' not one of exact, mc");
    }
    if (root.contains("trials")) sw.trials = root["trials"].get<int>();
    if (root.contains("tail_fraction")) {
      sw.tail_fraction = get_num(root, "tail_fraction", "top level");
      if (!(sw.tail_fraction > 0.0 && sw.tail_fraction <= 1.0))
        bad("tail_fraction must lie in (0, 1]");
    }
    if (root.contains("seed")) fc.run.seed = root["seed"].get<std::uint64_t>();
    fc.sweep = std::move(sw);
    return fc;
  }

  // Single-run mode.
  for (const char* k : {"engine", "tail_fraction"})
    if (root.contains(k))
      bad(std::string("key '") + k + "' is only valid in sweep mode");
  if (!root["T"].is_number_integer() || root["T"].get<std::int64_t>() < 2)
    bad("T must be an integer >= 2");
  fc.run.T = root["T"].get<std::int64_t>();
  if (root.contains("trials")) fc.run.trials = root["trials"].get<int>();
  if (root.contains("seed")) fc.run.seed = root["seed"].get<std::uint64_t>();
  if (root.contains("record")) {
    if (!root["record"].is_string()) bad("record must be a string");
    const std::string r = root["record"].get<std::string>();
    if (r == "final")
      fc.run.record = RecordMode::FinalRisk;
    else if (r == "trace")
      fc.run.record = RecordMode::RiskTrace;
    else
      bad("record '" + r + "' not one of final, trace");
  }

  const bool beta_auto = root.contains("beta") && is_auto(root["beta"]);
  const bool eta_auto = root.contains("eta0") && is_auto(root["eta0"]);
  if (beta_auto != eta_auto)
    bad("'auto' applies to beta and eta0 together");
  if (beta_auto) {
    AutoTuning at;
    at.a = get_num(root, "a", "top level");
    at.b = get_num(root, "b", "top level");
    if (root.contains("mode")) {
      if (!root["mode"].is_string()) bad("mode must be a string");
      const std::string m = root["mode"].get<std::string>();
      if (m == "strict")
        at.mode = TuningMode::Strict;
      else if (m == "practical")
        at.mode = TuningMode::Practical;
      else
        bad("mode '" + m + "' not one of strict, practical");
    }
    if (root.contains("c_A")) {
      at.c_A = get_num(root, "c_A", "top level");
      if (at.mode == TuningMode::Strict)
        bad("c_A only applies to practical mode");
    }
    fc.run.auto_tuning = at;
  } else {
    for (const char* k : {"a", "b", "mode", "c_A"})
      if (root.contains(k))
        bad(std::string("key '") + k + "' requires beta/eta0 set to \"auto\"");
    if (!root.contains("beta") || !root["beta"].is_number())
      bad("beta (number) is required unless \"auto\"");
    if (!root.contains("eta0") || !root["eta0"].is_number())
      bad("eta0 (number) is required unless \"auto\"");
    fc.run.beta = root["beta"].get<double>();
    fc.run.eta0 = root["eta0"].get<double>();
    if (!(*fc.run.beta >= 0.0 && *fc.run.beta < 1.0))
      bad("beta must lie in [0, 1)");
    if (!(*fc.run.eta0 > 0.0)) bad("eta0 must be positive");
  }
  return fc;
}

FileConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

QuadraticProblem ProblemSpec::build() const {
  return make_problem(spectrum, optimum, dim, sigma_sq);
}

RunConfig RunSpec::resolve(double lambda1) const {
  RunConfig rc;
  rc.T = T;
  rc.trials = trials;
  rc.seed = seed;
  rc.record = record;
  if (auto_tuning) {
    const TuningChoice choice = select_parameters(
        auto_tuning->a, auto_tuning->b, lambda1, T, auto_tuning->mode,
        auto_tuning->c_A);
    rc.beta = choice.beta;
    rc.eta0 = choice.eta0;
  } else {
    rc.beta = beta.value();
    rc.eta0 = eta0.value();
  }
  return rc;
}

}  // namespace shblab
