#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shblab/bounds.hpp"
#include "shblab/config.hpp"
#include "shblab/csv.hpp"
#include "shblab/dynamics.hpp"
#include "shblab/exact.hpp"
#include "shblab/presets.hpp"
#include "shblab/schedule.hpp"
#include "shblab/sweep.hpp"
#include "shblab/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitVerifyFailed = 3;

int default_jobs() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write '" + out_path + "'");
  out << text;
}

// Wall-clock provenance lives in a sidecar so the payload stays
// byte-reproducible.
void write_meta(const std::string& out_path, const json& info) {
  if (out_path.empty()) return;
  json meta = info;
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::tm tm_utc{};
  gmtime_r(&tt, &tm_utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  meta["generated_at"] = stamp;
  std::ofstream out(out_path + ".meta.json", std::ios::binary);
  if (out) out << meta.dump(2) << '\n';
}

json bound_report_json(const shblab::BoundReport& rep) {
  return json{{"k_star", rep.k_star},
              {"a_constant", rep.a_constant},
              {"bias_bound", rep.bias_bound},
              {"variance_bound", rep.variance_bound},
              {"upper_total", rep.upper_total},
              {"lower_bound", rep.lower_bound},
              {"validity",
               {{"horizon_ok", rep.validity.horizon_ok},
                {"step_ok", rep.validity.step_ok},
                {"momentum_ok", rep.validity.momentum_ok},
                {"all", rep.validity.all()}}}};
}

shblab::FileConfig load_single_run(const std::string& path) {
  shblab::FileConfig fc = shblab::load_config_file(path);
  if (fc.sweep)
    throw std::invalid_argument(
        "config: this subcommand takes a single-run config (T), not a sweep "
        "(T_grid)");
  return fc;
}

int cmd_exact(const std::string& config_path, const std::string& out_path,
              int jobs) {
  const shblab::FileConfig fc = load_single_run(config_path);
  const shblab::QuadraticProblem problem = fc.problem.build();
  const shblab::RunConfig rc = fc.run.resolve(problem.eigenvalues.front());
  const shblab::StepSchedule sched = shblab::make_schedule(rc.eta0, rc.T);
  const shblab::ExactResult ex = shblab::exact_bias_variance(
      problem, sched, rc.beta,
      {.record_trace = rc.record == shblab::RecordMode::RiskTrace,
       .jobs = jobs});

  json out{{"engine", "exact"},
           {"T", rc.T},
           {"beta", rc.beta},
           {"eta0", rc.eta0},
           {"bias_total", ex.bias_total},
           {"variance_total", ex.variance_total},
           {"total", ex.total},
           {"min_cov_diag_scaled", ex.min_cov_diag_scaled},
           {"min_cov_det_scaled", ex.min_cov_det_scaled}};
  if (!ex.risk_trace.empty()) out["risk_trace"] = ex.risk_trace;
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 bool seed_set, std::uint64_t seed, int jobs) {
  const shblab::FileConfig fc = load_single_run(config_path);
  const shblab::QuadraticProblem problem = fc.problem.build();
  shblab::RunConfig rc = fc.run.resolve(problem.eigenvalues.front());
  if (seed_set) rc.seed = seed;
  rc.jobs = jobs;
  std::fprintf(stderr, "simulate: %d trials at T=%lld (beta=%g, eta0=%g)\n",
               rc.trials, static_cast<long long>(rc.T), rc.beta, rc.eta0);
  const shblab::RunResult rr = shblab::shb_run(problem, rc);

  json trials = json::array();
  for (const shblab::TrialOutcome& tr : rr.trials) {
    json t{{"final_risk", tr.final_risk}, {"diverged", tr.diverged}};
    if (tr.diverged) t["divergence_step"] = tr.divergence_step;
    if (!tr.risk_trace.empty()) t["risk_trace"] = tr.risk_trace;
    trials.push_back(std::move(t));
  }
  json out{{"engine", "mc"},
           {"T", rc.T},
           {"beta", rc.beta},
           {"eta0", rc.eta0},
           {"seed", rc.seed},
           {"mean_risk", rr.mean_risk},
           {"std_risk", rr.std_risk},
           {"n_diverged", rr.n_diverged},
           {"trials", trials}};
  if (rr.step_size_warning) out["step_size_warning"] = true;
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

int cmd_bounds(const std::string& config_path, const std::string& out_path) {
  const shblab::FileConfig fc = load_single_run(config_path);
  const shblab::QuadraticProblem problem = fc.problem.build();
  const shblab::RunConfig rc = fc.run.resolve(problem.eigenvalues.front());
  const shblab::BoundReport rep = shblab::risk_bounds(
      problem, rc.eta0, rc.beta, static_cast<double>(rc.T));
  emit(bound_report_json(rep).dump(2) + "\n", out_path);
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path,
              bool seed_set, std::uint64_t seed, bool engine_set,
              const std::string& engine_name, int jobs) {
  const shblab::FileConfig fc = shblab::load_config_file(config_path);
  if (!fc.sweep)
    throw std::invalid_argument("config: sweep needs a T_grid config");
  const shblab::QuadraticProblem problem = fc.problem.build();

  shblab::SweepConfig sc;
  sc.T_grid = fc.sweep->T_grid;
  sc.eta0 = fc.sweep->eta0;
  sc.beta = fc.sweep->beta;
  sc.engine = fc.sweep->engine;
  sc.trials = fc.sweep->trials;
  sc.seed = seed_set ? seed : fc.run.seed;
  sc.jobs = jobs;
  if (engine_set)
    sc.engine = engine_name == "exact" ? shblab::Engine::Exact
                                       : shblab::Engine::MonteCarlo;

  std::fprintf(stderr, "sweep: %zu grid points, %s engine\n",
               sc.T_grid.size(),
               sc.engine == shblab::Engine::Exact ? "exact" : "mc");
  const shblab::SweepResult sw = shblab::run_sweep(problem, sc);
  for (const std::string& w : sw.warnings)
    std::fprintf(stderr, "warning: %s\n", w.c_str());

  std::string csv = shblab::kSweepCsvHeader;
  csv += '\n';
  shblab::append_sweep_rows(csv, "sweep", sw, sc.engine);
  emit(csv, out_path);
  write_meta(out_path, {{"command", "sweep"},
                        {"config", config_path},
                        {"seed", sc.seed},
                        {"engine", sc.engine == shblab::Engine::Exact
                                       ? "exact"
                                       : "mc"}});
  return 0;
}

// Grouped means from one of our sweep CSVs: label -> T -> mean risk over
// non-diverged rows.
std::vector<std::pair<std::string, shblab::SweepResult>> read_sweep_csv(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != shblab::kSweepCsvHeader)
    throw std::invalid_argument("'" + path +
                                "' does not start with the sweep CSV header");

  std::vector<std::string> order;
  std::map<std::string, std::map<std::int64_t, std::pair<double, int>>> acc;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 11)
      throw std::invalid_argument("malformed sweep CSV row: " + line);
    const std::string& label = cells[0];
    const std::int64_t T = std::stoll(cells[1]);
    const double risk = std::stod(cells[4]);
    const bool diverged = cells[10] == "1";
    if (!acc.count(label)) order.push_back(label);
    auto& slot = acc[label][T];
    if (!diverged) {
      slot.first += risk;
      slot.second += 1;
    }
  }

  std::vector<std::pair<std::string, shblab::SweepResult>> out;
  for (const std::string& label : order) {
    shblab::SweepResult sw;
    for (const auto& [T, slot] : acc[label]) {
      shblab::SweepPoint pt;
      pt.T = T;
      pt.n_trials = slot.second;
      pt.usable = slot.second > 0;
      pt.mean_risk = slot.second > 0 ? slot.first / slot.second : 0.0;
      sw.points.push_back(std::move(pt));
    }
    out.emplace_back(label, std::move(sw));
  }
  return out;
}

int cmd_fit(const std::string& csv_path, const std::string& out_path,
            double tail_fraction, const std::string& only_label) {
  std::string text;
  bool any = false;
  for (const auto& [label, sw] : read_sweep_csv(csv_path)) {
    if (!only_label.empty() && label != only_label) continue;
    any = true;
    shblab::append_fit_line(text, label, shblab::fit_rate(sw, tail_fraction));
  }
  if (!any)
    throw std::invalid_argument(only_label.empty()
                                    ? "no data rows in '" + csv_path + "'"
                                    : "label '" + only_label + "' not found");
  emit(text, out_path);
  return 0;
}

int cmd_preset(const std::string& name, const std::string& out_path,
               bool seed_set, std::uint64_t seed, bool engine_set,
               const std::string& engine_name, int trials_override,
               double tail_fraction, int jobs) {
  const shblab::PresetBundle bundle = shblab::preset(name);
  const shblab::Engine engine =
      engine_set && engine_name == "mc" ? shblab::Engine::MonteCarlo
                                        : shblab::Engine::Exact;
  const std::uint64_t base_seed = seed_set ? seed : 1;

  std::string csv = shblab::kSweepCsvHeader;
  csv += '\n';
  std::string tail;
  std::vector<std::string> all_warnings;
  for (std::size_t vi = 0; vi < bundle.variants.size(); ++vi) {
    const shblab::PresetVariant& v = bundle.variants[vi];
    const std::string label = bundle.name + "/" + v.label;
    std::fprintf(stderr, "preset %s: running %s (%zu grid points, %s)\n",
                 bundle.name.c_str(), v.label.c_str(), bundle.T_grid.size(),
                 engine == shblab::Engine::Exact ? "exact" : "mc");

    shblab::SweepConfig sc;
    sc.T_grid = bundle.T_grid;
    sc.eta0 = v.eta0;
    sc.beta = v.beta;
    sc.engine = engine;
    sc.trials = trials_override > 0 ? trials_override : bundle.mc_trials;
    sc.seed = base_seed + 7919 * static_cast<std::uint64_t>(vi);
    sc.jobs = jobs;

    const shblab::QuadraticProblem problem = v.problem.build();
    const shblab::SweepResult sw = shblab::run_sweep(problem, sc);
    for (const std::string& w : sw.warnings)
      all_warnings.push_back(label + ": " + w);

    shblab::append_sweep_rows(csv, label, sw, engine);
    try {
      shblab::append_fit_line(tail, label,
                              shblab::fit_rate(sw, tail_fraction));
    } catch (const std::exception& e) {
      tail += "# fit," + label + ",error=" + e.what() + "\n";
    }
    if (!v.reference_slopes.empty()) {
      tail += "# ref," + label + ",slopes=";
      for (std::size_t k = 0; k < v.reference_slopes.size(); ++k) {
        if (k) tail += ';';
        tail += shblab::format_double(v.reference_slopes[k]);
      }
      tail += '\n';
    }
  }
  for (const std::string& w : all_warnings)
    std::fprintf(stderr, "warning: %s\n", w.c_str());

  emit(csv + tail, out_path);
  write_meta(out_path,
             {{"command", "preset"},
              {"name", bundle.name},
              {"summary", bundle.summary},
              {"seed", base_seed},
              {"engine", engine == shblab::Engine::Exact ? "exact" : "mc"}});
  return 0;
}

int cmd_verify(std::int64_t samples, std::uint64_t seed, int jobs) {
  shblab::VerifyOptions opt;
  opt.samples = samples;
  opt.seed = seed;
  opt.jobs = jobs;
  std::fprintf(stderr, "verify: %lld samples, seed %llu\n",
               static_cast<long long>(samples),
               static_cast<unsigned long long>(seed));

  int failed_suites = 0;
  std::string report;
  for (const shblab::SuiteResult& r : shblab::verify_all(opt)) {
    char line[160];
    std::snprintf(line, sizeof line,
                  "suite %-20s checks=%-7lld vacuous=%-6lld failures=%-5lld %s\n",
                  r.name.c_str(), static_cast<long long>(r.checked),
                  static_cast<long long>(r.vacuous),
                  static_cast<long long>(r.failures),
                  r.passed() ? "pass" : "FAIL");
    report += line;
    for (const std::string& note : r.notes) report += "  ! " + note + "\n";
    if (!r.passed()) ++failed_suites;
  }
  report += failed_suites == 0 ? "verify: PASS\n" : "verify: FAIL\n";
  std::cout << report;
  return failed_suites == 0 ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Last-iterate risk lab for momentum SGD on quadratics"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path, preset_name, only_label;
  std::string engine_name = "exact";
  std::uint64_t seed = 0;
  std::uint64_t verify_seed = 12345;
  std::int64_t samples = 1000;
  int jobs = default_jobs();
  int trials_override = 0;
  double tail_fraction = 0.5;

  CLI::App* exact = app.add_subcommand("exact", "Closed-form risk decomposition");
  exact->add_option("--config", config_path, "JSON config")->required();
  exact->add_option("--out", out_path, "output file (default: stdout)");
  exact->add_option("--jobs", jobs, "worker threads");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo trials");
  simulate->add_option("--config", config_path, "JSON config")->required();
  simulate->add_option("--out", out_path, "output file (default: stdout)");
  CLI::Option* sim_seed = simulate->add_option("--seed", seed, "seed override");
  simulate->add_option("--jobs", jobs, "worker threads");

  CLI::App* bounds = app.add_subcommand("bounds", "Certified risk bracket");
  bounds->add_option("--config", config_path, "JSON config")->required();
  bounds->add_option("--out", out_path, "output file (default: stdout)");

  CLI::App* sweep = app.add_subcommand("sweep", "Risk over a horizon grid");
  sweep->add_option("--config", config_path, "JSON config")->required();
  sweep->add_option("--out", out_path, "CSV output (default: stdout)");
  CLI::Option* sweep_seed = sweep->add_option("--seed", seed, "seed override");
  CLI::Option* sweep_engine =
      sweep->add_option("--engine", engine_name, "exact|mc")
          ->check(CLI::IsMember({"exact", "mc"}));
  sweep->add_option("--jobs", jobs, "worker threads");

  CLI::App* fit = app.add_subcommand("fit", "Log-log slope from a sweep CSV");
  fit->add_option("csv", csv_path, "sweep CSV path")->required();
  fit->add_option("--out", out_path, "output file (default: stdout)");
  fit->add_option("--tail-fraction", tail_fraction, "largest-T share to fit")
      ->check(CLI::Range(1e-9, 1.0));
  fit->add_option("--label", only_label, "fit a single label");

  CLI::App* preset = app.add_subcommand("preset", "Bundled experiment");
  preset->add_option("name", preset_name, "bundle name")->required();
  preset->add_option("--out", out_path, "CSV output (default: stdout)");
  CLI::Option* preset_seed = preset->add_option("--seed", seed, "base seed");
  CLI::Option* preset_engine =
      preset->add_option("--engine", engine_name, "exact|mc")
          ->check(CLI::IsMember({"exact", "mc"}));
  preset->add_option("--trials", trials_override, "trials per grid point (mc)");
  preset->add_option("--tail-fraction", tail_fraction,
                     "largest-T share to fit")
      ->check(CLI::Range(1e-9, 1.0));
  preset->add_option("--jobs", jobs, "worker threads");

  CLI::App* verify = app.add_subcommand("verify", "Randomized property suites");
  verify->add_option("--samples", samples, "draws per suite")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_seed, "suite seed");
  verify->add_option("--jobs", jobs, "worker threads");

  CLI11_PARSE(app, argc, argv);
  if (jobs < 1) jobs = 1;

  try {
    if (exact->parsed()) return cmd_exact(config_path, out_path, jobs);
    if (simulate->parsed())
      return cmd_simulate(config_path, out_path, sim_seed->count() > 0, seed,
                          jobs);
    if (bounds->parsed()) return cmd_bounds(config_path, out_path);
    if (sweep->parsed())
      return cmd_sweep(config_path, out_path, sweep_seed->count() > 0, seed,
                       sweep_engine->count() > 0, engine_name, jobs);
    if (fit->parsed())
      return cmd_fit(csv_path, out_path, tail_fraction, only_label);
    if (preset->parsed())
      return cmd_preset(preset_name, out_path, preset_seed->count() > 0, seed,
                        preset_engine->count() > 0, engine_name,
                        trials_override, tail_fraction, jobs);
    if (verify->parsed()) return cmd_verify(samples, verify_seed, jobs);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
