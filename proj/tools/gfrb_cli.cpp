#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "gfrb/config.hpp"
#include "gfrb/experiments.hpp"
#include "gfrb/primal_dual.hpp"
#include "gfrb/rate_analysis.hpp"

namespace fs = std::filesystem;
using namespace gfrb;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

struct OutputOptions {
  std::string out;
  bool deterministic = false;
};

fs::path output_dir(const OutputOptions& opts, const std::string& command) {
  fs::path dir;
  if (!opts.out.empty()) {
    dir = opts.out;
  } else if (opts.deterministic) {
    dir = fs::path("results") / command;
  } else {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    localtime_r(&now, &tm);
    std::ostringstream stamp;
    stamp << std::put_time(&tm, "%Y%m%d-%H%M%S");
    dir = fs::path("results") / (command + "-" + stamp.str());
  }
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  return out;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

fs::path write_trace(const fs::path& dir, const std::string& name, const IterationTrace& trace,
                     bool include_timing) {
  const fs::path path = dir / ("trace_" + name + ".csv");
  auto out = open_csv(path);
  write_trace_csv(out, trace, include_timing);
  return path;
}

ConfigFile load_checked(const std::string& path) {
  ConfigFile cfg = load_config(path);
  validate_config(cfg);
  return cfg;
}

ExperimentConfig builtin_experiment(const std::string& name) {
  ExperimentConfig cfg;
  cfg.problem.kind = problem_kind_from_string(name);
  const double delta = 0.1;
  SolverSpec adaptive{SolverKind::gfrb_adaptive, delta, std::nullopt,
                      StepSizeParams::defaults_for(delta)};
  cfg.solvers = {adaptive,
                 {SolverKind::gfrb_fixed, delta, std::nullopt, {}},
                 {SolverKind::frb, 0.0, std::nullopt, {}},
                 {SolverKind::fbf, 0.0, std::nullopt, {}},
                 {SolverKind::rfb, 0.0, std::nullopt, {}}};
  if (cfg.problem.kind == ProblemKind::lasso) {
    cfg.problem.m = 256;
    cfg.problem.n = 1024;
    cfg.stop = {1e-8, 50000};
    cfg.x0 = InitialPoint::zeros;
  }
  return cfg;
}

// Runs every solver of cfg; writes per-solver traces and one summary.
int run_and_write(const ExperimentConfig& cfg, const fs::path& dir, bool deterministic) {
  const auto problem = generate(cfg.problem, cfg.seed);
  std::vector<RunResult> results;
  for (const auto& solver : cfg.solvers) {
    const std::string name = to_string(solver.kind);
    std::vector<std::pair<int, double>> snr_rows;
    IterationObserver<double> observer;
    if (problem.x_true) {
      observer = [&](int k, const Vector& x) { snr_rows.emplace_back(k, snr(*problem.x_true, x)); };
    }
    try {
      results.push_back(run_solver(problem, cfg, solver, observer));
    } catch (const DivergenceError& e) {
      const auto path = write_trace(dir, name, e.trace(), !deterministic);
      std::cerr << "error: " << e.what() << "\ntrace: " << path.string() << '\n';
      return kExitDivergence;
    }
    const auto& r = results.back();
    print_warnings(r.warnings);
    write_trace(dir, name, r.trace, !deterministic);
    if (!snr_rows.empty()) {
      auto out = open_csv(dir / ("snr_" + name + ".csv"));
      out << "k,snr_db\n";
      for (const auto& [k, value] : snr_rows) out << k << ',' << value << '\n';
    }
    std::cout << name << ": iters=" << r.iterations << " final_err=" << r.final_err
              << (r.converged ? "" : " (not converged)") << '\n';
  }
  auto summary = open_csv(dir / "summary.csv");
  write_summary_csv(summary, results, !deterministic);
  std::ofstream(dir / "config.json") << to_json(cfg).dump(2) << '\n';
  std::cout << "wrote " << (dir / "summary.csv").string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized forward-reflected-backward splitting toolkit"};
  app.require_subcommand(1);

  OutputOptions out_opts;
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_opts.out, "Output directory (default ./results/<command>-<timestamp>)");
    cmd->add_flag("--deterministic", out_opts.deterministic,
                  "Omit the timestamp from the default directory and zero timing columns");
  };

  std::string config_path;

  auto* solve = app.add_subcommand("solve", "Run the first solver of a config file");
  solve->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  add_output(solve);

  auto* rate = app.add_subcommand("rate-table", "Spectral radii on the rotation problem");
  add_output(rate);

  double design_r = 0.0;
  auto* design = app.add_subcommand("design-rate", "delta and lambda giving x_{k+1} = x_0 / r^k");
  design->add_option("r", design_r, "Target ratio")->required();

  double region_b = 0.0, region_l = 1.0, region_normk = 1.0;
  int region_grid = 200;
  auto* region = app.add_subcommand("region", "Admissible (tau, sigma) grid for EPDTR");
  region->add_option("--b", region_b, "Reflection weight b")->required();
  region->add_option("--L", region_l, "Lipschitz constant of B")->required()->check(CLI::NonNegativeNumber);
  region->add_option("--normK", region_normk, "||K||")->required()->check(CLI::NonNegativeNumber);
  region->add_option("--grid", region_grid, "Cells per axis")->check(CLI::PositiveNumber);
  add_output(region);

  std::string experiment_name;
  auto* experiment = app.add_subcommand("experiment", "Run a benchmark suite");
  experiment->add_option("name", experiment_name, "example1, example2 or lasso")->required();
  experiment->add_option("--config", config_path, "JSON config overriding the built-in suite")
      ->check(CLI::ExistingFile);
  add_output(experiment);

  auto* validate = app.add_subcommand("validate-config", "Check a config file without running");
  validate->add_option("config", config_path, "JSON config")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      ConfigFile cfg = load_checked(config_path);
      cfg.experiment.solvers.resize(1);
      return run_and_write(cfg.experiment, output_dir(out_opts, "solve"), out_opts.deterministic);
    }
    if (*rate) {
      const fs::path dir = output_dir(out_opts, "rate-table");
      auto out = open_csv(dir / "rate_table.csv");
      out << "delta,rule,lambda,rho\n";
      for (const auto& row : rate_table(reference_table_deltas())) {
        out << row.delta << ',' << to_string(row.rule) << ',' << row.lambda << ',' << row.rho << '\n';
      }
      std::cout << "wrote " << (dir / "rate_table.csv").string() << '\n';
      return kExitOk;
    }
    if (*design) {
      const RateDesign d = design_rate(design_r);
      std::cout << std::setprecision(17) << "r=" << d.r << "\ndelta=" << d.delta
                << "\nlambda=" << d.lambda << "\nroots=";
      for (std::size_t i = 0; i < d.roots.size(); ++i) {
        std::cout << (i ? " " : "") << d.roots[i].real() << (d.roots[i].imag() < 0 ? "-" : "+")
                  << std::abs(d.roots[i].imag()) << "i";
      }
      std::cout << "\nresidual=" << d.residual
                << "\ninverse_rate_dominant=" << (d.inverse_rate_dominant ? "true" : "false") << '\n';
      return kExitOk;
    }
    if (*region) {
      const fs::path dir = output_dir(out_opts, "region");
      auto out = open_csv(dir / "region.csv");
      out << "tau,sigma,admissible,slack\n";
      for (const auto& c : admissible_region(region_b, region_l, region_normk, region_grid)) {
        out << c.tau << ',' << c.sigma << ',' << (c.admissible ? 1 : 0) << ',' << c.slack << '\n';
      }
      std::cout << "wrote " << (dir / "region.csv").string() << '\n';
      return kExitOk;
    }
    if (*experiment) {
      ExperimentConfig cfg;
      if (config_path.empty()) {
        cfg = builtin_experiment(experiment_name);
      } else {
        cfg = load_checked(config_path).experiment;
        if (to_string(cfg.problem.kind) != experiment_name)
          throw ConfigError("problem.kind", "config describes '" + to_string(cfg.problem.kind) +
                                                "' but experiment '" + experiment_name +
                                                "' was requested");
      }
      return run_and_write(cfg, output_dir(out_opts, "experiment-" + experiment_name),
                           out_opts.deterministic);
    }
    if (*validate) {
      load_checked(config_path);
      std::cout << "ok\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
