#pragma once

// JSON configuration files for experiments and single solves.
//
// {
//   "problem": {"kind": "example1", "m": 200},
//   "seed": 10,
//   "x0": "ones",
//   "stop": {"tol": 1e-6, "max_iter": 5000},
//   "solvers": [
//     {"name": "gfrb_adaptive", "delta": 0.1,
//      "stepsize": {"c1": ..., "c2": ..., "epsilon": 1e-4, "lambda0": 0.1,
//                   "lambda_minus1": 0.1,
//                   "gamma": {"kind": "geometric", "ratio": 0.5, "scale": 1.0}}},
//     {"name": "frb", "lambda": 0.2}
//   ],
//   "epdtr": {"tau": 0.1, "sigma": 0.1, "b": 0.5, "L": 1.0, "normK": 1.0}
// }
//
// "solver" (a single object) is accepted in place of "solvers". Omitted
// step-size fields fall back to StepSizeParams::defaults_for(delta).

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gfrb/experiments.hpp"

namespace gfrb {

/// Malformed or out-of-range configuration; `path` names the field,
/// e.g. "solvers[0].stepsize.c1".
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

struct EPDTRCheckSpec {
  double tau = 0.0;
  double sigma = 0.0;
  double b = 0.0;
  double lipschitz = 0.0;
  double norm_k = 0.0;
};

struct ConfigFile {
  ExperimentConfig experiment;
  std::optional<EPDTRCheckSpec> epdtr;
  /// Field path of each solver entry as written in the file.
  std::vector<std::string> solver_paths;
};

ConfigFile parse_config(const nlohmann::json& doc);
ConfigFile load_config(const std::string& path);

/// Checks every parameter box without running anything: step-size
/// constants against delta, positive steps, and the EPDTR inequality.
void validate_config(const ConfigFile& cfg);

nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace gfrb
