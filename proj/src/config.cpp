#include "gfrb/config.hpp"

#include <fstream>
#include <set>

#include "gfrb/primal_dual.hpp"

namespace gfrb {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
  }
}

const json& require_object(const json& doc, const std::string& path) {
  if (!doc.is_object()) throw ConfigError(path, "expected an object");
  return doc;
}

double get_number(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
  return v.get<double>();
}

template <class Int>
Int get_integer(const json& obj, const std::string& key, const std::string& path, Int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(path + "." + key, "expected an integer");
  return v.get<Int>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& path,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

ProblemSpec parse_problem(const json& doc, const std::string& path) {
  require_object(doc, path);
  reject_unknown(doc, path, {"kind", "m", "n", "k", "noise_sigma", "reg_lambda"});
  ProblemSpec spec;
  if (!doc.contains("kind")) throw ConfigError(join(path, "kind"), "missing");
  try {
    spec.kind = problem_kind_from_string(get_string(doc, "kind", path, ""));
  } catch (const ParameterError& e) {
    throw ConfigError(join(path, "kind"), e.what());
  }
  spec.m = get_integer<Eigen::Index>(doc, "m", path, spec.kind == ProblemKind::lasso ? 256 : 200);
  spec.n = get_integer<Eigen::Index>(doc, "n", path, 1024);
  spec.k = get_integer<Eigen::Index>(doc, "k", path, 20);
  spec.noise_sigma = get_number(doc, "noise_sigma", path, 0.01);
  spec.reg_lambda = get_number(doc, "reg_lambda", path, 0.01);
  if (spec.m < 1) throw ConfigError(join(path, "m"), "must be >= 1");
  if (spec.kind == ProblemKind::lasso) {
    if (spec.n < 1) throw ConfigError(join(path, "n"), "must be >= 1");
    if (spec.k < 1 || spec.k > spec.n) throw ConfigError(join(path, "k"), "must satisfy 1 <= k <= n");
    if (!(spec.noise_sigma > 0.0)) throw ConfigError(join(path, "noise_sigma"), "must be positive");
    if (!(spec.reg_lambda > 0.0)) throw ConfigError(join(path, "reg_lambda"), "must be positive");
  }
  return spec;
}

GammaSpec parse_gamma(const json& doc, const std::string& path) {
  require_object(doc, path);
  reject_unknown(doc, path, {"kind", "ratio", "scale"});
  GammaSpec gamma;
  try {
    gamma.kind = gamma_kind_from_string(get_string(doc, "kind", path, "geometric"));
  } catch (const ParameterError& e) {
    throw ConfigError(join(path, "kind"), e.what());
  }
  gamma.ratio = get_number(doc, "ratio", path, gamma.ratio);
  gamma.scale = get_number(doc, "scale", path, gamma.scale);
  return gamma;
}

StepSizeParams parse_stepsize(const json& doc, const std::string& path, double delta) {
  require_object(doc, path);
  reject_unknown(doc, path, {"c1", "c2", "epsilon", "lambda0", "lambda_minus1", "gamma"});
  StepSizeParams p = StepSizeParams::defaults_for(delta, get_number(doc, "lambda0", path, 0.1));
  if (doc.contains("epsilon")) {
    p.epsilon = get_number(doc, "epsilon", path, p.epsilon);
    p.c2 = 0.99 * p.c2_bound(delta);
    p.c1 = 0.9 * p.c2;
  }
  p.c2 = get_number(doc, "c2", path, p.c2);
  p.c1 = get_number(doc, "c1", path, doc.contains("c2") ? 0.9 * p.c2 : p.c1);
  p.lambda_minus1 = get_number(doc, "lambda_minus1", path, p.lambda0);
  if (doc.contains("gamma")) p.gamma = parse_gamma(doc.at("gamma"), join(path, "gamma"));
  return p;
}

SolverSpec parse_solver(const json& doc, const std::string& path) {
  require_object(doc, path);
  reject_unknown(doc, path, {"name", "delta", "lambda", "stepsize"});
  SolverSpec spec;
  if (!doc.contains("name")) throw ConfigError(join(path, "name"), "missing");
  try {
    spec.kind = solver_kind_from_string(get_string(doc, "name", path, ""));
  } catch (const ParameterError& e) {
    throw ConfigError(join(path, "name"), e.what());
  }
  spec.delta = get_number(doc, "delta", path, spec.kind == SolverKind::frb ? 0.0 : 0.1);
  if (doc.contains("lambda")) spec.lambda = get_number(doc, "lambda", path, 0.0);
  spec.stepsize = doc.contains("stepsize")
                      ? parse_stepsize(doc.at("stepsize"), join(path, "stepsize"), spec.delta)
                      : StepSizeParams::defaults_for(spec.delta);
  return spec;
}

void validate_stepsize(const StepSizeParams& p, double delta, const std::string& path) {
  if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) throw ConfigError(path + ".epsilon", "must lie in (0, 1)");
  if (!(p.c1 > 0.0)) throw ConfigError(path + ".c1", "must be positive");
  if (!(p.c1 < p.c2)) throw ConfigError(path + ".c1", "must be strictly less than c2");
  if (!(p.c2 < p.c2_bound(delta)))
    throw ConfigError(path + ".c2", "must be strictly less than (1 - epsilon)/(2|delta| + 2) = " +
                                        std::to_string(p.c2_bound(delta)));
  if (!(p.lambda0 > 0.0)) throw ConfigError(path + ".lambda0", "must be positive");
  if (!(p.lambda_minus1 > 0.0)) throw ConfigError(path + ".lambda_minus1", "must be positive");
  try {
    p.gamma.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(path + ".gamma", e.what());
  }
}

}  // namespace

ConfigFile parse_config(const json& doc) {
  require_object(doc, "<root>");
  reject_unknown(doc, "", {"problem", "seed", "x0", "stop", "solver", "solvers", "epdtr"});
  ConfigFile out;
  ExperimentConfig& cfg = out.experiment;

  if (doc.contains("problem")) cfg.problem = parse_problem(doc.at("problem"), "problem");
  if (doc.contains("seed")) {
    const auto& seed = doc.at("seed");
    if (!seed.is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
    cfg.seed = seed.get<std::uint64_t>();
  }
  const std::string x0 = get_string(doc, "x0", "", "ones");
  if (x0 == "ones") {
    cfg.x0 = InitialPoint::ones;
  } else if (x0 == "zeros") {
    cfg.x0 = InitialPoint::zeros;
  } else {
    throw ConfigError("x0", "expected \"ones\" or \"zeros\"");
  }
  if (doc.contains("stop")) {
    const auto& stop = require_object(doc.at("stop"), "stop");
    reject_unknown(stop, "stop", {"tol", "max_iter"});
    cfg.stop.tol = get_number(stop, "tol", "stop", cfg.stop.tol);
    cfg.stop.max_iter = get_integer<int>(stop, "max_iter", "stop", cfg.stop.max_iter);
    if (!(cfg.stop.tol >= 0.0)) throw ConfigError("stop.tol", "must be >= 0");
    if (cfg.stop.max_iter < 1) throw ConfigError("stop.max_iter", "must be >= 1");
  }
  if (doc.contains("solver") && doc.contains("solvers"))
    throw ConfigError("solver", "give either \"solver\" or \"solvers\", not both");
  if (doc.contains("solver")) {
    cfg.solvers = {parse_solver(doc.at("solver"), "solver")};
    out.solver_paths = {"solver"};
  } else if (doc.contains("solvers")) {
    const auto& list = doc.at("solvers");
    if (!list.is_array() || list.empty()) throw ConfigError("solvers", "expected a non-empty array");
    cfg.solvers.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      out.solver_paths.push_back("solvers[" + std::to_string(i) + "]");
      cfg.solvers.push_back(parse_solver(list[i], out.solver_paths.back()));
    }
  }
  if (doc.contains("epdtr")) {
    const auto& e = require_object(doc.at("epdtr"), "epdtr");
    reject_unknown(e, "epdtr", {"tau", "sigma", "b", "L", "normK"});
    for (const char* key : {"tau", "sigma", "L", "normK"})
      if (!e.contains(key)) throw ConfigError(std::string("epdtr.") + key, "missing");
    EPDTRCheckSpec spec;
    spec.tau = get_number(e, "tau", "epdtr", 0.0);
    spec.sigma = get_number(e, "sigma", "epdtr", 0.0);
    spec.b = get_number(e, "b", "epdtr", 0.0);
    spec.lipschitz = get_number(e, "L", "epdtr", 0.0);
    spec.norm_k = get_number(e, "normK", "epdtr", 0.0);
    out.epdtr = spec;
  }
  return out;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

void validate_config(const ConfigFile& cfg) {
  const auto& solvers = cfg.experiment.solvers;
  for (std::size_t i = 0; i < solvers.size(); ++i) {
    const std::string path =
        i < cfg.solver_paths.size() ? cfg.solver_paths[i] : "solvers[" + std::to_string(i) + "]";
    const auto& s = solvers[i];
    if (s.kind == SolverKind::gfrb_adaptive) validate_stepsize(s.stepsize, s.delta, path + ".stepsize");
    if (s.lambda && !(*s.lambda > 0.0)) throw ConfigError(path + ".lambda", "must be positive");
  }
  if (cfg.epdtr) {
    const auto& e = *cfg.epdtr;
    if (!(e.tau > 0.0)) throw ConfigError("epdtr.tau", "must be positive");
    if (!(e.sigma > 0.0)) throw ConfigError("epdtr.sigma", "must be positive");
    if (!(e.lipschitz >= 0.0)) throw ConfigError("epdtr.L", "must be >= 0");
    if (!(e.norm_k >= 0.0)) throw ConfigError("epdtr.normK", "must be >= 0");
    const auto check = check_stepsizes(e.tau, e.sigma, e.b, e.lipschitz, e.norm_k);
    if (!check.admissible)
      throw ConfigError("epdtr", "2 tau (1+|b|) L + tau sigma ||K||^2 < 1 violated (slack " +
                                     std::to_string(check.slack) + ")");
  }
}

json to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["problem"] = {{"kind", to_string(cfg.problem.kind)}, {"m", cfg.problem.m}};
  if (cfg.problem.kind == ProblemKind::lasso) {
    doc["problem"]["n"] = cfg.problem.n;
    doc["problem"]["k"] = cfg.problem.k;
    doc["problem"]["noise_sigma"] = cfg.problem.noise_sigma;
    doc["problem"]["reg_lambda"] = cfg.problem.reg_lambda;
  }
  doc["seed"] = cfg.seed;
  doc["x0"] = cfg.x0 == InitialPoint::ones ? "ones" : "zeros";
  doc["stop"] = {{"tol", cfg.stop.tol}, {"max_iter", cfg.stop.max_iter}};
  doc["solvers"] = json::array();
  for (const auto& s : cfg.solvers) {
    json entry = {{"name", to_string(s.kind)}, {"delta", s.delta}};
    if (s.lambda) entry["lambda"] = *s.lambda;
    if (s.kind == SolverKind::gfrb_adaptive) {
      entry["stepsize"] = {{"c1", s.stepsize.c1},
                           {"c2", s.stepsize.c2},
                           {"epsilon", s.stepsize.epsilon},
                           {"lambda0", s.stepsize.lambda0},
                           {"lambda_minus1", s.stepsize.lambda_minus1},
                           {"gamma",
                            {{"kind", to_string(s.stepsize.gamma.kind)},
                             {"ratio", s.stepsize.gamma.ratio},
                             {"scale", s.stepsize.gamma.scale}}}};
    }
    doc["solvers"].push_back(std::move(entry));
  }
  return doc;
}

}  // namespace gfrb
