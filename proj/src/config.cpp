#include "cutfem/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cutfem {

using nlohmann::json;

std::string to_string(ProblemKind k) { return k == ProblemKind::Interface ? "interface" : "fictitious"; }

ProblemKind parse_problem(const std::string& s) {
  if (s == "interface") return ProblemKind::Interface;
  if (s == "fictitious" || s == "fd") return ProblemKind::Fictitious;
  throw std::invalid_argument("unknown problem '" + s + "'");
}

namespace {

std::string to_string(PenaltyAveraging a) {
  switch (a) {
    case PenaltyAveraging::Max:
      return "max";
    case PenaltyAveraging::Arithmetic:
      return "arithmetic";
    case PenaltyAveraging::Harmonic:
      return "harmonic";
  }
  return "max";
}

PenaltyAveraging parse_averaging(const std::string& s) {
  if (s == "max") return PenaltyAveraging::Max;
  if (s == "arithmetic") return PenaltyAveraging::Arithmetic;
  if (s == "harmonic") return PenaltyAveraging::Harmonic;
  throw std::invalid_argument("unknown alpha averaging '" + s + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults(ProblemKind kind) {
  ExperimentConfig c;
  c.problem = kind;
  if (kind == ProblemKind::Fictitious) {
    c.coeffs.alpha1 = 1.0;
    c.coeffs.alpha2 = 1.0;
    c.precond.a1_sgs_iterations = 3;
  }
  return c;
}

void ExperimentConfig::validate() const {
  if (max_level < 0) throw std::invalid_argument("config: max_level must be >= 0");
  if (delta_level < 0) throw std::invalid_argument("config: delta_level must be >= 0");
  if (n_per_axis < 1) throw std::invalid_argument("config: n_per_axis must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("config: radius must be positive");
  if (!(tol > 0.0) || max_iter < 1) throw std::invalid_argument("config: invalid solver tolerance or budget");
  if (base_order < 1 || base_order > 5) throw std::invalid_argument("config: base_order must be in 1..5");
  if (precond.a1_sgs_iterations < 1 || precond.multigrid.cycles < 1)
    throw std::invalid_argument("config: smoothing counts must be positive");
  coeffs.validate();
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig c) {
  const json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  if (j.contains("problem")) c = ExperimentConfig::defaults(parse_problem(j.at("problem").get<std::string>()));
  for (const auto& [key, v] : j.items()) {
    if (key == "problem") continue;
    else if (key == "max_level") c.max_level = v.get<int>();
    else if (key == "n_per_axis") c.n_per_axis = v.get<int>();
    else if (key == "box_lo") c.box.lo = v.get<Vec3>();
    else if (key == "box_hi") c.box.hi = v.get<Vec3>();
    else if (key == "x0") c.x0 = v.get<Vec3>();
    else if (key == "radius") c.radius = v.get<double>();
    else if (key == "deltas") c.deltas = v.get<std::vector<double>>();
    else if (key == "delta_level") c.delta_level = v.get<int>();
    else if (key == "alpha1") c.coeffs.alpha1 = v.get<double>();
    else if (key == "alpha2") c.coeffs.alpha2 = v.get<double>();
    else if (key == "gamma") c.coeffs.gamma = v.get<double>();
    else if (key == "beta") c.coeffs.beta = v.get<double>();
    else if (key == "alpha_averaging") c.coeffs.averaging = parse_averaging(v.get<std::string>());
    else if (key == "tol") c.tol = v.get<double>();
    else if (key == "max_iter") c.max_iter = v.get<int>();
    else if (key == "preconditioners") {
      c.preconditioners.clear();
      for (const auto& p : v) c.preconditioners.push_back(parse_preconditioner(p.get<std::string>()));
    } else if (key == "a1_sgs_iterations") c.precond.a1_sgs_iterations = v.get<int>();
    else if (key == "mg_cycles") c.precond.multigrid.cycles = v.get<int>();
    else if (key == "direct_limit") c.precond.direct_limit = v.get<int>();
    else if (key == "base_order") c.base_order = v.get<int>();
    else if (key == "condition_number") c.condition_number = v.get<bool>();
    else if (key == "spectral_diagnostics") c.spectral_diagnostics = v.get<bool>();
    else if (key == "dense_limit") c.dense_limit = v.get<int>();
    else if (key == "output_dir") c.output_dir = v.get<std::string>();
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["problem"] = to_string(c.problem);
  j["max_level"] = c.max_level;
  j["n_per_axis"] = c.n_per_axis;
  j["box_lo"] = c.box.lo;
  j["box_hi"] = c.box.hi;
  j["x0"] = c.x0;
  j["radius"] = c.radius;
  j["deltas"] = c.deltas;
  j["delta_level"] = c.delta_level;
  j["alpha1"] = c.coeffs.alpha1;
  j["alpha2"] = c.coeffs.alpha2;
  j["gamma"] = c.coeffs.gamma;
  j["beta"] = c.coeffs.beta;
  j["alpha_averaging"] = to_string(c.coeffs.averaging);
  j["tol"] = c.tol;
  j["max_iter"] = c.max_iter;
  json p = json::array();
  for (auto k : c.preconditioners) p.push_back(to_string(k));
  j["preconditioners"] = p;
  j["a1_sgs_iterations"] = c.precond.a1_sgs_iterations;
  j["mg_cycles"] = c.precond.multigrid.cycles;
  j["direct_limit"] = c.precond.direct_limit;
  j["base_order"] = c.base_order;
  j["condition_number"] = c.condition_number;
  j["spectral_diagnostics"] = c.spectral_diagnostics;
  j["dense_limit"] = c.dense_limit;
  j["output_dir"] = c.output_dir;
  return j.dump(2);
}

}  // namespace cutfem
