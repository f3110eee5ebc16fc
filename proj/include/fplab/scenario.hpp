#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fplab/coefficients.hpp"
#include "fplab/initial.hpp"
#include "fplab/mollify.hpp"
#include "fplab/sde.hpp"
#include "fplab/solver.hpp"

namespace fplab {

struct StudyLadders {
  std::vector<double> deltas;       // absolute mollifier widths
  std::vector<double> delta_cells;  // widths in units of the scenario's h
  std::vector<int> grids;           // n values
};

/// Declarative description of a run; see the README for the JSON layout.
struct ScenarioSpec {
  std::string label = "scenario";
  int dim = 1;
  int n = 256;
  double length = 6.283185307179586;
  double horizon = 1.0;
  int steps = 1000;
  double cfl = 0.5;  // steps are raised until dt <= cfl * CFL limit
  CoefficientClass cls = CoefficientClass::Smooth;
  std::uint64_t coeff_seed = 1;
  CoefficientParams coeff;
  InitialParams initial;
  std::uint64_t seed = 1;
  double q = 2.0;
  KernelFamily mollifier = KernelFamily::Bump;
  EquationForm form = EquationForm::FpDiv;
  AdvectionScheme advection = AdvectionScheme::CenteredFlux;
  double tol = 1e-10;
  int max_iter = 2000;
  SdeConfig sde;
  StudyLadders ladders;

  /// Resolved deltas: absolute list if given, else delta_cells * h.
  std::vector<double> delta_ladder(int n_override = 0) const;
};

struct ScenarioInstance {
  Grid grid;
  CoefficientSet coeffs;
  ScalarField u0;
  TimeGrid time{1.0, 1};
};

/// Builds the scenario on n points per axis (0 keeps spec.n).
ScenarioInstance instantiate(const ScenarioSpec& spec, int n = 0);

SolverConfig solver_config(const ScenarioSpec& spec);

/// Collects every schema violation before throwing Error{Schema}.
ScenarioSpec parse_scenario(const nlohmann::json& doc);
ScenarioSpec load_scenario(const std::filesystem::path& path);
nlohmann::json to_json(const ScenarioSpec& spec);

struct AssumptionCheck {
  std::string id;     // A1..A4
  std::string label;  // what it checks
  double value = 0.0;
  bool ok = true;
  std::string detail;
};

struct ValidationReport {
  std::string label;
  std::vector<std::string> schema_errors;
  std::vector<AssumptionCheck> assumptions;
  std::vector<std::string> regimes;  // activated result families
  double p = kInfinity, q = 2.0;
  bool ok() const;
  nlohmann::json to_json() const;
};

/// Exponent arithmetic: which result families the pair (p, q) activates.
std::vector<std::string> activated_regimes(double p, double q, bool bounded_grad_a);

ValidationReport validate_scenario(const ScenarioSpec& spec);
ValidationReport validate_scenario(const std::filesystem::path& path);

}  // namespace fplab
