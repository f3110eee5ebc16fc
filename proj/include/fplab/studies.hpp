#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fplab/norms.hpp"
#include "fplab/scenario.hpp"

namespace fplab {

enum class StudyKind { Solve, Commutator, Regularity, Stability, EnergyAudit, Equivalence, SdeCompare };

const char* to_string(StudyKind k);
StudyKind study_kind_from_string(const std::string& name);

/// One pass/fail outcome, keyed by a result-label id.
struct Verdict {
  std::string label;
  bool pass = false;
  std::string detail;
};

/// Rectangular result table; cells are numbers or strings.
struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<nlohmann::json>> rows;
};

struct StudyResult {
  StudyKind kind = StudyKind::Solve;
  std::vector<Verdict> verdicts;
  std::vector<Table> tables;
  std::vector<NormReport> reports;
  std::vector<std::pair<std::string, ScalarField>> fields;
  std::optional<ParticleEnsemble> ensemble;
  nlohmann::json metrics = nlohmann::json::object();

  bool pass() const;
  const Verdict& verdict(const std::string& label) const;
};

/// Optional overrides for the scenario's ladders.
struct LadderOverride {
  std::vector<double> values;  // deltas, n values or particle counts depending on the study
  int grid = 0;                // n override (0 keeps the scenario)
};

StudyResult solve_study(const ScenarioSpec& spec, const LadderOverride& o = {});
/// Commutator norms per delta with w = the scenario's initial field.
StudyResult commutator_study(const ScenarioSpec& spec, const LadderOverride& o = {});
/// Throws Error{Hypothesis} when 1/p + 1/q > 1/2.
StudyResult regularity_study(const ScenarioSpec& spec, const LadderOverride& o = {});
StudyResult stability_study(const ScenarioSpec& spec, const LadderOverride& o = {});
StudyResult energy_audit_study(const ScenarioSpec& spec, const LadderOverride& o = {});
StudyResult equivalence_check(const ScenarioSpec& spec, const LadderOverride& o = {});
/// Ladder values are particle counts; default N, 2N, 4N, 8N.
StudyResult sde_compare(const ScenarioSpec& spec, const LadderOverride& o = {});

StudyResult run(StudyKind kind, const ScenarioSpec& spec, const LadderOverride& o = {});

/// Coefficients mollified slice by slice; ellipticity is preserved.
CoefficientSet mollify(const CoefficientSet& c, const Mollifier& m);

/// Time grid with at least `steps` steps that meets the CFL bound of every listed form.
TimeGrid admissible_time_grid(const CoefficientSet& c, double horizon, int steps, double cfl,
                              const std::vector<EquationForm>& forms);

}  // namespace fplab
