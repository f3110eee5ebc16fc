#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fplab/coefficients.hpp"

namespace fplab {

enum class EquationForm { Fp, FpDiv };
enum class AdvectionScheme { CenteredFlux, UpwindFlux };

const char* to_string(EquationForm f);
const char* to_string(AdvectionScheme s);
EquationForm equation_form_from_string(const std::string& name);
AdvectionScheme advection_scheme_from_string(const std::string& name);

struct SolverConfig {
  EquationForm form = EquationForm::FpDiv;
  AdvectionScheme advection = AdvectionScheme::CenteredFlux;
  double tol = 1e-10;
  int max_iter = 2000;
  /// Exponents whose L^q norms are recorded every step (2 is always included).
  std::vector<double> q_list{2.0};
  /// Keep every k-th state; the final state is always kept.
  int snapshot_every = 1;
  /// Optional source term f(t) added to the right-hand side, evaluated at t_{n+1}.
  std::function<ScalarField(double)> forcing;
};

struct StepDiagnostics {
  double t = 0.0;
  double mass = 0.0;
  std::vector<double> lq;    // aligned with Solution::q_list
  double grad_l2_sq = 0.0;   // ||grad u||_2^2 (spectral)
  int iterations = 0;
  double residual = 0.0;
  double min = 0.0, max = 0.0;
};

struct Solution {
  Grid grid;
  std::vector<double> q_list;
  std::vector<double> snapshot_times;
  std::vector<ScalarField> snapshots;
  std::vector<StepDiagnostics> steps;  // steps[0] is the initial state
  double dt = 0.0;
  double cfl = 0.0;                    // dt * 2d max|velocity| / h

  const ScalarField& final_state() const { return snapshots.back(); }
  const ScalarField& initial_state() const { return snapshots.front(); }
  /// Index of q in q_list; throws when q was not recorded.
  std::size_t q_index(double q) const;
};

/// Largest dt allowed by the advective CFL bound h / (2 d max|v|).
double cfl_limit(const std::vector<VectorField>& velocity);

/// d_t u + div(b~ u) - 1/2 sum d_i(a_ij d_j u) = 0; explicit conservative
/// flux advection, backward-Euler diffusion solved by conjugate gradient.
Solution solve_fp_div(const CoefficientSet& c, const ScalarField& u0, const TimeGrid& tg,
                      const SolverConfig& cfg = {});

/// d_t u + div(b u) - 1/2 sum d_ij(a_ij u) = 0; same splitting, diffusion
/// on the products a_ij u solved by BiCGSTAB.
Solution solve_fp(const CoefficientSet& c, const ScalarField& u0, const TimeGrid& tg,
                  const SolverConfig& cfg = {});

/// Dispatches on cfg.form.
Solution solve(const CoefficientSet& c, const ScalarField& u0, const TimeGrid& tg,
               const SolverConfig& cfg = {});

/// Discrete diffusion operator D (u -> 1/2 sum ... ) for one coefficient slice.
class DiffusionOperator {
 public:
  DiffusionOperator(const MatrixField& a, EquationForm form);
  void apply(std::span<const double> u, std::span<double> out) const;
  std::vector<double> diagonal() const;
  bool symmetric() const { return form_ == EquationForm::FpDiv; }

 private:
  Grid grid_;
  EquationForm form_;
  MatrixField a_;
  std::vector<std::vector<std::size_t>> plus_, minus_;
};

/// -div_h F(v u) with face velocities averaged from nodes.
void advection_rhs(const VectorField& v, std::span<const double> u, AdvectionScheme scheme,
                   std::span<double> out);

}  // namespace fplab
