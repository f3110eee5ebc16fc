#pragma once

#include <vector>

#include "fplab/solver.hpp"

namespace fplab {

/// C(q) = (q-1)/q
double energy_constant(double q);

struct EnergyAudit {
  double q = 2.0;
  double constant = 0.5;
  double tol = 0.05;
  std::vector<double> times;
  std::vector<double> ratios;  // ||u(t)||_q / (||u0||_q exp(C(q) int_0^t ||(div b~)^-||_inf))
  double max_ratio = 0.0;
  bool pass = true;
};

/// Throws Error{Precondition} when q was not recorded by the solver.
EnergyAudit energy_audit(const Solution& sol, const CoefficientSet& c, double q, double tol = 0.05);

struct ParabolicBudget {
  double alpha = 0.0;
  double slack = 0.05;
  std::vector<double> times;
  std::vector<double> lhs;  // ||u(t)||^2 + alpha int_0^t ||grad u||^2
  std::vector<double> rhs;  // ||u0||^2 + int_0^t ||(div b~)^-||_inf ||u||^2
  std::vector<double> gradient_budget;  // int_0^t ||grad u||^2
  double worst_ratio = 0.0;             // max lhs / rhs
  bool pass = true;

  double total_gradient_budget() const { return gradient_budget.back(); }
};

/// Time integrals use the right-endpoint rule, matching backward Euler.
ParabolicBudget parabolic_budget(const Solution& sol, const CoefficientSet& c, double slack = 0.05);

/// Even C^2 truncation profile: z^2 on |z| <= M, then smooth transitions of
/// width eps into a concave stretch that levels off at exactly 2 M^2.
class RenormFunction {
 public:
  /// Requires M > 0 and 0 < eps <= M/4.
  RenormFunction(double M, double eps);

  double M() const { return M_; }
  double eps() const { return eps_; }
  double operator()(double z) const;
  double derivative(double z) const;
  double second_derivative(double z) const;
  /// |z| beyond which the profile is constant.
  double flat_from() const { return M_ + 2.0 * eps_ + plateau_; }

 private:
  struct Point {
    double v, dv;
  };
  Point eval(double z) const;  // z >= 0
  double M_, eps_, c_, plateau_;
};

struct RenormTrace {
  std::vector<double> times;
  std::vector<double> trace;  // int beta_M(u(t))
  std::vector<double> bound;  // trace(0) exp((q-1) budget(t)), q = 2
  double slack = 0.05;
  double floor = 1e-14;
  bool pass = true;
};

RenormTrace renorm_diagnostic(const Solution& sol, const CoefficientSet& c,
                              const RenormFunction& beta, double slack = 0.05);

}  // namespace fplab
