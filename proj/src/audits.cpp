#include "fplab/audits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fplab/norms.hpp"

namespace fplab {

double energy_constant(double q) {
  if (!(q > 1.0) || std::isinf(q)) {
    throw Error(ErrorKind::InvalidArgument, "energy audit needs q in (1, inf)");
  }
  return (q - 1.0) / q;
}

namespace {

void require_steps(const Solution& sol) {
  if (sol.steps.empty()) throw Error(ErrorKind::Precondition, "solution has no diagnostics");
}

}  // namespace

EnergyAudit energy_audit(const Solution& sol, const CoefficientSet& c, double q, double tol) {
  require_steps(sol);
  EnergyAudit out;
  out.q = q;
  out.constant = energy_constant(q);
  out.tol = tol;
  const std::size_t iq = sol.q_index(q);
  const DivergenceBudget budget = negative_divergence_budget(c);
  const double horizon = sol.steps.back().t > 0.0 ? sol.steps.back().t : 1.0;
  const double u0 = sol.steps.front().lq[iq];
  for (const auto& s : sol.steps) {
    const double B = budget.cumulative(s.t * c.horizon() / horizon, c.horizon()) * horizon / c.horizon();
    const double ratio = u0 > 0.0 ? s.lq[iq] / (u0 * std::exp(out.constant * B)) : 0.0;
    out.times.push_back(s.t);
    out.ratios.push_back(ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
  }
  out.pass = out.max_ratio <= 1.0 + tol;
  return out;
}

ParabolicBudget parabolic_budget(const Solution& sol, const CoefficientSet& c, double slack) {
  require_steps(sol);
  ParabolicBudget out;
  out.alpha = c.alpha();
  out.slack = slack;
  const DivergenceBudget budget = negative_divergence_budget(c);
  const std::size_t i2 = sol.q_index(2.0);
  const double horizon = sol.steps.back().t > 0.0 ? sol.steps.back().t : 1.0;
  const double u0sq = std::pow(sol.steps.front().lq[i2], 2);
  double grad = 0.0, source = 0.0;
  for (std::size_t n = 0; n < sol.steps.size(); ++n) {
    const auto& s = sol.steps[n];
    if (n > 0) {
      const double dt = s.t - sol.steps[n - 1].t;
      const double tmid = 0.5 * (s.t + sol.steps[n - 1].t) * c.horizon() / horizon;
      grad += dt * s.grad_l2_sq;
      source += dt * budget.slice_values[c.slice_at(tmid)] * s.lq[i2] * s.lq[i2];
    }
    const double lhs = s.lq[i2] * s.lq[i2] + out.alpha * grad;
    const double rhs = u0sq + source;
    out.times.push_back(s.t);
    out.lhs.push_back(lhs);
    out.rhs.push_back(rhs);
    out.gradient_budget.push_back(grad);
    if (rhs > 0.0) out.worst_ratio = std::max(out.worst_ratio, lhs / rhs);
    else if (lhs > 0.0) out.worst_ratio = std::numeric_limits<double>::infinity();
  }
  out.pass = out.worst_ratio <= 1.0 + slack;
  return out;
}

RenormFunction::RenormFunction(double M, double eps) : M_(M), eps_(eps) {
  if (!(M > 0.0) || !(eps > 0.0) || eps > 0.25 * M) {
    std::ostringstream os;
    os << "renormalization profile needs M > 0 and 0 < eps <= M/4 (got M=" << M << ", eps=" << eps
       << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  c_ = (2.0 * M + eps) * (2.0 * M + eps) / (2.0 * (M * M - M * eps - 0.2 * eps * eps));
  plateau_ = (2.0 * M + eps - c_ * eps) / c_;
}

namespace {
double S(double t) { return t * t * (3.0 - 2.0 * t); }
double S1(double t) { return t * t * t - 0.5 * t * t * t * t; }            // int_0^t S
double S2(double t) { return 0.25 * std::pow(t, 4) - 0.1 * std::pow(t, 5); }  // int_0^t S1
}  // namespace

RenormFunction::Point RenormFunction::eval(double z) const {
  const double M = M_, e = eps_, c = c_;
  if (z <= M) return {z * z, 2.0 * z};
  if (z <= M + e) {
    const double t = (z - M) / e;
    return {M * M + 2.0 * M * e * t + e * e * (t * t - (2.0 + c) * S2(t)),
            2.0 * M + e * (2.0 * t - (2.0 + c) * S1(t))};
  }
  const double v1 = M * M + 2.0 * M * e + e * e * (0.7 - 0.15 * c);
  const double d1 = 2.0 * M + e * (1.0 - 0.5 * c);
  if (z <= M + e + plateau_) {
    const double s = z - M - e;
    return {v1 + d1 * s - 0.5 * c * s * s, d1 - c * s};
  }
  const double v2 = v1 + d1 * plateau_ - 0.5 * c * plateau_ * plateau_;
  const double d2 = d1 - c * plateau_;
  if (z <= flat_from()) {
    const double t = (z - M - e - plateau_) / e;
    return {v2 + d2 * e * t - c * e * e * (0.5 * t * t - S2(t)), d2 - c * e * (t - S1(t))};
  }
  return {2.0 * M * M, 0.0};
}

double RenormFunction::operator()(double z) const { return eval(std::abs(z)).v; }

double RenormFunction::derivative(double z) const {
  const double d = eval(std::abs(z)).dv;
  return z < 0 ? -d : d;
}

double RenormFunction::second_derivative(double z) const {
  const double a = std::abs(z), M = M_, e = eps_;
  if (a <= M) return 2.0;
  if (a <= M + e) return 2.0 - (2.0 + c_) * S((a - M) / e);
  if (a <= M + e + plateau_) return -c_;
  if (a <= flat_from()) return -c_ * (1.0 - S((a - M - e - plateau_) / e));
  return 0.0;
}

RenormTrace renorm_diagnostic(const Solution& sol, const CoefficientSet& c,
                              const RenormFunction& beta, double slack) {
  if (sol.snapshots.empty()) throw Error(ErrorKind::Precondition, "solution has no snapshots");
  RenormTrace out;
  out.slack = slack;
  const DivergenceBudget budget = negative_divergence_budget(c);
  const double horizon = sol.steps.back().t > 0.0 ? sol.steps.back().t : 1.0;
  const double hd = sol.grid.cell_volume();
  double trace0 = 0.0;
  for (std::size_t k = 0; k < sol.snapshots.size(); ++k) {
    double s = 0.0;
    for (double v : sol.snapshots[k].values()) s += beta(v);
    s *= hd;
    if (k == 0) trace0 = s;
    const double t = sol.snapshot_times[k];
    const double B = budget.cumulative(t * c.horizon() / horizon, c.horizon()) * horizon / c.horizon();
    const double bound = trace0 * std::exp(B);
    out.times.push_back(t);
    out.trace.push_back(s);
    out.bound.push_back(bound);
    if (s > bound * (1.0 + slack) + out.floor) out.pass = false;
  }
  return out;
}

}  // namespace fplab
