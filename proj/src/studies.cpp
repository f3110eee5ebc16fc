#include "fplab/studies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "fplab/audits.hpp"
#include "fplab/commutators.hpp"

namespace fplab {

using nlohmann::json;

const char* to_string(StudyKind k) {
  switch (k) {
    case StudyKind::Solve: return "solve";
    case StudyKind::Commutator: return "commutator";
    case StudyKind::Regularity: return "regularity";
    case StudyKind::Stability: return "stability";
    case StudyKind::EnergyAudit: return "energy_audit";
    case StudyKind::Equivalence: return "equivalence";
    case StudyKind::SdeCompare: return "sde_compare";
  }
  return "unknown";
}

StudyKind study_kind_from_string(const std::string& name) {
  for (auto k : {StudyKind::Solve, StudyKind::Commutator, StudyKind::Regularity,
                 StudyKind::Stability, StudyKind::EnergyAudit, StudyKind::Equivalence,
                 StudyKind::SdeCompare}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown study kind '" + name + "'");
}

bool StudyResult::pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

const Verdict& StudyResult::verdict(const std::string& label) const {
  for (const auto& v : verdicts) {
    if (v.label == label) return v;
  }
  throw Error(ErrorKind::InvalidArgument, "no verdict labelled '" + label + "'");
}

CoefficientSet mollify(const CoefficientSet& c, const Mollifier& m) {
  std::vector<VectorField> b;
  std::vector<MatrixField> a;
  for (int k = 0; k < c.slices(); ++k) {
    b.push_back(mollify(c.b(k), m));
    a.push_back(mollify(c.a(k), m));
  }
  return CoefficientSet(std::move(b), std::move(a), c.horizon(), c.alpha(), c.regularity(), c.p());
}

TimeGrid admissible_time_grid(const CoefficientSet& c, double horizon, int steps, double cfl,
                              const std::vector<EquationForm>& forms) {
  double limit = kInfinity;
  for (auto form : forms) {
    std::vector<VectorField> v;
    if (form == EquationForm::FpDiv) {
      v = tilde_b(c);
    } else {
      for (int k = 0; k < c.slices(); ++k) v.push_back(c.b(k));
    }
    limit = std::min(limit, cfl_limit(v));
  }
  if (std::isfinite(limit)) {
    const double needed = std::ceil(horizon / (cfl * limit) - 1e-9);
    if (needed > steps) steps = static_cast<int>(needed);
  }
  return TimeGrid(horizon, steps);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

std::vector<double> strictly_decreasing(std::vector<double> v, const char* what) {
  if (v.empty()) throw Error(ErrorKind::InvalidArgument, std::string(what) + ": ladder is empty");
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k] < v[k - 1])) {
      throw Error(ErrorKind::InvalidArgument, std::string(what) + ": ladder must be strictly decreasing");
    }
  }
  return v;
}

std::vector<int> grid_ladder(const ScenarioSpec& spec, const LadderOverride& o, const char* what) {
  std::vector<int> grids;
  if (!o.values.empty()) {
    for (double v : o.values) grids.push_back(static_cast<int>(std::lround(v)));
  } else if (!spec.ladders.grids.empty()) {
    grids = spec.ladders.grids;
  } else {
    grids = {spec.n, 2 * spec.n, 4 * spec.n};
  }
  for (std::size_t k = 1; k < grids.size(); ++k) {
    if (!(grids[k] > grids[k - 1])) {
      throw Error(ErrorKind::InvalidArgument,
                  std::string(what) + ": grid ladder must strictly increase n");
    }
  }
  if (grids.size() < 2) throw Error(ErrorKind::InvalidArgument, std::string(what) + ": need >= 2 grids");
  return grids;
}

Table step_table(const Solution& sol, const std::string& name) {
  Table t{name, {"t", "mass"}, {}};
  for (double q : sol.q_list) t.header.push_back("lq_" + fmt(q));
  for (const char* h : {"grad_l2_sq", "iterations", "residual", "min", "max"}) t.header.push_back(h);
  for (const auto& s : sol.steps) {
    std::vector<json> row{s.t, s.mass};
    for (double v : s.lq) row.push_back(v);
    row.insert(row.end(), {s.grad_l2_sq, s.iterations, s.residual, s.min, s.max});
    t.rows.push_back(std::move(row));
  }
  return t;
}

Verdict mass_verdict(const Solution& sol, const ScalarField& u0, const SolverConfig& cfg) {
  const double l1 = lp_norm(u0, 1.0);
  const double m0 = sol.steps.front().mass;
  double drift = 0.0;
  for (const auto& s : sol.steps) drift = std::max(drift, std::abs(s.mass - m0));
  const int nt = static_cast<int>(sol.steps.size()) - 1;
  const double bound = cfg.form == EquationForm::FpDiv ? nt * cfg.tol * l1 : 1e-10 * l1;
  bool ok = drift <= bound || (l1 == 0.0 && drift == 0.0);
  std::string detail = "max |mass(t) - mass(0)| = " + fmt(drift) + " vs bound " + fmt(bound);
  if (cfg.advection == AdvectionScheme::UpwindFlux) {
    const double floor = std::min(u0.min(), 0.0) - cfg.tol * std::max(1.0, u0.max_abs());
    double lowest = kInfinity;
    for (const auto& s : sol.steps) lowest = std::min(lowest, s.min);
    ok = ok && lowest >= floor;
    detail += "; min u = " + fmt(lowest) + " vs floor " + fmt(floor);
  }
  return {"mass_conservation", ok, detail};
}

SolverConfig config_for(const ScenarioSpec& spec, int steps) {
  SolverConfig cfg = solver_config(spec);
  cfg.snapshot_every = std::max(1, steps / 200);
  return cfg;
}

struct Desc {
  NormDescriptor l1{1.0, 1.0, 0}, l2{2.0, 2.0, 0}, hm1{2.0, 2.0, -1};
};

}  // namespace

StudyResult solve_study(const ScenarioSpec& spec, const LadderOverride& o) {
  const ScenarioInstance inst = instantiate(spec, o.grid);
  SolverConfig cfg = config_for(spec, inst.time.steps());
  const Solution sol = solve(inst.coeffs, inst.u0, inst.time, cfg);
  StudyResult out;
  out.kind = StudyKind::Solve;
  out.tables.push_back(step_table(sol, "steps"));
  std::vector<double> times = o.values;
  if (times.empty()) times = {0.0, spec.horizon};
  for (double t : times) {
    auto it = std::min_element(sol.snapshot_times.begin(), sol.snapshot_times.end(),
                               [&](double a, double b) { return std::abs(a - t) < std::abs(b - t); });
    const auto k = static_cast<std::size_t>(it - sol.snapshot_times.begin());
    out.fields.emplace_back("u_t" + fmt(sol.snapshot_times[k]), sol.snapshots[k]);
  }
  out.verdicts.push_back(mass_verdict(sol, inst.u0, cfg));
  out.metrics = {{"n", inst.grid.n()},   {"dt", sol.dt},
                 {"steps", inst.time.steps()}, {"cfl", sol.cfl},
                 {"final_mass", sol.steps.back().mass},
                 {"final_l2", lp_norm(sol.final_state(), 2.0)}};
  return out;
}

StudyResult commutator_study(const ScenarioSpec& spec, const LadderOverride& o) {
  const ScenarioInstance inst = instantiate(spec, o.grid);
  const auto deltas = strictly_decreasing(
      o.values.empty() ? spec.delta_ladder(inst.grid.n()) : o.values, "commutator_study");
  if (spec.cls == CoefficientClass::W1pSingular && deltas.back() < 4.0 * inst.grid.spacing() * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "commutator_study: singular coefficients need delta >= 4h; smallest delta " << deltas.back()
       << " < " << 4.0 * inst.grid.spacing();
    throw Error(ErrorKind::Precondition, os.str());
  }
  const CoefficientSet& c = inst.coeffs;
  const ScalarField& w = inst.u0;
  const double tau = c.slice_length();
  const Desc D;

  std::vector<ScalarField> limit;
  for (int k = 0; k < c.slices(); ++k) limit.push_back(s1_limit(c.a(k), w));
  const double limit_l1 = bochner_norm_piecewise(limit, tau, D.l1);

  StudyResult out;
  out.kind = StudyKind::Commutator;
  Table rows{"commutators", {"kind", "delta", "l1", "l2", "l2_hminus1", "wall_seconds"}, {}};
  Table extra{"checks", {"delta", "split_defect_l1", "s1_minus_limit_l1", "s1_limit_l1"}, {}};
  const std::vector<CommutatorKind> kinds{CommutatorKind::R, CommutatorKind::R1, CommutatorKind::R2,
                                          CommutatorKind::S, CommutatorKind::S1};
  std::map<CommutatorKind, NormReport> rep_l1, rep_h;
  for (auto k : kinds) {
    rep_l1[k] = NormReport(D.l1, std::string(to_string(k)) + " L1");
    rep_h[k] = NormReport(D.hm1, std::string(to_string(k)) + " L2H-1");
  }
  std::vector<double> split_defect, limit_error;
  for (double delta : deltas) {
    const Mollifier m = make_mollifier(spec.mollifier, delta, inst.grid);
    std::map<CommutatorKind, CommutatorField> fields;
    for (auto k : kinds) {
      const auto t0 = Clock::now();
      fields[k] = commutator_series(k, c, w, m);
      const double wall = seconds_since(t0);
      const auto& sl = fields[k].slices;
      const double l1 = bochner_norm_piecewise(sl, tau, D.l1);
      const double l2 = bochner_norm_piecewise(sl, tau, D.l2);
      const double hm1 = bochner_norm_piecewise(sl, tau, D.hm1);
      rows.rows.push_back({to_string(k), delta, l1, l2, hm1, wall});
      rep_l1[k].add(delta, l1);
      rep_h[k].add(delta, hm1);
    }
    std::vector<ScalarField> defect, err;
    for (int s = 0; s < c.slices(); ++s) {
      defect.push_back(fields[CommutatorKind::R].slices[s] - fields[CommutatorKind::R1].slices[s] -
                       fields[CommutatorKind::R2].slices[s]);
      err.push_back(fields[CommutatorKind::S1].slices[s] - limit[s]);
    }
    split_defect.push_back(bochner_norm_piecewise(defect, tau, D.l1));
    limit_error.push_back(bochner_norm_piecewise(err, tau, D.l1));
    extra.rows.push_back({delta, split_defect.back(), limit_error.back(), limit_l1});
  }
  out.tables = {rows, extra};
  for (auto k : kinds) {
    out.reports.push_back(rep_l1[k]);
    out.reports.push_back(rep_h[k]);
  }

  const auto& r_l1 = rep_l1[CommutatorKind::R];
  const auto& r_h = rep_h[CommutatorKind::R];
  const auto& s_l1 = rep_l1[CommutatorKind::S];
  const auto& s1_l1 = rep_l1[CommutatorKind::S1];
  const auto& s1_h = rep_h[CommutatorKind::S1];
  out.metrics = {{"s1_limit_l1", limit_l1}, {"deltas", deltas}};

  if (spec.cls == CoefficientClass::Constant) {
    double coef = 1.0;
    for (int k = 0; k < c.slices(); ++k) {
      coef = std::max({coef, c.b(k).max_norm(), c.a(k).max_abs()});
    }
    const double bound = 1e-12 * h1_norm(w) * coef * inst.grid.n();
    double worst = 0.0;
    for (const auto& r : rows.rows) worst = std::max(worst, r[2].get<double>());
    out.metrics["null_bound"] = bound;
    out.metrics["null_worst_l1"] = worst;
    out.verdicts.push_back({"commutator_null", worst <= bound,
                            "max L1 over kinds and deltas " + fmt(worst) + " vs " + fmt(bound)});
  } else if (spec.cls == CoefficientClass::W1pSingular) {
    const double hr = s1_h.final_over_initial(), lr = s1_l1.final_over_initial();
    out.verdicts.push_back({"diffusion_commutator_separation",
                            s1_h.monotone_decreasing() && hr < 0.5 && lr > 0.8,
                            "s1 L2H-1 ratio " + fmt(hr) + (s1_h.monotone_decreasing() ? " (monotone)" : " (not monotone)") +
                                ", s1 L1 ratio " + fmt(lr)});
    const double rr = r_h.final_over_initial();
    out.verdicts.push_back({"transport_commutator_h-1", r_h.monotone_decreasing() && rr < 0.5,
                            "r L2H-1 ratio " + fmt(rr) + (r_h.monotone_decreasing() ? " (monotone)" : " (not monotone)")});
    out.metrics["s1_hminus1_ratio"] = hr;
    out.metrics["s1_l1_ratio"] = lr;
    out.metrics["r_hminus1_ratio"] = rr;
  } else {
    out.verdicts.push_back({"transport_commutator_l1", r_l1.monotone_decreasing(),
                            "r L1 ratio " + fmt(r_l1.final_over_initial())});
    double worst_split = 0.0;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
      const double scale = std::max(rows.rows[5 * k + 1][2].get<double>() +
                                        rows.rows[5 * k + 2][2].get<double>(),
                                    1e-300);
      worst_split = std::max(worst_split, split_defect[k] / scale);
    }
    out.verdicts.push_back({"transport_commutator_split", worst_split <= 1e-6,
                            "max ||r - r1 - r2||_1 / (||r1||_1 + ||r2||_1) = " + fmt(worst_split)});
    const double s_last = s_l1.values().back();
    out.verdicts.push_back({"diffusion_commutator_cancellation", s_last < 0.1 * limit_l1,
                            "||s||_1 = " + fmt(s_last) + " vs 10% of ||s1 limit||_1 = " + fmt(0.1 * limit_l1)});
    const double le = limit_error.back();
    out.verdicts.push_back({"diffusion_commutator_limit", le <= 0.05 * limit_l1,
                            "||s1 - s1 limit||_1 = " + fmt(le) + " vs 5% of ||s1 limit||_1 = " +
                                fmt(0.05 * limit_l1) + "; ||s1||_1 = " + fmt(s1_l1.values().back())});
    out.metrics["s_l1_final"] = s_last;
    out.metrics["s1_limit_error_l1"] = le;
    out.metrics["split_defect_rel"] = worst_split;
  }
  return out;
}

StudyResult regularity_study(const ScenarioSpec& spec, const LadderOverride& o) {
  const double p = spec.coeff.p, q = spec.q;
  const double s = (std::isinf(p) ? 0.0 : 1.0 / p) + (std::isinf(q) ? 0.0 : 1.0 / q);
  if (s > 0.5 + 1e-12) {
    std::ostringstream os;
    os << "regularity study needs 1/p + 1/q <= 1/2 for a uniform gradient bound; got p=" << p
       << ", q=" << q << " with 1/p + 1/q = " << s;
    throw Error(ErrorKind::Hypothesis, os.str());
  }
  const auto grids = grid_ladder(spec, o, "regularity_study");
  StudyResult out;
  out.kind = StudyKind::Regularity;
  NormReport rep(NormDescriptor{2.0, 2.0, 1}, "grad u L2L2");
  Table t{"regularity", {"n", "h", "grad_l2l2", "steps", "wall_seconds"}, {}};
  for (int n : grids) {
    const auto t0 = Clock::now();
    const ScenarioInstance inst = instantiate(spec, n);
    const Solution sol = solve(inst.coeffs, inst.u0, inst.time, config_for(spec, inst.time.steps()));
    const double g = std::sqrt(parabolic_budget(sol, inst.coeffs).total_gradient_budget());
    rep.add(inst.grid.spacing(), g);
    t.rows.push_back({n, inst.grid.spacing(), g, inst.time.steps(), seconds_since(t0)});
  }
  double worst = 0.0;
  std::vector<double> ratios;
  for (std::size_t k = 1; k < rep.size(); ++k) {
    ratios.push_back(rep.values()[k] / rep.values()[k - 1]);
    worst = std::max(worst, ratios.back());
  }
  out.tables.push_back(t);
  out.reports.push_back(rep);
  out.metrics = {{"ratios", ratios}, {"worst_ratio", worst}};
  out.verdicts.push_back({"regularity", worst <= 1.1, "largest successive ratio " + fmt(worst) + " (limit 1.1)"});
  return out;
}

StudyResult stability_study(const ScenarioSpec& spec, const LadderOverride& o) {
  const ScenarioInstance inst = instantiate(spec, o.grid);
  const auto deltas = strictly_decreasing(
      o.values.empty() ? spec.delta_ladder(inst.grid.n()) : o.values, "stability_study");
  if (deltas.size() < 2) throw Error(ErrorKind::InvalidArgument, "stability_study: need >= 2 deltas");
  std::vector<CoefficientSet> sets;
  for (double d : deltas) sets.push_back(mollify(inst.coeffs, make_mollifier(spec.mollifier, d, inst.grid)));
  int steps = inst.time.steps();
  for (const auto& cs : sets) {
    steps = std::max(steps, admissible_time_grid(cs, spec.horizon, steps, spec.cfl, {spec.form}).steps());
  }
  const TimeGrid tg(spec.horizon, steps);
  const SolverConfig cfg = config_for(spec, steps);
  std::vector<Solution> sols;
  for (const auto& cs : sets) sols.push_back(solve(cs, inst.u0, tg, cfg));

  StudyResult out;
  out.kind = StudyKind::Stability;
  NormReport rep(NormDescriptor{2.0, kInfinity, 0}, "u^dk - u^dk+1 LinfL2");
  Table t{"stability", {"delta_k", "delta_k1", "linf_l2_difference"}, {}};
  for (std::size_t k = 0; k + 1 < sols.size(); ++k) {
    double worst = 0.0;
    for (std::size_t s = 0; s < sols[k].snapshots.size(); ++s) {
      worst = std::max(worst, lp_norm(sols[k].snapshots[s] - sols[k + 1].snapshots[s], 2.0));
    }
    rep.add(deltas[k + 1], worst);
    t.rows.push_back({deltas[k], deltas[k + 1], worst});
  }
  out.tables.push_back(t);
  out.reports.push_back(rep);
  out.metrics = {{"differences", rep.values()}, {"steps", steps}};
  out.verdicts.push_back({"stability", rep.monotone_decreasing(),
                          "differences " + std::string(rep.monotone_decreasing() ? "decrease" : "do not decrease") +
                              " monotonically; final/initial " + fmt(rep.final_over_initial())});
  return out;
}

StudyResult energy_audit_study(const ScenarioSpec& spec, const LadderOverride& o) {
  const ScenarioInstance inst = instantiate(spec, o.grid);
  const SolverConfig cfg = config_for(spec, inst.time.steps());
  const Solution sol = solve(inst.coeffs, inst.u0, inst.time, cfg);
  StudyResult out;
  out.kind = StudyKind::EnergyAudit;
  out.tables.push_back(step_table(sol, "steps"));

  Table et{"energy", {"q", "t", "ratio"}, {}};
  bool all = true;
  std::string detail;
  json worst = json::object();
  for (double q : sol.q_list) {
    if (!(q > 1.0) || std::isinf(q)) continue;
    const EnergyAudit a = energy_audit(sol, inst.coeffs, q);
    for (std::size_t k = 0; k < a.times.size(); ++k) et.rows.push_back({q, a.times[k], a.ratios[k]});
    all = all && a.pass;
    detail += (detail.empty() ? "" : ", ") + std::string("q=") + fmt(q) + " max ratio " + fmt(a.max_ratio);
    worst[fmt(q)] = a.max_ratio;
  }
  out.tables.push_back(et);
  out.verdicts.push_back({"energy_estimate", all, detail + " (limit 1.05)"});

  const ParabolicBudget pb = parabolic_budget(sol, inst.coeffs);
  Table pt{"parabolic_budget", {"t", "lhs", "rhs", "gradient_budget"}, {}};
  for (std::size_t k = 0; k < pb.times.size(); ++k) {
    pt.rows.push_back({pb.times[k], pb.lhs[k], pb.rhs[k], pb.gradient_budget[k]});
  }
  out.tables.push_back(pt);
  out.verdicts.push_back({"parabolic_budget", pb.pass, "worst lhs/rhs " + fmt(pb.worst_ratio) + " (limit 1.05)"});

  const double M = 0.5 * inst.u0.max_abs();
  const RenormFunction beta(M > 0.0 ? M : 1.0, (M > 0.0 ? M : 1.0) / 4.0);
  const RenormTrace rt = renorm_diagnostic(sol, inst.coeffs, beta);
  Table rtab{"renormalization", {"t", "trace", "bound"}, {}};
  for (std::size_t k = 0; k < rt.times.size(); ++k) rtab.rows.push_back({rt.times[k], rt.trace[k], rt.bound[k]});
  out.tables.push_back(rtab);
  out.verdicts.push_back({"renormalization", rt.pass, "M = " + fmt(beta.M()) + ", eps = " + fmt(beta.eps())});
  out.verdicts.push_back(mass_verdict(sol, inst.u0, cfg));

  out.metrics = {{"max_energy_ratio", worst},
                 {"parabolic_worst_ratio", pb.worst_ratio},
                 {"gradient_budget", pb.total_gradient_budget()},
                 {"divergence_budget", negative_divergence_budget(inst.coeffs).integral},
                 {"dt", sol.dt},
                 {"cfl", sol.cfl}};
  return out;
}

StudyResult equivalence_check(const ScenarioSpec& spec, const LadderOverride& o) {
  const auto grids = grid_ladder(spec, o, "equivalence_check");
  StudyResult out;
  out.kind = StudyKind::Equivalence;
  NormReport rep(NormDescriptor{2.0, 2.0, 0}, "u_fp - u_fp_div L2 at T");
  Table t{"equivalence", {"n", "h", "l2_difference", "steps"}, {}};
  bool constant_a = true;
  for (int n : grids) {
    const ScenarioInstance inst = instantiate(spec, n);
    for (int k = 0; k < inst.coeffs.slices(); ++k) {
      constant_a = constant_a && column_divergence_sup(inst.coeffs.a(k)) <= 1e-12;
    }
    const int steps = spec.steps * n / grids.front();
    const TimeGrid tg = admissible_time_grid(inst.coeffs, spec.horizon, steps, spec.cfl,
                                             {EquationForm::Fp, EquationForm::FpDiv});
    SolverConfig cfg = config_for(spec, tg.steps());
    cfg.snapshot_every = tg.steps();
    cfg.form = EquationForm::Fp;
    const Solution a = solve(inst.coeffs, inst.u0, tg, cfg);
    cfg.form = EquationForm::FpDiv;
    const Solution b = solve(inst.coeffs, inst.u0, tg, cfg);
    const double diff = lp_norm(a.final_state() - b.final_state(), 2.0);
    rep.add(inst.grid.spacing(), diff);
    t.rows.push_back({n, inst.grid.spacing(), diff, tg.steps()});
  }
  out.tables.push_back(t);
  out.reports.push_back(rep);
  if (constant_a) {
    double worst = 0.0;
    for (double v : rep.values()) worst = std::max(worst, v);
    out.metrics = {{"worst_difference", worst}};
    out.verdicts.push_back({"form_equivalence", worst <= 1e-8,
                            "constant a: largest difference " + fmt(worst) + " (limit 1e-8)"});
  } else {
    if (rep.size() < 3) throw Error(ErrorKind::InvalidArgument, "equivalence_check: need >= 3 grids for a rate");
    const RateFit fit = rate_fit(rep);
    out.metrics = {{"rate", fit.infinite ? json("inf") : json(fit.rate)}, {"residual", fit.residual}};
    out.verdicts.push_back({"form_equivalence", fit.infinite || fit.rate >= 1.0,
                            "fitted rate " + (fit.infinite ? std::string("inf") : fmt(fit.rate)) + " (limit 1.0)"});
  }
  return out;
}

StudyResult sde_compare(const ScenarioSpec& spec, const LadderOverride& o) {
  const ScenarioInstance inst = instantiate(spec, o.grid);
  SolverConfig cfg = config_for(spec, inst.time.steps());
  cfg.snapshot_every = inst.time.steps();
  const Solution sol = solve(inst.coeffs, inst.u0, inst.time, cfg);
  std::vector<double> counts = o.values;
  if (counts.empty()) {
    for (int k = 0; k < 4; ++k) counts.push_back(static_cast<double>(spec.sde.N) * (1 << k));
  }
  StudyResult out;
  out.kind = StudyKind::SdeCompare;
  Table t{"law", {"N", "l1", "floor", "bins", "wall_seconds"}, {}};
  std::vector<double> l1;
  for (double Nd : counts) {
    const auto N = static_cast<std::size_t>(std::llround(Nd));
    const auto t0 = Clock::now();
    ParticleEnsemble ens = simulate(inst.coeffs, sample_initial(inst.u0, N, spec.sde.seed), inst.time, spec.sde);
    const LawComparison cmp = law_compare(sol, ens, spec.sde.bins);
    t.rows.push_back({N, cmp.l1, cmp.floor, cmp.bins, seconds_since(t0)});
    l1.push_back(cmp.l1);
    if (!out.ensemble) out.ensemble = std::move(ens);
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < l1.size(); ++k) decreasing = decreasing && l1[k] < l1[k - 1];
  out.tables.push_back(t);
  out.fields.emplace_back("pde_final", sol.final_state());
  out.metrics = {{"l1", l1}, {"floor", t.rows.front()[2]}, {"mean_x0", out.ensemble->mean(0)}};
  std::ostringstream os;
  os << "L1 at N=" << static_cast<long long>(counts.front()) << " is " << fmt(l1.front())
     << " (limit 0.05, floor " << fmt(t.rows.front()[2].get<double>()) << "), "
     << (decreasing ? "decreasing" : "not decreasing") << " over " << counts.size() - 1 << " doublings";
  out.verdicts.push_back({"forward_law", l1.front() <= 0.05 && decreasing, os.str()});
  return out;
}

StudyResult run(StudyKind kind, const ScenarioSpec& spec, const LadderOverride& o) {
  switch (kind) {
    case StudyKind::Solve: return solve_study(spec, o);
    case StudyKind::Commutator: return commutator_study(spec, o);
    case StudyKind::Regularity: return regularity_study(spec, o);
    case StudyKind::Stability: return stability_study(spec, o);
    case StudyKind::EnergyAudit: return energy_audit_study(spec, o);
    case StudyKind::Equivalence: return equivalence_check(spec, o);
    case StudyKind::SdeCompare: return sde_compare(spec, o);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown study kind");
}

}  // namespace fplab
