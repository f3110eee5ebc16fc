// Acceptance gate: `fplab_acceptance <k>` runs criterion k and prints one
// PASS/FAIL line; `fplab_acceptance all` runs every criterion.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "fplab/audits.hpp"
#include "fplab/commutators.hpp"
#include "fplab/experiments.hpp"
#include "fplab/norms.hpp"
#include "fplab/studies.hpp"

using namespace fplab;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [FAIL]");
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

ScenarioSpec scenario(const std::string& name) {
  return load_scenario(fs::path(FPLAB_SCENARIO_DIR) / (name + ".json"));
}

std::vector<std::string> suite() {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(FPLAB_SCENARIO_DIR)) {
    if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

double l1_direct(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += std::abs(v);
  return s * f.grid().cell_volume();
}

double linf_error(const ScalarField& u, const std::function<double(double)>& exact) {
  double e = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) e = std::max(e, std::abs(u[k] - exact(u.grid().coord(k)[0])));
  return e;
}

double column(const Table& t, std::size_t row, const std::string& name) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  return t.rows.at(row).at(static_cast<std::size_t>(it - t.header.begin())).get<double>();
}

// ---------------------------------------------------------------- criteria

Outcome null_commutators() {
  Outcome o;
  for (int d : {1, 2}) {
    const int n = d == 1 ? 256 : 64;
    const Grid g = make_grid(d, n, 2 * kPi);
    const ScalarField w = d == 1 ? make_initial(g, {"power_law", {}}, 3)
                                 : make_initial(g, {"random_fourier", {{"kmax", 6.0}}}, 3);
    VectorField b(g);
    for (int i = 0; i < d; ++i) b[i] = ScalarField(g, 1.3 - 1.7 * i);
    MatrixField a(g, 1.7);
    if (d == 2) a(0, 1) = ScalarField(g, 0.3);
    const double scale = 1.7 * n;
    const double bound = 1e-12 * h1_norm(w) * scale;
    double worst_r = 0.0, worst_s = 0.0;
    for (int cells : {16, 8, 4, 2}) {
      const Mollifier m = make_mollifier(KernelFamily::Bump, cells * g.spacing(), g);
      const RSplit r = commutator_r(b, w, m);
      worst_r = std::max(worst_r, l1_direct(r.r.field()));
      worst_s = std::max({worst_s, l1_direct(commutator_s(a, w, m).field()),
                          l1_direct(commutator_s1(a, w, m).field())});
    }
    o.check(worst_r <= bound, "d=" + std::to_string(d) + " ||r||_1 " + num(worst_r) + " <= " + num(bound));
    o.check(worst_s <= bound, "d=" + std::to_string(d) + " ||s||_1,||s1||_1 " + num(worst_s) + " <= " + num(bound));
  }
  const auto res = commutator_study(scenario("constant_drift_2d"));
  o.check(res.pass(), "constant_drift_2d study verdict " + std::string(res.pass() ? "PASS" : "FAIL"));
  return o;
}

Outcome diffusion_cancellation() {
  Outcome o;
  const Grid g = make_grid(1, 1024, 2 * kPi);
  MatrixField a(g);
  a(0, 0) = ScalarField::sample(g, [](const auto& x) { return 2.0 + std::sin(x[0]); });
  const ScalarField w = ScalarField::sample(g, [](const auto& x) { return std::sin(2 * x[0]); });
  const ScalarField limit = ScalarField::sample(
      g, [](const auto& x) { return -2.0 * std::cos(2 * x[0]) * std::cos(x[0]); });
  const double lim = l1_direct(limit);
  const Mollifier m = make_mollifier(KernelFamily::Bump, 0.025, g);
  const double s = l1_direct(commutator_s(a, w, m).field());
  const double gap = l1_direct(commutator_s1(a, w, m).field() - limit);
  o.check(s < 0.1 * lim, "||s||_1 = " + num(s) + " < 10% of ||limit||_1 = " + num(0.1 * lim));
  o.check(gap <= 0.05 * lim, "||s1 - limit||_1 = " + num(gap) + " <= 5% of ||limit||_1 = " + num(0.05 * lim));
  return o;
}

Outcome separation_suite(bool transport) {
  Outcome o;
  for (int seed : {1, 2, 3}) {
    const std::string name = "w1p_singular_s" + std::to_string(seed);
    const auto res = commutator_study(scenario(name));
    const Table& t = res.tables.front();
    std::vector<double> h, l1;
    const std::string kind = transport ? "r" : "s1";
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
      if (t.rows[k][0].get<std::string>() != kind) continue;
      h.push_back(column(t, k, "l2_hminus1"));
      l1.push_back(column(t, k, "l1"));
    }
    bool mono = h.size() == 3;
    for (std::size_t k = 1; k < h.size(); ++k) mono = mono && h[k] < h[k - 1];
    const double hr = h.back() / h.front(), lr = l1.back() / l1.front();
    o.check(mono && hr < 0.5, name + " " + kind + " L2H-1 ratio " + num(hr) + (mono ? " monotone" : " not monotone"));
    if (!transport) o.check(lr > 0.8, name + " s1 L1 ratio " + num(lr) + " > 0.8");
  }
  return o;
}

Outcome solver_exactness() {
  Outcome o;
  {
    const ScenarioSpec s = scenario("heat_1d");
    const auto inst = instantiate(s);
    const Solution sol = solve(inst.coeffs, inst.u0, inst.time, solver_config(s));
    const double T = sol.snapshot_times.back();
    const double e = linf_error(sol.final_state(), [&](double x) { return std::exp(-T) * std::sin(x); });
    o.check(inst.time.dt() == 1e-3 && inst.grid.n() == 256 && std::abs(T - 1.0) < 1e-12,
            "heat n=256 dt=1e-3 t=1");
    o.check(e <= 1e-3, "heat Linf error " + num(e) + " <= 1e-3");
  }
  {
    const ScenarioSpec s = scenario("advection_diffusion_1d");
    const auto inst = instantiate(s);
    const Solution sol = solve(inst.coeffs, inst.u0, inst.time, solver_config(s));
    const double T = sol.snapshot_times.back(), c = 1.0, alpha = 0.5, k = 2.0;
    const double e = linf_error(sol.final_state(), [&](double x) {
      return std::exp(-alpha * k * k * T / 2) * std::sin(k * (x - c * T));
    });
    o.check(e <= 5e-3, "advection-diffusion Linf error " + num(e) + " <= 5e-3");
  }
  return o;
}

Outcome energy_suite() {
  Outcome o;
  double worst = 0.0;
  std::string where;
  for (const auto& name : suite()) {
    const ScenarioSpec s = scenario(name);
    const auto inst = instantiate(s, s.dim == 1 ? 256 : 0);
    SolverConfig cfg = solver_config(s);
    cfg.q_list = {2.0, 4.0};
    const Solution sol = solve(inst.coeffs, inst.u0, inst.time, cfg);
    const DivergenceBudget bud = negative_divergence_budget(inst.coeffs);
    for (double q : {2.0, 4.0}) {
      const double C = (q - 1.0) / q;
      const std::size_t qi = sol.q_index(q);
      const double n0 = sol.steps.front().lq[qi];
      for (const auto& st : sol.steps) {
        if (n0 == 0.0) continue;
        const double ratio = st.lq[qi] / (n0 * std::exp(C * bud.cumulative(st.t, inst.coeffs.horizon())));
        if (ratio > worst) {
          worst = ratio;
          where = name + " q=" + num(q);
        }
      }
    }
  }
  o.check(worst <= 1.05, "max audit ratio over " + std::to_string(suite().size()) + " scenarios " +
                             num(worst) + " (" + where + ") <= 1.05");
  return o;
}

Outcome parabolic_suite() {
  Outcome o;
  double worst = 0.0;
  std::string where;
  for (const auto& name : suite()) {
    const ScenarioSpec s = scenario(name);
    const auto inst = instantiate(s, s.dim == 1 ? 256 : 0);
    const Solution sol = solve(inst.coeffs, inst.u0, inst.time, solver_config(s));
    const ParabolicBudget pb = parabolic_budget(sol, inst.coeffs);
    for (std::size_t k = 0; k < pb.times.size(); ++k) {
      if (pb.rhs[k] <= 0.0) continue;
      if (pb.lhs[k] / pb.rhs[k] > worst) {
        worst = pb.lhs[k] / pb.rhs[k];
        where = name;
      }
    }
  }
  o.check(worst <= 1.05, "worst lhs/rhs " + num(worst) + " (" + where + ") <= 1.05");
  const ScenarioSpec s = scenario("heat_1d");
  const auto inst = instantiate(s);
  const Solution sol = solve(inst.coeffs, inst.u0, inst.time, solver_config(s));
  const ParabolicBudget pb = parabolic_budget(sol, inst.coeffs);
  const double T = pb.times.back();
  const double exact = kPi * (1.0 - std::exp(-2.0 * T)) / 2.0;
  const double rel = std::abs(pb.total_gradient_budget() - exact) / exact;
  o.check(rel <= 0.01, "heat gradient budget " + num(pb.total_gradient_budget()) + " vs exact " +
                           num(exact) + " rel " + num(rel) + " <= 1%");
  const double eq = std::abs(pb.lhs.back() - pb.rhs.back()) / pb.rhs.back();
  o.check(eq <= 0.01, "heat equality defect " + num(eq) + " <= 1%");
  return o;
}

Outcome regularity() {
  Outcome o;
  const ScenarioSpec s = scenario("w1p_compensated_1d");
  o.check(s.dim == 1 && s.coeff.p == 8 && s.q == 8, "d=1, p=q=8");
  const auto res = regularity_study(s, {{128, 256, 512}, 0});
  const Table& t = res.tables.front();
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    const double r = column(t, k, "grad_l2l2") / column(t, k - 1, "grad_l2l2");
    o.check(r <= 1.1, "ratio n=" + t.rows[k][0].dump() + "/" + t.rows[k - 1][0].dump() + " = " + num(r));
  }
  try {
    regularity_study(scenario("w1p_low_integrability"));
    o.check(false, "p=q=3 refused");
  } catch (const Error& e) {
    o.check(e.kind() == ErrorKind::Hypothesis, "p=q=3 refused");
  }
  return o;
}

Outcome equivalence() {
  Outcome o;
  const auto res = equivalence_check(scenario("smooth_1d"), {{64, 128, 256}, 0});
  const Table& t = res.tables.front();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const double x = std::log(column(t, k, "h")), y = std::log(column(t, k, "l2_difference"));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double n = static_cast<double>(t.rows.size());
  const double rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  o.check(rate >= 1.0, "smooth a fitted rate " + num(rate) + " >= 1");
  for (const char* name : {"heat_1d", "advection_diffusion_1d", "constant_drift_2d"}) {
    const ScenarioSpec s = scenario(name);
    const auto r = equivalence_check(s, {s.dim == 1 ? std::vector<double>{64, 128, 256}
                                                    : std::vector<double>{16, 32, 64}, 0});
    double worst = 0.0;
    for (std::size_t k = 0; k < r.tables.front().rows.size(); ++k) {
      worst = std::max(worst, column(r.tables.front(), k, "l2_difference"));
    }
    o.check(worst <= 1e-8, std::string(name) + " constant a difference " + num(worst) + " <= 1e-8");
  }
  return o;
}

Outcome sde_law() {
  Outcome o;
  const ScenarioSpec s = scenario("sde_heat_1d");
  o.check(s.dim == 1 && s.n == 128 && s.horizon == 0.5 && s.sde.N == 200000, "d=1 n=128 T=0.5 N=2e5");
  const auto res = sde_compare(s);
  const Table& t = res.tables.front();
  o.check(column(t, 0, "l1") <= 0.05,
          "L1 " + num(column(t, 0, "l1")) + " <= 0.05 (floor " + num(column(t, 0, "floor")) + ")");
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    o.check(column(t, k, "l1") < column(t, k - 1, "l1"),
            "N=" + t.rows[k][0].dump() + " L1 " + num(column(t, k, "l1")));
  }
  return o;
}

Outcome stability() {
  Outcome o;
  const ScenarioSpec s = scenario("bounded_rough_1d");
  const auto res = stability_study(s);
  const Table& t = res.tables.front();
  o.check(t.rows.size() == 4, "4 halvings");
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    const double now = column(t, k, "linf_l2_difference"), before = column(t, k - 1, "linf_l2_difference");
    o.check(now < before, "difference " + num(now) + " < " + num(before));
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "fplab_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::pair<StudyKind, std::string>> cases{
      {StudyKind::Solve, "smooth_1d"},           {StudyKind::Commutator, "w1p_singular_s1"},
      {StudyKind::Regularity, "w1p_compensated_1d"}, {StudyKind::Stability, "bounded_rough_1d"},
      {StudyKind::EnergyAudit, "divfree_2d"},    {StudyKind::Equivalence, "smooth_1d"},
      {StudyKind::SdeCompare, "sde_smooth_1d"}};
  for (const auto& [kind, name] : cases) {
    StudySpec spec;
    spec.kind = kind;
    spec.scenario = fs::path(FPLAB_SCENARIO_DIR) / (name + ".json");
    spec.out = root;
    if (kind == StudyKind::SdeCompare) spec.ladder.values = {20000, 40000, 80000};
    const auto a = run_study(spec);
    const auto b = run_study(spec);
    o.check(!a.manifest.hash.empty() && a.manifest.hash == b.manifest.hash && a.directory != b.directory,
            std::string(to_string(kind)) + " " + a.manifest.hash.substr(0, 12));
  }
  fs::remove_all(root);
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> table{
      {"null commutators", null_commutators},
      {"diffusion commutator cancellation and limit", diffusion_cancellation},
      {"diffusion commutator norm separation", [] { return separation_suite(false); }},
      {"transport commutator in L2 H-1", [] { return separation_suite(true); }},
      {"solver exactness", solver_exactness},
      {"L^q energy audit on the suite", energy_suite},
      {"parabolic budget", parabolic_suite},
      {"uniform gradient budget under refinement", regularity},
      {"equivalence of the two forms", equivalence},
      {"SDE forward law", sde_law},
      {"mollified-coefficient stability", stability},
      {"determinism of manifest hashes", determinism},
  };
  return table;
}

bool run_one(std::size_t k) {
  const auto& [title, fn] = criteria().at(k - 1);
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o.check(false, std::string("error: ") + e.what());
  }
  std::cout << "ACCEPTANCE " << k << " " << (o.pass ? "PASS" : "FAIL") << " | " << title << " | "
            << o.detail.str() << std::endl;
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string arg = argc > 1 ? argv[1] : "all";
  if (arg == "all") {
    bool ok = true;
    for (std::size_t k = 1; k <= criteria().size(); ++k) ok = run_one(k) && ok;
    return ok ? 0 : 1;
  }
  const auto k = static_cast<std::size_t>(std::stoul(arg));
  if (k < 1 || k > criteria().size()) {
    std::cerr << "criterion must be 1.." << criteria().size() << '\n';
    return 2;
  }
  return run_one(k) ? 0 : 1;
}
