#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "fplab/coefficients.hpp"
#include "fplab/initial.hpp"
#include "fplab/norms.hpp"
#include "fplab/solver.hpp"
#include "fplab/spectral.hpp"

using namespace fplab;

namespace {
constexpr double kTwoPi = 2 * std::numbers::pi;

CoefficientSet constant_set(const Grid& g, std::vector<double> b, double a_diag, double a_off = 0.0) {
  VectorField bf(g);
  for (int i = 0; i < g.dim(); ++i) bf[i] = ScalarField(g, b[i]);
  MatrixField a(g, a_diag);
  for (int i = 0; i < g.dim(); ++i) {
    for (int j = i + 1; j < g.dim(); ++j) a(i, j) = ScalarField(g, a_off);
  }
  return CoefficientSet(bf, a, a_diag - std::abs(a_off) * (g.dim() - 1), CoefficientClass::Constant);
}

ScalarField sine(const Grid& g, double k, double shift = 0.0) {
  return ScalarField::sample(g, [=](const auto& x) { return std::sin(k * x[0] + shift); });
}

std::string error_text(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}
}  // namespace

TEST_CASE("heat mode decays like exp(-t) in both forms") {
  const Grid g = make_grid(1, 256, kTwoPi);
  const CoefficientSet c = constant_set(g, {0.0}, 2.0);
  const TimeGrid tg(1.0, 1000);
  const ScalarField exact = std::exp(-1.0) * sine(g, 1.0);
  for (auto form : {EquationForm::FpDiv, EquationForm::Fp}) {
    SolverConfig cfg;
    cfg.form = form;
    const Solution s = solve(c, sine(g, 1.0), tg, cfg);
    CHECK(lp_norm(s.final_state() - exact, kInfinity) <= 1e-3);
    for (std::size_t k = 1; k < s.steps.size(); ++k) CHECK(s.steps[k].lq[0] < s.steps[k - 1].lq[0]);
  }
}

TEST_CASE("advection-diffusion mode") {
  const Grid g = make_grid(1, 256, kTwoPi);
  const CoefficientSet c = constant_set(g, {1.0}, 0.5);
  const Solution s = solve_fp_div(c, sine(g, 2.0), TimeGrid(1.0, 1000), SolverConfig{});
  const ScalarField exact = std::exp(-0.5 * 4 * 0.5) * sine(g, 2.0, -2.0);
  CHECK(lp_norm(s.final_state() - exact, kInfinity) <= 5e-3);
}

TEST_CASE("constant diffusion: the two forms agree") {
  const Grid g = make_grid(2, 32, kTwoPi);
  const CoefficientSet c = constant_set(g, {1.3, -0.4}, 1.7, 0.3);
  const ScalarField u0 = make_initial(g, {"gaussian", {{"width", 0.7}}}, 1);
  SolverConfig cfg;
  cfg.tol = 1e-12;
  const TimeGrid tg(0.2, 50);
  const Solution a = solve_fp_div(c, u0, tg, cfg), b = solve_fp(c, u0, tg, cfg);
  CHECK(lp_norm(a.final_state() - b.final_state(), 2.0) <= 1e-8);
}

TEST_CASE("mass is conserved for variable coefficients") {
  const Grid g = make_grid(2, 32, kTwoPi);
  CoefficientParams prm;
  prm.time_slices = 2;
  const auto c = gen_coefficients(CoefficientClass::Smooth, g, prm, 4);
  const ScalarField u0 = make_initial(g, {"gaussian", {{"width", 0.8}}}, 1);
  const double l1 = lp_norm(u0, 1.0);
  const TimeGrid tg(1.0, 200);
  for (auto form : {EquationForm::FpDiv, EquationForm::Fp}) {
    SolverConfig cfg;
    cfg.form = form;
    const Solution s = solve(c, u0, tg, cfg);
    const double bound = form == EquationForm::FpDiv ? tg.steps() * cfg.tol * l1 : 1e-10 * l1;
    for (const auto& st : s.steps) CHECK(std::abs(st.mass - s.steps[0].mass) <= bound);
  }
}

TEST_CASE("upwind fluxes keep densities non-negative") {
  const Grid g = make_grid(1, 128, kTwoPi);
  CoefficientParams prm;
  prm.values["amplitude"] = 2.0;
  const auto c = gen_coefficients(CoefficientClass::BoundedRough, g, prm, 3);
  const ScalarField u0 = make_initial(g, {"bump", {{"radius", 0.5}}}, 1);
  SolverConfig cfg;
  cfg.advection = AdvectionScheme::UpwindFlux;
  const TimeGrid tg(0.5, 400);
  const Solution s = solve(c, u0, tg, cfg);
  for (const auto& st : s.steps) CHECK(st.min >= std::min(u0.min(), 0.0) - 1e-9);
}

TEST_CASE("CFL violations report the admissible step") {
  const Grid g = make_grid(1, 64, kTwoPi);
  const CoefficientSet c = constant_set(g, {10.0}, 1.0);
  const std::string msg = error_text([&] { solve(c, sine(g, 1.0), TimeGrid(1.0, 10), SolverConfig{}); });
  CHECK(msg.find("CFL violated") != std::string::npos);
  CHECK(msg.find("dt <= 0.0049") != std::string::npos);
}

TEST_CASE("solver configuration errors") {
  const Grid g = make_grid(1, 64, kTwoPi);
  const CoefficientSet c = constant_set(g, {0.0}, 1.0);
  SolverConfig cfg;
  cfg.tol = 1e-3;
  CHECK(error_text([&] { solve(c, sine(g, 1.0), TimeGrid(1.0, 10), cfg); }).find("tolerance") !=
        std::string::npos);
  const CoefficientSet weak(VectorField(g), MatrixField(g, 0.2), 0.5);
  CHECK(error_text([&] { solve(weak, sine(g, 1.0), TimeGrid(1.0, 10), SolverConfig{}); })
            .find("ellipticity violated") != std::string::npos);
  SolverConfig tight;
  tight.tol = 1e-14;
  tight.max_iter = 1;
  try {
    solve(constant_set(g, {0.0}, 50.0), sine(g, 3.0), TimeGrid(1.0, 10), tight);
    FAIL("expected non-convergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Convergence);
    CHECK(std::string(e.what()).find("residual") != std::string::npos);
  }
}

TEST_CASE("forms and schemes round trip") {
  CHECK(equation_form_from_string(to_string(EquationForm::Fp)) == EquationForm::Fp);
  CHECK(advection_scheme_from_string(to_string(AdvectionScheme::UpwindFlux)) == AdvectionScheme::UpwindFlux);
  CHECK_THROWS_AS(equation_form_from_string("weak"), Error);
}

TEST_CASE("manufactured solution converges at second order in space") {
  std::vector<double> hs, errs;
  for (int n : {64, 128, 256}) {
    const Grid g = make_grid(1, n, kTwoPi);
    MatrixField a(g);
    a(0, 0) = ScalarField(g, 1.0) + 0.5 * sine(g, 1.0);
    VectorField b(g);
    b[0] = 0.3 * sine(g, 1.0, std::numbers::pi / 2);
    const CoefficientSet c(b, a, 0.5);
    const ScalarField bt = tilde_b(b, a)[0];
    const ScalarField profile = sine(g, 2.0);
    auto exact = [&](double t) { return ScalarField(g, 1.0) + 0.5 * std::exp(-t) * profile; };
    SolverConfig cfg;
    cfg.tol = 1e-13;
    cfg.forcing = [&](double t) {
      const ScalarField u = exact(t);
      return -0.5 * std::exp(-t) * profile + partial(hadamard(bt, u), 0) -
             0.5 * partial(hadamard(a(0, 0), partial(u, 0)), 0);
    };
    const double h = g.spacing();
    const double T = 0.2;
    const TimeGrid tg(T, static_cast<int>(std::ceil(T / (0.5 * h * h))));
    const Solution s = solve_fp_div(c, exact(0.0), tg, cfg);
    hs.push_back(h);
    errs.push_back(lp_norm(s.final_state() - exact(T), 2.0));
  }
  CHECK(rate_fit(hs, errs).rate >= 1.8);
}
