#include "fplab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "fplab/linear_solvers.hpp"
#include "fplab/norms.hpp"

namespace fplab {

const char* to_string(EquationForm f) { return f == EquationForm::Fp ? "fp" : "fp_div"; }

const char* to_string(AdvectionScheme s) {
  return s == AdvectionScheme::CenteredFlux ? "centered_flux" : "upwind_flux";
}

EquationForm equation_form_from_string(const std::string& name) {
  if (name == "fp") return EquationForm::Fp;
  if (name == "fp_div") return EquationForm::FpDiv;
  throw Error(ErrorKind::InvalidArgument, "unknown solver form '" + name + "' (expected fp or fp_div)");
}

AdvectionScheme advection_scheme_from_string(const std::string& name) {
  if (name == "centered_flux") return AdvectionScheme::CenteredFlux;
  if (name == "upwind_flux") return AdvectionScheme::UpwindFlux;
  throw Error(ErrorKind::InvalidArgument,
              "unknown advection scheme '" + name + "' (expected centered_flux or upwind_flux)");
}

std::size_t Solution::q_index(double q) const {
  for (std::size_t i = 0; i < q_list.size(); ++i) {
    if (q_list[i] == q) return i;
  }
  std::ostringstream os;
  os << "solution has no recorded L^" << q << " norm";
  throw Error(ErrorKind::Precondition, os.str());
}

namespace {

std::vector<std::vector<std::size_t>> shifted(const Grid& g, int offset) {
  std::vector<std::vector<std::size_t>> out(g.dim(), std::vector<std::size_t>(g.size()));
  for (int a = 0; a < g.dim(); ++a) {
    for (std::size_t x = 0; x < g.size(); ++x) out[a][x] = g.neighbor(x, a, offset);
  }
  return out;
}

}  // namespace

DiffusionOperator::DiffusionOperator(const MatrixField& a, EquationForm form)
    : grid_(a.grid()), form_(form), a_(a), plus_(shifted(a.grid(), 1)), minus_(shifted(a.grid(), -1)) {}

void DiffusionOperator::apply(std::span<const double> u, std::span<double> out) const {
  const int d = grid_.dim();
  const double h = grid_.spacing();
  const double ih2 = 1.0 / (h * h);
  const std::size_t N = grid_.size();
  for (std::size_t x = 0; x < N; ++x) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      const auto& aii = a_(i, i);
      const std::size_t xp = plus_[i][x], xm = minus_[i][x];
      if (form_ == EquationForm::FpDiv) {
        const double ap = 0.5 * (aii[x] + aii[xp]);
        const double am = 0.5 * (aii[x] + aii[xm]);
        s += (ap * (u[xp] - u[x]) - am * (u[x] - u[xm])) * ih2;
      } else {
        s += (aii[xp] * u[xp] - 2.0 * aii[x] * u[x] + aii[xm] * u[xm]) * ih2;
      }
      for (int j = 0; j < d; ++j) {
        if (j == i) continue;
        const auto& aij = a_(i, j);
        const std::size_t pp = plus_[j][xp], pm = minus_[j][xp];
        const std::size_t mp = plus_[j][xm], mm = minus_[j][xm];
        if (form_ == EquationForm::FpDiv) {
          s += 0.25 * ih2 * (aij[xp] * (u[pp] - u[pm]) - aij[xm] * (u[mp] - u[mm]));
        } else {
          s += 0.25 * ih2 *
               (aij[pp] * u[pp] - aij[pm] * u[pm] - aij[mp] * u[mp] + aij[mm] * u[mm]);
        }
      }
    }
    out[x] = 0.5 * s;
  }
}

std::vector<double> DiffusionOperator::diagonal() const {
  const int d = grid_.dim();
  const double ih2 = 1.0 / (grid_.spacing() * grid_.spacing());
  std::vector<double> diag(grid_.size(), 0.0);
  for (std::size_t x = 0; x < grid_.size(); ++x) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      const auto& aii = a_(i, i);
      if (form_ == EquationForm::FpDiv) {
        s -= (0.5 * (aii[x] + aii[plus_[i][x]]) + 0.5 * (aii[x] + aii[minus_[i][x]])) * ih2;
      } else {
        s -= 2.0 * aii[x] * ih2;
      }
    }
    diag[x] = 0.5 * s;
  }
  return diag;
}

void advection_rhs(const VectorField& v, std::span<const double> u, AdvectionScheme scheme,
                   std::span<double> out) {
  const Grid& g = v.grid();
  const double ih = 1.0 / g.spacing();
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> flux(g.size());
  for (int i = 0; i < g.dim(); ++i) {
    const auto& vi = v[i];
    for (std::size_t x = 0; x < g.size(); ++x) {
      const std::size_t xp = g.neighbor(x, i, 1);
      const double vf = 0.5 * (vi[x] + vi[xp]);
      if (scheme == AdvectionScheme::CenteredFlux) {
        flux[x] = vf * 0.5 * (u[x] + u[xp]);
      } else {
        flux[x] = std::max(vf, 0.0) * u[x] + std::min(vf, 0.0) * u[xp];
      }
    }
    for (std::size_t x = 0; x < g.size(); ++x) {
      out[x] -= (flux[x] - flux[g.neighbor(x, i, -1)]) * ih;
    }
  }
}

double cfl_limit(const std::vector<VectorField>& velocity) {
  double vmax = 0.0;
  for (const auto& v : velocity) {
    for (int i = 0; i < v.dim(); ++i) vmax = std::max(vmax, v[i].max_abs());
  }
  const Grid& g = velocity.front().grid();
  if (vmax == 0.0) return std::numeric_limits<double>::infinity();
  return g.spacing() / (2.0 * g.dim() * vmax);
}

namespace {

StepDiagnostics diagnose(const ScalarField& u, double t, const std::vector<double>& q_list) {
  StepDiagnostics s;
  s.t = t;
  s.mass = u.sum() * u.grid().cell_volume();
  for (double q : q_list) s.lq.push_back(lp_norm(u, q));
  s.grad_l2_sq = gradient_l2_squared(u);
  s.min = u.min();
  s.max = u.max();
  return s;
}

Solution run(const CoefficientSet& c, const ScalarField& u0, const TimeGrid& tg,
             const SolverConfig& cfg, EquationForm form) {
  const Grid& g = c.grid();
  require_same_grid(g, u0.grid(), "solve");
  u0.require_finite("solve: initial datum");
  if (!(cfg.tol > 0.0 && cfg.tol <= 1e-6)) {
    throw Error(ErrorKind::InvalidArgument, "solver tolerance must be in (0, 1e-6]");
  }
  if (cfg.snapshot_every < 1) throw Error(ErrorKind::InvalidArgument, "snapshot_every must be >= 1");
  if (!(c.alpha() > 0.0)) {
    throw Error(ErrorKind::Precondition, "solver requires ellipticity constant alpha > 0");
  }
  const double lam = ellipticity_check(c);
  if (lam < c.alpha() * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "ellipticity violated: smallest eigenvalue " << lam << " < alpha=" << c.alpha();
    throw Error(ErrorKind::Precondition, os.str());
  }

  std::vector<VectorField> velocity;
  if (form == EquationForm::FpDiv) {
    velocity = tilde_b(c);
  } else {
    for (int k = 0; k < c.slices(); ++k) velocity.push_back(c.b(k));
  }
  const double dt = tg.dt();
  const double limit = cfl_limit(velocity);
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "CFL violated: dt=" << dt << " exceeds the admissible dt <= " << limit
       << " (h / (2 d max|v|))";
    throw Error(ErrorKind::Precondition, os.str());
  }

  Solution sol;
  sol.grid = g;
  sol.q_list = cfg.q_list;
  if (std::find(sol.q_list.begin(), sol.q_list.end(), 2.0) == sol.q_list.end()) {
    sol.q_list.insert(sol.q_list.begin(), 2.0);
  }
  sol.dt = dt;
  sol.cfl = std::isinf(limit) ? 0.0 : dt / limit;

  std::map<int, std::pair<DiffusionOperator, std::vector<double>>> ops;
  auto op_for = [&](int k) -> std::pair<DiffusionOperator, std::vector<double>>& {
    auto it = ops.find(k);
    if (it == ops.end()) {
      DiffusionOperator D(c.a(k), form);
      std::vector<double> diag = D.diagonal();
      for (double& v : diag) v = 1.0 - dt * v;
      it = ops.emplace(k, std::make_pair(std::move(D), std::move(diag))).first;
    }
    return it->second;
  };

  const std::size_t N = g.size();
  ScalarField u = u0;
  sol.steps.push_back(diagnose(u, 0.0, sol.q_list));
  sol.snapshots.push_back(u);
  sol.snapshot_times.push_back(0.0);

  std::vector<double> rhs(N), adv(N), tmp(N);
  for (int n = 0; n < tg.steps(); ++n) {
    const double t = tg.time(n);
    const double t_next = tg.time(n + 1);
    const int k = c.slice_at((t + 0.5 * dt) * c.horizon() / tg.horizon());
    advection_rhs(velocity[k], u.values(), cfg.advection, adv);
    for (std::size_t x = 0; x < N; ++x) rhs[x] = u[x] + dt * adv[x];
    if (cfg.forcing) {
      const ScalarField f = cfg.forcing(t_next);
      require_same_grid(g, f.grid(), "solver forcing");
      for (std::size_t x = 0; x < N; ++x) rhs[x] += dt * f[x];
    }
    auto& [D, diag] = op_for(k);
    const LinearOperator A = [&, &D = D](std::span<const double> in, std::span<double> out) {
      D.apply(in, tmp);
      for (std::size_t x = 0; x < N; ++x) out[x] = in[x] - dt * tmp[x];
    };
    ScalarField next = u;
    SolveStats st = form == EquationForm::FpDiv
                        ? conjugate_gradient(A, diag, rhs, next.values(), cfg.tol, cfg.max_iter)
                        : bicgstab(A, diag, rhs, next.values(), cfg.tol, cfg.max_iter);
    // restore sum(u) = sum(rhs)
    double drift = 0.0;
    for (std::size_t x = 0; x < N; ++x) drift += rhs[x] - next[x];
    drift /= static_cast<double>(N);
    for (std::size_t x = 0; x < N; ++x) next[x] += drift;
    if (!next.all_finite()) {
      throw Error(ErrorKind::NonFinite, "solver produced non-finite values at step " + std::to_string(n + 1));
    }
    u = std::move(next);
    StepDiagnostics diag_n = diagnose(u, t_next, sol.q_list);
    diag_n.iterations = st.iterations;
    diag_n.residual = st.residual;
    sol.steps.push_back(std::move(diag_n));
    if ((n + 1) % cfg.snapshot_every == 0 || n + 1 == tg.steps()) {
      sol.snapshots.push_back(u);
      sol.snapshot_times.push_back(t_next);
    }
  }
  return sol;
}

}  // namespace

Solution solve_fp_div(const CoefficientSet& c, const ScalarField& u0, const TimeGrid& tg,
                      const SolverConfig& cfg) {
  return run(c, u0, tg, cfg, EquationForm::FpDiv);
}

Solution solve_fp(const CoefficientSet& c, const ScalarField& u0, const TimeGrid& tg,
                  const SolverConfig& cfg) {
  return run(c, u0, tg, cfg, EquationForm::Fp);
}

Solution solve(const CoefficientSet& c, const ScalarField& u0, const TimeGrid& tg,
               const SolverConfig& cfg) {
  return run(c, u0, tg, cfg, cfg.form);
}

}  // namespace fplab
