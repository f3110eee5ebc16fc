#include "fplab/linear_solvers.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "fplab/error.hpp"

namespace fplab {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

[[noreturn]] void fail(const char* method, int it, double res, const char* why) {
  std::ostringstream os;
  os << method << " did not converge (" << why << ") after " << it
     << " iterations, relative residual " << res;
  throw Error(ErrorKind::Convergence, os.str());
}

}  // namespace

SolveStats conjugate_gradient(const LinearOperator& A, std::span<const double> diag,
                              std::span<const double> b, std::span<double> x, double tol,
                              int max_iter) {
  const std::size_t n = b.size();
  std::vector<double> r(n), z(n), p(n), Ap(n);
  A(x, Ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
  const double bnorm = norm(b);
  SolveStats st;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return st;
  }
  st.residual = norm(r) / bnorm;
  if (st.residual <= tol) return st;
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iter; ++it) {
    A(p, Ap);
    const double pAp = dot(p, Ap);
    if (!(pAp > 0.0)) fail("conjugate gradient", it, st.residual, "operator not positive definite");
    const double alpha = rz / pAp;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    st.iterations = it;
    st.residual = norm(r) / bnorm;
    if (st.residual <= tol) return st;
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  fail("conjugate gradient", max_iter, st.residual, "iteration limit");
}

SolveStats bicgstab(const LinearOperator& A, std::span<const double> diag,
                    std::span<const double> b, std::span<double> x, double tol, int max_iter) {
  const std::size_t n = b.size();
  std::vector<double> r(n), r0(n), p(n, 0.0), v(n, 0.0), s(n), t(n), ph(n), sh(n);
  A(x, v);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - v[i];
  std::fill(v.begin(), v.end(), 0.0);
  r0 = r;
  const double bnorm = norm(b);
  SolveStats st;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return st;
  }
  st.residual = norm(r) / bnorm;
  if (st.residual <= tol) return st;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  for (int it = 1; it <= max_iter; ++it) {
    const double rho_new = dot(r0, r);
    if (rho_new == 0.0) fail("BiCGSTAB", it, st.residual, "breakdown rho=0");
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    for (std::size_t i = 0; i < n; ++i) ph[i] = p[i] / diag[i];
    A(ph, v);
    const double r0v = dot(r0, v);
    if (r0v == 0.0) fail("BiCGSTAB", it, st.residual, "breakdown <r0,v>=0");
    alpha = rho / r0v;
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    st.iterations = it;
    if (norm(s) / bnorm <= tol) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * ph[i];
      st.residual = norm(s) / bnorm;
      return st;
    }
    for (std::size_t i = 0; i < n; ++i) sh[i] = s[i] / diag[i];
    A(sh, t);
    const double tt = dot(t, t);
    if (tt == 0.0) fail("BiCGSTAB", it, st.residual, "breakdown <t,t>=0");
    omega = dot(t, s) / tt;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * ph[i] + omega * sh[i];
      r[i] = s[i] - omega * t[i];
    }
    st.residual = norm(r) / bnorm;
    if (st.residual <= tol) return st;
    if (omega == 0.0) fail("BiCGSTAB", it, st.residual, "breakdown omega=0");
  }
  fail("BiCGSTAB", max_iter, st.residual, "iteration limit");
}

}  // namespace fplab
