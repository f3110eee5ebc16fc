#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fplab {

/// y = A x
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;  // ||b - A x|| / ||b||
};

/// Jacobi-preconditioned conjugate gradient for symmetric positive definite A.
/// x holds the initial guess on entry. Throws Error{Convergence} on failure.
SolveStats conjugate_gradient(const LinearOperator& A, std::span<const double> diag,
                              std::span<const double> b, std::span<double> x, double tol,
                              int max_iter);

/// Jacobi-preconditioned BiCGSTAB for general nonsingular A.
SolveStats bicgstab(const LinearOperator& A, std::span<const double> diag,
                    std::span<const double> b, std::span<double> x, double tol, int max_iter);

}  // namespace fplab
