#pragma once

#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "fplab/grid.hpp"

namespace fplab {

enum class CoefficientClass { Smooth, Lipschitz, W1pSingular, BoundedRough, DivFree2d, Constant };

const char* to_string(CoefficientClass c);
CoefficientClass coefficient_class_from_string(const std::string& name);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Drift b and diffusion a on [0, T], piecewise constant over `slices()` equal
/// time intervals. Slice k covers [k T/K, (k+1) T/K).
class CoefficientSet {
 public:
  CoefficientSet() = default;
  CoefficientSet(std::vector<VectorField> b, std::vector<MatrixField> a, double horizon,
                 double alpha, CoefficientClass cls = CoefficientClass::Smooth,
                 double p = kInfinity);
  /// Time-independent convenience constructor.
  CoefficientSet(VectorField b, MatrixField a, double alpha,
                 CoefficientClass cls = CoefficientClass::Smooth, double p = kInfinity);

  const Grid& grid() const { return b_.front().grid(); }
  int slices() const { return static_cast<int>(b_.size()); }
  double horizon() const { return horizon_; }
  double alpha() const { return alpha_; }
  CoefficientClass regularity() const { return class_; }
  double p() const { return p_; }

  const VectorField& b(int slice) const { return b_.at(slice); }
  const MatrixField& a(int slice) const { return a_.at(slice); }
  /// Slice active at time t (clamped to [0, T]).
  int slice_at(double t) const;
  double slice_start(int k) const { return k * horizon_ / slices(); }
  double slice_length() const { return horizon_ / slices(); }

  /// Same coefficients with a different time horizon (slices stretch).
  CoefficientSet with_horizon(double horizon) const;
  CoefficientSet with_alpha(double alpha) const;

 private:
  std::vector<VectorField> b_;
  std::vector<MatrixField> a_;
  double horizon_ = 1.0;
  double alpha_ = 0.0;
  CoefficientClass class_ = CoefficientClass::Smooth;
  double p_ = kInfinity;
};

/// b - 1/2 sum_j d_j a_ij for one slice.
VectorField tilde_b(const VectorField& b, const MatrixField& a);
std::vector<VectorField> tilde_b(const CoefficientSet& c);

/// Smallest eigenvalue of a over all nodes.
double ellipticity_check(const MatrixField& a);
double ellipticity_check(const CoefficientSet& c);

/// Eigenvalues of one symmetric d x d node matrix, ascending.
std::vector<double> node_eigenvalues(const MatrixField& a, std::size_t node);

/// sup over nodes of |sum_j d_j a_ij| for one slice (assumption on the column divergence of a).
double column_divergence_sup(const MatrixField& a);

struct DivergenceBudget {
  std::vector<double> times;   // 0, T/K, ..., T
  std::vector<double> values;  // ||(div b~)^-||_inf at each time
  double integral = 0.0;       // trapezoid rule over `times`
  std::vector<double> slice_values;  // exact per-slice sup norms
  /// Exact integral of the piecewise-constant budget over [0, t].
  double cumulative(double t, double horizon) const;
};

DivergenceBudget negative_divergence_budget(const CoefficientSet& c);

struct CoefficientParams {
  double alpha = 0.5;
  double p = kInfinity;
  double horizon = 1.0;
  int time_slices = 1;
  /// Class-specific numbers (gamma, amplitude, kmax, decay, ...); unknown keys are ignored.
  std::map<std::string, double> values;
  /// w1p_singular drift: "independent" (own cusp) or "compensated" (b = 1/2 div a + smooth).
  std::string drift = "independent";

  double get(const std::string& key, double fallback) const;
};

/// Pure function of (class, grid, params, seed). Random Fourier content is
/// drawn on a fixed mode set, so refining the grid resamples the same
/// continuum field.
CoefficientSet gen_coefficients(CoefficientClass cls, const Grid& grid,
                                const CoefficientParams& params, std::uint64_t seed);

/// Real random Fourier series sum_k A_k cos(2 pi k.x / L + phi_k) over
/// 0 < |k| <= kmax, A_k = |k|^-decay, scaled to RMS 1/sqrt(2).
ScalarField random_fourier_field(const Grid& grid, std::mt19937_64& rng, int kmax, double decay);

/// Regularized periodic cusp (s^2 + eps^2)^(gamma/2), s the smooth periodic
/// distance to x0 with s = (L/pi) sin(pi (x - x0)/L) per axis.
ScalarField periodic_cusp(const Grid& grid, const std::array<double, 3>& x0, double gamma,
                          double eps);

/// Admissible exponent interval (1 - d/p, 1) for |x|^gamma profiles with gradient in L^p.
std::pair<double, double> admissible_gamma(int dim, double p);

}  // namespace fplab
