#pragma once

#include <string>
#include <vector>

#include "fplab/grid.hpp"

namespace fplab {

/// (sum |f|^p h^d)^(1/p); p = infinity gives the grid maximum.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& v, double p);

/// Spectral Sobolev norm with multiplier (1+|xi|^2)^(s/2), Parseval-normalized
/// so s = 0 reproduces lp_norm(f, 2).
double sobolev_norm(const ScalarField& f, int s);
inline double h_minus1_norm(const ScalarField& f) { return sobolev_norm(f, -1); }
inline double h1_norm(const ScalarField& f) { return sobolev_norm(f, 1); }
inline double spectral_l2_norm(const ScalarField& f) { return sobolev_norm(f, 0); }
/// ||grad f||_2^2 computed spectrally.
double gradient_l2_squared(const ScalarField& f);

struct NormDescriptor {
  double space_p = 2.0;
  double time_r = 2.0;
  int sobolev = 0;  // -1, 0 or 1; nonzero orders ignore space_p

  std::string name() const;
};

double spatial_norm(const ScalarField& f, const NormDescriptor& desc);

/// Trapezoid in time of per-slice norm^r at the given sample times, then ^(1/r);
/// r = infinity takes the max. A single slice returns its spatial norm.
double bochner_norm(const std::vector<ScalarField>& slices, const std::vector<double>& times,
                    const NormDescriptor& desc);
/// Exact Bochner norm of a field piecewise constant on equal intervals of length tau.
double bochner_norm_piecewise(const std::vector<ScalarField>& slices, double tau,
                              const NormDescriptor& desc);

class NormReport {
 public:
  NormReport() = default;
  NormReport(NormDescriptor desc, std::string label) : desc_(desc), label_(std::move(label)) {}

  /// Abscissae must strictly decrease; values must be finite and >= 0.
  void add(double abscissa, double value);

  const NormDescriptor& descriptor() const { return desc_; }
  const std::string& label() const { return label_; }
  const std::vector<double>& abscissae() const { return x_; }
  const std::vector<double>& values() const { return y_; }
  std::size_t size() const { return x_.size(); }

  /// True when every successive value is strictly smaller.
  bool monotone_decreasing() const;
  double final_over_initial() const;

 private:
  NormDescriptor desc_;
  std::string label_;
  std::vector<double> x_, y_;
};

struct RateFit {
  double rate = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  bool infinite = false;  // values at machine zero: no fit, rate reported as +inf
};

RateFit rate_fit(const NormReport& report, double zero_floor = 1e-14);
RateFit rate_fit(const std::vector<double>& x, const std::vector<double>& y, double zero_floor = 1e-14);

}  // namespace fplab
