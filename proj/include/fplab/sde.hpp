#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fplab/coefficients.hpp"
#include "fplab/solver.hpp"

namespace fplab {

/// Dense d x d matrix, row-major, d <= 3.
struct NodeMatrix {
  int dim = 1;
  std::array<double, 9> m{};
  double operator()(int i, int j) const { return m[i * 3 + j]; }
  double& operator()(int i, int j) { return m[i * 3 + j]; }
};

NodeMatrix node_matrix(const MatrixField& a, std::size_t node);

/// Lower-triangular Cholesky factor with sigma sigma^T = a.
/// Throws Error{Precondition} naming `node` and the offending pivot when a is not positive definite.
NodeMatrix sigma_from_a(const NodeMatrix& a, std::size_t node = 0);

struct SdeConfig {
  std::size_t N = 100000;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  int bins = 0;                  // per axis; 0 means the grid n
  std::size_t batch_size = 8192; // particles per generator stream
};

class ParticleEnsemble {
 public:
  ParticleEnsemble(const Grid& grid, std::size_t count, std::uint64_t seed);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return count_; }
  int dim() const { return grid_.dim(); }
  std::uint64_t seed() const { return seed_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  double position(std::size_t i, int axis) const { return x_[i * grid_.dim() + axis]; }
  double& position(std::size_t i, int axis) { return x_[i * grid_.dim() + axis]; }
  const std::vector<double>& positions() const { return x_; }

  double mean(int axis) const;
  /// Variance about the circular-unwrapped mean; only meaningful when the cloud
  /// stays well inside the box.
  double variance(int axis) const;

  std::vector<std::string> warnings;

 private:
  Grid grid_;
  std::size_t count_;
  std::uint64_t seed_;
  double time_ = 0.0;
  std::vector<double> x_;
};

/// Law(X_0) = u0 dx: inverse CDF of the piecewise-linear density for d = 1,
/// rejection against the grid maximum for d >= 2.
ParticleEnsemble sample_initial(const ScalarField& u0, std::size_t N, std::uint64_t seed);

/// Euler-Maruyama X += b dt + sigma sqrt(dt) xi with b, a multilinearly
/// interpolated from the grid. Runs on [0, tg.horizon()] with step cfg.dt.
ParticleEnsemble simulate(const CoefficientSet& c, ParticleEnsemble ens, const TimeGrid& tg,
                          const SdeConfig& cfg);

/// Multilinear interpolation of a periodic grid field at x.
double interpolate(const ScalarField& f, const std::array<double, 3>& x);

/// Bin counts / (N * bin volume) on node-centered bins.
ScalarField histogram_density(const ParticleEnsemble& ens, int bins = 0);

struct LawComparison {
  double l1 = 0.0;
  double floor = 0.0;  // sqrt(total bins / N)
  int bins = 0;
  std::size_t N = 0;
};

LawComparison law_compare(const Solution& sol, const ParticleEnsemble& ens, int bins = 0);
LawComparison law_compare(const ScalarField& density, const ParticleEnsemble& ens, int bins = 0);

}  // namespace fplab
