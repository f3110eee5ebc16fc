#pragma once

#include <string>
#include <vector>

#include "fplab/grid.hpp"
#include "fplab/spectral.hpp"

namespace fplab {

enum class KernelFamily { Bump, GaussianTruncated };

const char* to_string(KernelFamily f);
KernelFamily kernel_family_from_string(const std::string& name);

struct StencilEntry {
  std::array<int, 3> offset;
  double weight;  // rho^delta(offset h) h^d, weights sum to 1
};

/// Discrete rho^delta on a grid. The bump family is exp(-1/(1-|z|^2)) on the
/// unit ball; the Gaussian family has standard deviation delta and is cut at 5 delta.
class Mollifier {
 public:
  Mollifier(KernelFamily family, double delta, const Grid& grid);

  KernelFamily family() const { return family_; }
  double delta() const { return delta_; }
  const Grid& grid() const { return grid_; }
  /// Kernel values centered at the origin node (periodic), sum * h^d == 1.
  const ScalarField& kernel() const { return kernel_; }
  /// Fourier multiplier h^d FFT(kernel), real.
  const std::vector<double>& multiplier() const { return multiplier_; }
  const std::vector<StencilEntry>& stencil() const { return stencil_; }
  /// Largest nonzero offset along an axis, plus one, in cells.
  int support_radius_cells() const { return support_cells_; }
  /// Normalization factor applied after sampling.
  double normalization() const { return normalization_; }

 private:
  KernelFamily family_;
  double delta_;
  Grid grid_;
  ScalarField kernel_;
  std::vector<double> multiplier_;
  std::vector<StencilEntry> stencil_;
  int support_cells_ = 0;
  double normalization_ = 1.0;
};

/// Throws Error{Precondition} when delta < 2h.
Mollifier make_mollifier(KernelFamily family, double delta, const Grid& grid);

ScalarField mollify(const ScalarField& f, const Mollifier& m);
VectorField mollify(const VectorField& v, const Mollifier& m);
MatrixField mollify(const MatrixField& a, const Mollifier& m);

}  // namespace fplab
