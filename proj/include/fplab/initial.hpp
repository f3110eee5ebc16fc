#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "fplab/grid.hpp"

namespace fplab {

struct InitialParams {
  /// sine, gaussian, bump, uniform, power_law, random_fourier, zero
  std::string kind = "sine";
  std::map<std::string, double> values;

  double get(const std::string& key, double fallback) const;
};

ScalarField make_initial(const Grid& grid, const InitialParams& params, std::uint64_t seed);

/// Random-phase field with |w_k| = |k|^-beta on every mode below Nyquist,
/// mean zero, scaled to max |w| = 1.
ScalarField power_law_field(const Grid& grid, double beta, std::uint64_t seed);

/// Periodic Gaussian bump of standard deviation `width` (per axis), unit mass.
ScalarField gaussian_density(const Grid& grid, const std::array<double, 3>& center, double width);

}  // namespace fplab
