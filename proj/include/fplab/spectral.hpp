#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "fplab/grid.hpp"

namespace fplab {

using Spectrum = std::vector<std::complex<double>>;

/// Half-complex layout of a real field: axes 0..d-2 full length n, last axis n/2+1.
std::size_t spectrum_size(const Grid& grid);

/// Unnormalized forward transform (FFTW r2c).
Spectrum forward_fft(const ScalarField& f);
/// Inverse transform including the 1/N factor, so inverse(forward(f)) == f.
ScalarField inverse_fft(const Grid& grid, Spectrum spec);

struct Mode {
  std::size_t flat;            // index into the half spectrum
  std::array<double, 3> xi;    // angular wavenumbers 2*pi*k/L
  std::array<bool, 3> nyquist; // |k| == n/2 on that axis
  double weight;               // multiplicity of the mode in the full spectrum (1 or 2)
};

void for_each_mode(const Grid& grid, const std::function<void(const Mode&)>& fn);

/// f -> F^{-1}[m(xi) F f]
ScalarField apply_multiplier(const ScalarField& f,
                             const std::function<std::complex<double>(const Mode&)>& m);

/// Spectral first derivative, Nyquist mode dropped.
ScalarField partial(const ScalarField& f, int axis);
/// Spectral second derivative d_i d_j.
ScalarField partial2(const ScalarField& f, int i, int j);
ScalarField laplacian(const ScalarField& f);

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);

}  // namespace fplab
