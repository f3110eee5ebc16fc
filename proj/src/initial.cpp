#include "fplab/initial.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "fplab/coefficients.hpp"
#include "fplab/spectral.hpp"

namespace fplab {

double InitialParams::get(const std::string& key, double fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

ScalarField power_law_field(const Grid& grid, double beta, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const int d = grid.dim();
  const double k0 = 2.0 * std::numbers::pi / grid.length();
  Spectrum spec(spectrum_size(grid));
  for_each_mode(grid, [&](const Mode& m) {
    const double phi = phase(rng);
    bool skip = false;
    double mag = 0.0;
    for (int a = 0; a < d; ++a) {
      skip = skip || m.nyquist[a];
      mag += (m.xi[a] / k0) * (m.xi[a] / k0);
    }
    // the self-conjugate plane of the half spectrum is left empty in d >= 2
    if (d >= 2 && m.weight == 1.0) skip = true;
    if (skip || mag == 0.0) return;
    spec[m.flat] = std::polar(std::pow(std::sqrt(mag), -beta), phi);
  });
  ScalarField w = inverse_fft(grid, std::move(spec));
  const double m = w.max_abs();
  if (m > 0.0) w *= 1.0 / m;
  return w;
}

ScalarField gaussian_density(const Grid& grid, const std::array<double, 3>& center, double width) {
  const double L = grid.length();
  const int d = grid.dim();
  ScalarField g = ScalarField::sample(grid, [&](const std::array<double, 3>& x) {
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) {
      double dx = std::remainder(x[a] - center[a], L);
      r2 += dx * dx;
    }
    return std::exp(-0.5 * r2 / (width * width));
  });
  g *= 1.0 / (g.sum() * grid.cell_volume());
  return g;
}

ScalarField make_initial(const Grid& grid, const InitialParams& p, std::uint64_t seed) {
  const int d = grid.dim();
  const double L = grid.length();
  const double k0 = 2.0 * std::numbers::pi / L;
  std::array<double, 3> center{};
  for (int a = 0; a < d; ++a) center[a] = p.get("center" + std::to_string(a), p.get("center", L / 2));

  if (p.kind == "zero") return ScalarField(grid, 0.0);
  if (p.kind == "uniform") return ScalarField(grid, 1.0 / std::pow(L, d));
  if (p.kind == "sine") {
    const double k = p.get("k", 1.0);
    const double amp = p.get("amplitude", 1.0);
    const double offset = p.get("offset", 0.0);
    const int axis = static_cast<int>(p.get("axis", 0));
    if (axis < 0 || axis >= d) throw Error(ErrorKind::InvalidArgument, "initial sine: axis out of range");
    return ScalarField::sample(grid, [&](const std::array<double, 3>& x) {
      return offset + amp * std::sin(k * k0 * x[axis]);
    });
  }
  if (p.kind == "gaussian") {
    const double width = p.get("width", 0.3);
    if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "initial gaussian: width must be > 0");
    return gaussian_density(grid, center, width);
  }
  if (p.kind == "bump") {
    const double radius = p.get("radius", 1.0);
    if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "initial bump: radius must be > 0");
    ScalarField f = ScalarField::sample(grid, [&](const std::array<double, 3>& x) {
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double dx = std::remainder(x[a] - center[a], L) / radius;
        r2 += dx * dx;
      }
      return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
    });
    f *= 1.0 / (f.sum() * grid.cell_volume());
    return f;
  }
  if (p.kind == "power_law") {
    ScalarField w = power_law_field(grid, p.get("beta", 1.52), seed);
    return p.get("amplitude", 1.0) * w;
  }
  if (p.kind == "random_fourier") {
    std::mt19937_64 rng(seed);
    ScalarField w = random_fourier_field(grid, rng, static_cast<int>(p.get("kmax", 4)),
                                         p.get("decay", 2.0));
    return p.get("amplitude", 1.0) * w;
  }
  throw Error(ErrorKind::InvalidArgument,
              "unknown initial kind '" + p.kind +
                  "' (expected sine, gaussian, bump, uniform, power_law, random_fourier, zero)");
}

}  // namespace fplab
