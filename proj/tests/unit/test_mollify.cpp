#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fplab/coefficients.hpp"
#include "fplab/mollify.hpp"
#include "fplab/norms.hpp"
#include "fplab/spectral.hpp"

using namespace fplab;

namespace {
constexpr double kTwoPi = 2 * std::numbers::pi;
}

TEST_CASE("kernel mass is one") {
  for (int d : {1, 2, 3}) {
    const Grid g = make_grid(d, d == 3 ? 32 : 128, kTwoPi);
    for (auto fam : {KernelFamily::Bump, KernelFamily::GaussianTruncated}) {
      for (double cells : {2.0, 3.0, d == 3 ? 3.0 : 8.0}) {
        const Mollifier m = make_mollifier(fam, cells * g.spacing(), g);
        long double mass = 0.0L, s = 0.0L;
        for (double v : m.kernel().data()) mass += v;
        for (const auto& e : m.stencil()) s += e.weight;
        CHECK(std::abs(static_cast<double>(mass) * g.cell_volume() - 1.0) <= 1e-14);
        CHECK(std::abs(static_cast<double>(s) - 1.0) <= 1e-14);
      }
    }
  }
}

TEST_CASE("bump support scales with delta") {
  const Grid g = make_grid(1, 256, kTwoPi);
  const double h = g.spacing();
  const Mollifier wide = make_mollifier(KernelFamily::Bump, 16 * h, g);
  const Mollifier narrow = make_mollifier(KernelFamily::Bump, 8 * h, g);
  CHECK(wide.support_radius_cells() == 2 * narrow.support_radius_cells());
  for (const auto& e : wide.stencil()) CHECK(std::abs(e.offset[0]) * h < 16 * h);
}

TEST_CASE("under-resolved kernels are rejected") {
  const Grid g = make_grid(1, 64, kTwoPi);
  try {
    make_mollifier(KernelFamily::Bump, g.spacing(), g);
    FAIL("expected precondition error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("kernel is even") {
  const Grid g = make_grid(2, 64, kTwoPi);
  const Mollifier m = make_mollifier(KernelFamily::Bump, 5 * g.spacing(), g);
  const auto& k = m.kernel();
  for (std::size_t x = 0; x < g.size(); ++x) {
    auto idx = g.index(x);
    const std::size_t mirror = g.flat({-idx[0], -idx[1], 0});
    CHECK(k[x] == k[mirror]);
  }
}

TEST_CASE("constants and means are preserved") {
  const Grid g = make_grid(2, 32, kTwoPi);
  const Mollifier m = make_mollifier(KernelFamily::GaussianTruncated, 0.4, g);
  const ScalarField c = mollify(ScalarField(g, 2.5), m);
  CHECK(std::abs(c.max() - 2.5) <= 1e-13);
  CHECK(std::abs(c.min() - 2.5) <= 1e-13);
  std::mt19937_64 rng(5);
  const ScalarField f = random_fourier_field(g, rng, 8, 0.5) + ScalarField(g, 0.7);
  CHECK(std::abs(mollify(f, m).mean() - f.mean()) <= 1e-13 * f.max_abs());
}

TEST_CASE("gaussian kernel damps sin x by exp(-delta^2/2)") {
  const Grid g = make_grid(1, 256, kTwoPi);
  const auto f = ScalarField::sample(g, [](const auto& x) { return std::sin(x[0]); });
  const ScalarField out = mollify(f, make_mollifier(KernelFamily::GaussianTruncated, 0.1, g));
  const double amp = inner(out, f) / inner(f, f);
  CHECK(std::abs(amp - std::exp(-0.005)) <= 1e-3);
}

TEST_CASE("mollification converges monotonically for H1 data") {
  const Grid g = make_grid(1, 512, kTwoPi);
  const auto f = ScalarField::sample(g, [](const auto& x) { return std::abs(std::sin(x[0])); });
  double prev = kInfinity;
  for (double d : {0.2, 0.1, 0.05}) {
    const double e = lp_norm(mollify(f, make_mollifier(KernelFamily::Bump, d, g)) - f, 2.0);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("mollification commutes with derivatives") {
  const Grid g = make_grid(2, 64, kTwoPi);
  std::mt19937_64 rng(11);
  const ScalarField f = random_fourier_field(g, rng, 6, 1.0);
  const Mollifier m = make_mollifier(KernelFamily::Bump, 0.3, g);
  const ScalarField a = partial(mollify(f, m), 1), b = mollify(partial(f, 1), m);
  CHECK(lp_norm(a - b, kInfinity) <= 1e-10 * lp_norm(b, kInfinity));
}

TEST_CASE("odd functions stay odd") {
  const Grid g = make_grid(1, 128, kTwoPi);
  const auto f = ScalarField::sample(g, [](const auto& x) { return std::sin(x[0]) + 0.3 * std::sin(3 * x[0]); });
  const ScalarField out = mollify(f, make_mollifier(KernelFamily::Bump, 0.3, g));
  for (int k = 1; k < g.n(); ++k) {
    CHECK(std::abs(out[static_cast<std::size_t>(k)] + out[static_cast<std::size_t>(g.n() - k)]) <= 1e-12);
  }
}

TEST_CASE("Young contraction") {
  const Grid g = make_grid(2, 64, kTwoPi);
  std::mt19937_64 rng(17);
  const ScalarField f = random_fourier_field(g, rng, 20, 0.3);
  const Mollifier m = make_mollifier(KernelFamily::Bump, 0.2, g);
  const ScalarField out = mollify(f, m);
  for (double p : {1.0, 2.0, 4.0, kInfinity}) {
    CHECK(lp_norm(out, p) <= lp_norm(f, p) * (1 + 1e-10));
  }
}

TEST_CASE("vector and matrix mollification act componentwise") {
  const Grid g = make_grid(2, 32, kTwoPi);
  const auto c = gen_coefficients(CoefficientClass::BoundedRough, g, {}, 2);
  const Mollifier m = make_mollifier(KernelFamily::Bump, 0.5, g);
  const MatrixField a = mollify(c.a(0), m);
  CHECK(a(0, 1) == mollify(c.a(0)(0, 1), m));
  CHECK(mollify(c.b(0), m)[1] == mollify(c.b(0)[1], m));
  CHECK(ellipticity_check(a) >= c.alpha() * (1 - 1e-12));
}
