#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fplab/coefficients.hpp"
#include "fplab/norms.hpp"

using namespace fplab;

namespace {
constexpr double kTwoPi = 2 * std::numbers::pi;

ScalarField sine(const Grid& g, double k) {
  return ScalarField::sample(g, [=](const auto& x) { return std::sin(k * x[0]); });
}
}  // namespace

TEST_CASE("lp norms of simple fields") {
  const Grid g = make_grid(1, 256, kTwoPi);
  CHECK(lp_norm(ScalarField(g, 1.0), 2.0) == doctest::Approx(std::sqrt(kTwoPi)).epsilon(1e-14));
  CHECK(lp_norm(sine(g, 1.0), 2.0) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
  CHECK(std::abs(lp_norm(sine(g, 1.0), kInfinity) - 1.0) <= 1e-4);
  CHECK_THROWS_AS(lp_norm(ScalarField(g, 1.0), 0.5), Error);
}

TEST_CASE("sobolev norms") {
  const Grid g = make_grid(1, 256, kTwoPi);
  CHECK(h_minus1_norm(sine(g, 1.0)) == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-12));
  CHECK(h_minus1_norm(ScalarField(g, -3.0)) == doctest::Approx(3 * std::sqrt(kTwoPi)).epsilon(1e-12));
  const ScalarField hf = sine(g, 64.0);
  CHECK(std::abs(h_minus1_norm(hf) - lp_norm(hf, 2.0) / 64) <= 0.02 * lp_norm(hf, 2.0) / 64);
  CHECK(h1_norm(sine(g, 1.0)) == doctest::Approx(std::sqrt(2 * std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("Parseval, interlacing and duality on random fields") {
  for (int d : {1, 2, 3}) {
    const Grid g = make_grid(d, d == 3 ? 16 : 64, kTwoPi);
    std::mt19937_64 rng(d);
    for (int trial = 0; trial < 3; ++trial) {
      const ScalarField f = random_fourier_field(g, rng, 6, 0.5);
      const ScalarField phi = random_fourier_field(g, rng, 6, 0.5);
      const double l2 = lp_norm(f, 2.0);
      CHECK(std::abs(l2 - spectral_l2_norm(f)) <= 1e-10 * l2);
      CHECK(h_minus1_norm(f) <= l2 * (1 + 1e-12));
      CHECK(l2 <= h1_norm(f) * (1 + 1e-12));
      CHECK(std::abs(inner(f, phi)) <= h_minus1_norm(f) * h1_norm(phi) * (1 + 1e-10));
    }
  }
}

TEST_CASE("Hölder inequality") {
  const Grid g = make_grid(2, 64, kTwoPi);
  std::mt19937_64 rng(9);
  const ScalarField f = random_fourier_field(g, rng, 8, 0.5);
  const ScalarField h = random_fourier_field(g, rng, 8, 0.5);
  for (auto [p, q] : {std::pair{2.0, 2.0}, {4.0, 4.0 / 3}, {1.0, kInfinity}, {3.0, 1.5}}) {
    CHECK(std::abs(inner(f, h)) <= lp_norm(f, p) * lp_norm(h, q) * (1 + 1e-10));
  }
}

TEST_CASE("gradient energy") {
  const Grid g = make_grid(1, 128, kTwoPi);
  CHECK(gradient_l2_squared(sine(g, 2.0)) == doctest::Approx(4 * std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("bochner norms") {
  const Grid g = make_grid(1, 64, kTwoPi);
  const ScalarField one(g, 1.0);
  const double c = lp_norm(one, 2.0);
  NormDescriptor l2;
  l2.time_r = 2.0;
  const std::vector<ScalarField> flat(5, one);
  const std::vector<double> times{0.0, 0.25, 0.5, 0.75, 1.0};
  CHECK(bochner_norm(flat, times, l2) == doctest::Approx(c).epsilon(1e-14));
  std::vector<ScalarField> ramp;
  for (int k = 0; k < 5; ++k) ramp.push_back(static_cast<double>(k) * one);
  NormDescriptor sup = l2;
  sup.time_r = kInfinity;
  CHECK(bochner_norm(ramp, times, sup) == doctest::Approx(4 * c));
  for (double r : {1.0, 2.0, 3.0, kInfinity}) {
    NormDescriptor dsc;
    dsc.time_r = r;
    CHECK(bochner_norm({one}, {0.0}, dsc) == doctest::Approx(c));
  }
  CHECK(bochner_norm_piecewise(flat, 0.2, l2) == doctest::Approx(c));
  NormDescriptor bad;
  bad.time_r = 0.5;
  CHECK_THROWS_AS(bochner_norm(flat, times, bad), Error);
}

TEST_CASE("rate fits") {
  const std::vector<double> x{0.2, 0.1, 0.05, 0.025};
  std::vector<double> quad, flat(4, 3.0), zero(4, 0.0);
  for (double v : x) quad.push_back(7.0 * v * v);
  CHECK(std::abs(rate_fit(x, quad).rate - 2.0) <= 1e-10);
  CHECK(std::abs(rate_fit(x, flat).rate) <= 1e-12);
  const RateFit z = rate_fit(x, zero);
  CHECK(z.infinite);
  CHECK(std::isinf(z.rate));
  CHECK_THROWS_AS(rate_fit({0.2, 0.1}, {1.0, 0.5}), Error);
}

TEST_CASE("norm report keeps decreasing abscissae") {
  NormReport rep(NormDescriptor{}, "demo");
  rep.add(0.2, 4.0);
  rep.add(0.1, 2.0);
  rep.add(0.05, 1.0);
  CHECK(rep.monotone_decreasing());
  CHECK(rep.final_over_initial() == doctest::Approx(0.25));
  CHECK_THROWS_AS(rep.add(0.1, 1.0), Error);
  CHECK_THROWS_AS(rep.add(0.01, -1.0), Error);
  CHECK(std::abs(rate_fit(rep).rate - 1.0) <= 1e-12);
}
