#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fplab/coefficients.hpp"
#include "fplab/initial.hpp"
#include "fplab/sde.hpp"

using namespace fplab;

namespace {
constexpr double kTwoPi = 2 * std::numbers::pi;

NodeMatrix mat(int d, std::initializer_list<double> rows) {
  NodeMatrix m;
  m.dim = d;
  auto it = rows.begin();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = *it++;
  }
  return m;
}

CoefficientSet constant_set(const Grid& g, double b, double a) {
  return CoefficientSet(VectorField(g, b), MatrixField(g, a), a, CoefficientClass::Constant);
}
}  // namespace

TEST_CASE("Cholesky factors") {
  CHECK(sigma_from_a(mat(1, {4.0}))(0, 0) == 2.0);
  const NodeMatrix id = sigma_from_a(mat(3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(id(i, j) == (i == j ? 1.0 : 0.0));
  }
  const NodeMatrix s = sigma_from_a(mat(2, {2, 1, 1, 2}));
  CHECK(s(0, 0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(s(0, 1) == 0.0);
  CHECK(s(1, 0) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(s(1, 1) == doctest::Approx(std::sqrt(1.5)));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double v = 0.0;
      for (int k = 0; k < 2; ++k) v += s(i, k) * s(j, k);
      CHECK(std::abs(v - (i == j ? 2.0 : 1.0)) <= 1e-14);
    }
  }
}

TEST_CASE("non positive definite matrices are rejected with the node") {
  try {
    sigma_from_a(mat(2, {1, 2, 2, 1}), 17);
    FAIL("expected precondition error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
    CHECK(std::string(e.what()).find("17") != std::string::npos);
  }
}

TEST_CASE("uniform sampling passes a Kolmogorov-Smirnov check") {
  const Grid g = make_grid(1, 128, kTwoPi);
  const std::size_t N = 50000;
  const ParticleEnsemble ens = sample_initial(ScalarField(g, 1.0 / kTwoPi), N, 11);
  std::vector<double> x(ens.positions());
  std::sort(x.begin(), x.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double F = x[i] / kTwoPi;
    ks = std::max({ks, std::abs(F - double(i) / N), std::abs(F - double(i + 1) / N)});
  }
  CHECK(ks <= 1.63 / std::sqrt(double(N)));
}

TEST_CASE("narrow bump sample mean and determinism") {
  const Grid g = make_grid(1, 512, kTwoPi);
  const double width = 0.2;
  const ScalarField u0 = make_initial(g, {"bump", {{"radius", width}}}, 1);
  const std::size_t N = 40000;
  const ParticleEnsemble a = sample_initial(u0, N, 3), b = sample_initial(u0, N, 3);
  CHECK(a.positions() == b.positions());
  CHECK(std::abs(a.mean(0) - std::numbers::pi) <= 3 * width / std::sqrt(double(N)));
  CHECK_FALSE(a.positions() == sample_initial(u0, N, 4).positions());
}

TEST_CASE("negative mass is rejected") {
  const Grid g = make_grid(1, 64, kTwoPi);
  const auto u0 = ScalarField::sample(g, [](const auto& x) { return 0.2 + std::sin(x[0]); });
  CHECK_THROWS_AS(sample_initial(u0, 100, 1), Error);
}

TEST_CASE("Brownian variance grows at rate a") {
  const Grid g = make_grid(1, 256, kTwoPi);
  const ScalarField u0 = make_initial(g, {"bump", {{"radius", 0.1}}}, 1);
  const std::size_t N = 100000;
  ParticleEnsemble ens = sample_initial(u0, N, 5);
  const double var0 = ens.variance(0);
  const double t = 0.2;
  SdeConfig cfg;
  cfg.dt = 1e-2;
  const ParticleEnsemble out = simulate(constant_set(g, 0.0, 2.0), ens, TimeGrid(t, 20), cfg);
  const double expect = var0 + 2 * t;
  CHECK(std::abs(out.variance(0) - expect) <= 3 * expect * std::sqrt(2.0 / N));
  for (double x : out.positions()) {
    CHECK(x >= 0.0);
    CHECK(x < kTwoPi);
  }
}

TEST_CASE("mean drifts at the constant velocity") {
  const Grid g = make_grid(1, 256, kTwoPi);
  const ScalarField u0 = make_initial(g, {"bump", {{"radius", 0.1}}}, 1);
  const std::size_t N = 50000;
  const ParticleEnsemble ens = sample_initial(u0, N, 8);
  const double t = 0.5, alpha = 0.5, c = 1.5;
  SdeConfig cfg;
  cfg.dt = 5e-3;
  const ParticleEnsemble out = simulate(constant_set(g, c, alpha), ens, TimeGrid(t, 100), cfg);
  const double se = std::sqrt((ens.variance(0) + alpha * t) / N);
  CHECK(std::abs(out.mean(0) - ens.mean(0) - c * t) <= 3 * se);
}

TEST_CASE("simulation is reproducible and refuses degenerate noise") {
  const Grid g = make_grid(1, 64, kTwoPi);
  const ScalarField u0 = make_initial(g, {"gaussian", {{"width", 0.5}}}, 1);
  const ParticleEnsemble ens = sample_initial(u0, 5000, 1);
  SdeConfig cfg;
  cfg.dt = 1e-2;
  cfg.batch_size = 700;
  const auto c = constant_set(g, 0.3, 1.0);
  CHECK(simulate(c, ens, TimeGrid(0.1, 10), cfg).positions() ==
        simulate(c, ens, TimeGrid(0.1, 10), cfg).positions());
  const CoefficientSet degenerate(VectorField(g), MatrixField(g, 0.0), 1.0, CoefficientClass::Constant);
  CHECK_THROWS_AS(simulate(degenerate, ens, TimeGrid(0.1, 10), cfg), Error);
  cfg.dt = 0.5;
  CHECK_THROWS_AS(simulate(c, ens, TimeGrid(0.1, 10), cfg), Error);
}

TEST_CASE("law comparison against its own law") {
  const Grid g = make_grid(1, 128, kTwoPi);
  const ScalarField u0 = make_initial(g, {"gaussian", {{"width", 0.6}}}, 1);
  const std::size_t N = 100000;
  const ParticleEnsemble ens = sample_initial(u0, N, 21);
  const LawComparison cmp = law_compare(u0, ens, 64);
  CHECK(cmp.floor == doctest::Approx(std::sqrt(64.0 / N)));
  CHECK(cmp.l1 <= 2 * cmp.floor);
  const ScalarField hist = histogram_density(ens, 64);
  CHECK(hist.sum() * kTwoPi / 64 == doctest::Approx(1.0));
  CHECK_THROWS_AS(histogram_density(ens, 8), Error);
  CHECK_THROWS_AS(histogram_density(ens, 48), Error);
}

TEST_CASE("interpolation is exact for linear data between nodes") {
  const Grid g = make_grid(1, 16, 16.0);
  const auto f = ScalarField::sample(g, [](const auto& x) { return x[0]; });
  CHECK(interpolate(f, {2.25, 0, 0}) == doctest::Approx(2.25));
  CHECK(interpolate(f, {15.5, 0, 0}) == doctest::Approx(7.5));
}
