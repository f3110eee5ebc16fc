#include "fplab/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fplab/spectral.hpp"

namespace fplab {

const char* to_string(CoefficientClass c) {
  switch (c) {
    case CoefficientClass::Smooth: return "smooth";
    case CoefficientClass::Lipschitz: return "lipschitz";
    case CoefficientClass::W1pSingular: return "w1p_singular";
    case CoefficientClass::BoundedRough: return "bounded_rough";
    case CoefficientClass::DivFree2d: return "divfree_2d";
    case CoefficientClass::Constant: return "constant";
  }
  return "unknown";
}

CoefficientClass coefficient_class_from_string(const std::string& name) {
  for (auto c : {CoefficientClass::Smooth, CoefficientClass::Lipschitz,
                 CoefficientClass::W1pSingular, CoefficientClass::BoundedRough,
                 CoefficientClass::DivFree2d, CoefficientClass::Constant}) {
    if (name == to_string(c)) return c;
  }
  throw Error(ErrorKind::InvalidArgument,
              "unknown coefficient class '" + name +
                  "' (expected smooth, lipschitz, w1p_singular, bounded_rough, divfree_2d, constant)");
}

CoefficientSet::CoefficientSet(std::vector<VectorField> b, std::vector<MatrixField> a,
                               double horizon, double alpha, CoefficientClass cls, double p)
    : b_(std::move(b)), a_(std::move(a)), horizon_(horizon), alpha_(alpha), class_(cls), p_(p) {
  if (b_.empty() || b_.size() != a_.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "CoefficientSet: b and a need the same non-zero number of time slices");
  }
  if (!(horizon_ > 0.0)) throw Error(ErrorKind::InvalidArgument, "CoefficientSet: horizon must be > 0");
  if (!(p_ >= 1.0)) throw Error(ErrorKind::InvalidArgument, "CoefficientSet: exponent p must be >= 1");
  const Grid& g = b_.front().grid();
  for (std::size_t k = 0; k < b_.size(); ++k) {
    require_same_grid(g, b_[k].grid(), "CoefficientSet (b)");
    require_same_grid(g, a_[k].grid(), "CoefficientSet (a)");
    if (!b_[k].all_finite() || !a_[k].all_finite()) {
      throw Error(ErrorKind::NonFinite, "CoefficientSet: non-finite coefficient values");
    }
  }
}

CoefficientSet::CoefficientSet(VectorField b, MatrixField a, double alpha, CoefficientClass cls,
                               double p)
    : CoefficientSet(std::vector<VectorField>{std::move(b)}, std::vector<MatrixField>{std::move(a)},
                     1.0, alpha, cls, p) {}

int CoefficientSet::slice_at(double t) const {
  const int k = static_cast<int>(std::floor(t / horizon_ * slices()));
  return std::clamp(k, 0, slices() - 1);
}

CoefficientSet CoefficientSet::with_horizon(double horizon) const {
  return CoefficientSet(b_, a_, horizon, alpha_, class_, p_);
}

CoefficientSet CoefficientSet::with_alpha(double alpha) const {
  return CoefficientSet(b_, a_, horizon_, alpha, class_, p_);
}

VectorField tilde_b(const VectorField& b, const MatrixField& a) {
  require_same_grid(b.grid(), a.grid(), "tilde_b");
  const int d = b.dim();
  std::vector<ScalarField> out;
  for (int i = 0; i < d; ++i) {
    ScalarField col(b.grid());
    for (int j = 0; j < d; ++j) col += partial(a(i, j), j);
    out.push_back(b[i] - 0.5 * col);
  }
  return VectorField(std::move(out));
}

std::vector<VectorField> tilde_b(const CoefficientSet& c) {
  std::vector<VectorField> out;
  for (int k = 0; k < c.slices(); ++k) out.push_back(tilde_b(c.b(k), c.a(k)));
  return out;
}

std::vector<double> node_eigenvalues(const MatrixField& a, std::size_t node) {
  const int d = a.dim();
  if (d == 1) return {a(0, 0)[node]};
  if (d == 2) {
    const double p = a(0, 0)[node], q = a(1, 1)[node], r = a(0, 1)[node];
    const double m = 0.5 * (p + q);
    const double disc = std::hypot(0.5 * (p - q), r);
    return {m - disc, m + disc};
  }
  // Closed-form symmetric 3x3 eigenvalues (trigonometric method).
  const double a00 = a(0, 0)[node], a11 = a(1, 1)[node], a22 = a(2, 2)[node];
  const double a01 = a(0, 1)[node], a02 = a(0, 2)[node], a12 = a(1, 2)[node];
  const double p1 = a01 * a01 + a02 * a02 + a12 * a12;
  if (p1 == 0.0) {
    std::vector<double> e{a00, a11, a22};
    std::sort(e.begin(), e.end());
    return e;
  }
  const double q = (a00 + a11 + a22) / 3.0;
  const double p2 = (a00 - q) * (a00 - q) + (a11 - q) * (a11 - q) + (a22 - q) * (a22 - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const double b00 = (a00 - q) / p, b11 = (a11 - q) / p, b22 = (a22 - q) / p;
  const double b01 = a01 / p, b02 = a02 / p, b12 = a12 / p;
  const double det = b00 * (b11 * b22 - b12 * b12) - b01 * (b01 * b22 - b12 * b02) +
                     b02 * (b01 * b12 - b11 * b02);
  const double r = std::clamp(det / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  std::vector<double> e{e1, e2, e3};
  std::sort(e.begin(), e.end());
  return e;
}

double ellipticity_check(const MatrixField& a) {
  if (!a.all_finite()) throw Error(ErrorKind::NonFinite, "ellipticity_check: non-finite entries");
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < a.grid().size(); ++k) m = std::min(m, node_eigenvalues(a, k).front());
  return m;
}

double ellipticity_check(const CoefficientSet& c) {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k < c.slices(); ++k) m = std::min(m, ellipticity_check(c.a(k)));
  return m;
}

double column_divergence_sup(const MatrixField& a) {
  double m = 0.0;
  const int d = a.dim();
  for (int i = 0; i < d; ++i) {
    ScalarField col(a.grid());
    for (int j = 0; j < d; ++j) col += partial(a(i, j), j);
    m = std::max(m, col.max_abs());
  }
  return m;
}

double DivergenceBudget::cumulative(double t, double horizon) const {
  const int slices = static_cast<int>(slice_values.size());
  const double tau = horizon / slices;
  double s = 0.0;
  for (int k = 0; k < slices; ++k) {
    const double lo = k * tau;
    const double hi = std::min((k + 1) * tau, t);
    if (hi > lo) s += slice_values[k] * (hi - lo);
  }
  return s;
}

DivergenceBudget negative_divergence_budget(const CoefficientSet& c) {
  DivergenceBudget out;
  for (const auto& bt : tilde_b(c)) {
    const ScalarField div = divergence(bt);
    double neg = 0.0;
    for (double v : div.values()) neg = std::max(neg, -v);
    out.slice_values.push_back(neg);
  }
  const int K = c.slices();
  for (int k = 0; k <= K; ++k) {
    out.times.push_back(k * c.slice_length());
    out.values.push_back(out.slice_values[std::min(k, K - 1)]);
  }
  for (int k = 0; k < K; ++k) {
    out.integral += 0.5 * (out.values[k] + out.values[k + 1]) * (out.times[k + 1] - out.times[k]);
  }
  return out;
}

double CoefficientParams::get(const std::string& key, double fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

std::pair<double, double> admissible_gamma(int dim, double p) {
  const double lo = std::isinf(p) ? 1.0 : 1.0 - dim / p;
  return {lo, 1.0};
}

ScalarField random_fourier_field(const Grid& grid, std::mt19937_64& rng, int kmax, double decay) {
  const int d = grid.dim();
  const double k0 = 2.0 * std::numbers::pi / grid.length();
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  struct Term {
    std::array<int, 3> k;
    double amp, phi;
  };
  std::vector<Term> terms;
  double power = 0.0;
  // Fixed enumeration order keeps the draw independent of n.
  std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int a = 0; a < d; ++a) {
    lo[a] = a == 0 ? 0 : -kmax;
    hi[a] = kmax;
  }
  for (int k0i = lo[0]; k0i <= hi[0]; ++k0i) {
    for (int k1 = lo[1]; k1 <= hi[1]; ++k1) {
      for (int k2 = lo[2]; k2 <= hi[2]; ++k2) {
        std::array<int, 3> k{k0i, k1, k2};
        // half space: first nonzero component positive
        bool positive = false;
        for (int a = 0; a < d; ++a) {
          if (k[a] != 0) {
            positive = k[a] > 0;
            break;
          }
        }
        if (!positive) continue;
        const double mag = std::sqrt(double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2]);
        if (mag > kmax) continue;
        const double amp = std::pow(mag, -decay);
        terms.push_back({k, amp, phase(rng)});
        power += 0.5 * amp * amp;
      }
    }
  }
  const double scale = power > 0.0 ? std::sqrt(0.5 / power) : 0.0;
  return ScalarField::sample(grid, [&](const std::array<double, 3>& x) {
    double s = 0.0;
    for (const auto& t : terms) {
      double arg = t.phi;
      for (int a = 0; a < d; ++a) arg += k0 * t.k[a] * x[a];
      s += t.amp * std::cos(arg);
    }
    return scale * s;
  });
}

ScalarField periodic_cusp(const Grid& grid, const std::array<double, 3>& x0, double gamma,
                          double eps) {
  const double L = grid.length();
  const int d = grid.dim();
  return ScalarField::sample(grid, [&](const std::array<double, 3>& x) {
    double s2 = 0.0;
    for (int a = 0; a < d; ++a) {
      const double s = (L / std::numbers::pi) * std::sin(std::numbers::pi * (x[a] - x0[a]) / L);
      s2 += s * s;
    }
    return std::pow(s2 + eps * eps, 0.5 * gamma);
  });
}

namespace {

std::mt19937_64 slice_rng(std::uint64_t seed, int slice, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(slice), static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

/// a = alpha I + S S^T, always symmetric with smallest eigenvalue >= alpha.
MatrixField gram_plus_alpha(const Grid& grid, double alpha, const std::vector<ScalarField>& s) {
  const int d = grid.dim();
  MatrixField a(grid, alpha);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      ScalarField acc = a(i, j);
      for (int k = 0; k < d; ++k) acc += hadamard(s[i * d + k], s[j * d + k]);
      a(i, j) = acc;
    }
  }
  return a;
}

/// Periodic triangle wave in [-1, 1] with kinks at x0 and x0 + L/2.
double triangle(double x, double x0, double L) {
  double t = std::fmod((x - x0) / L, 1.0);
  if (t < 0) t += 1.0;
  return 1.0 - 4.0 * std::abs(t - 0.5);
}

struct Slice {
  VectorField b;
  MatrixField a;
};

Slice smooth_slice(const Grid& g, const CoefficientParams& prm, std::mt19937_64& rng) {
  const int d = g.dim();
  const int kmax = static_cast<int>(prm.get("kmax", 3));
  const double decay = prm.get("decay", 2.0);
  const double amp_b = prm.get("amp_b", 0.5);
  const double s0 = prm.get("sigma0", 1.0);
  const double amp_s = prm.get("amp_sigma", 0.3);
  std::vector<ScalarField> b;
  for (int i = 0; i < d; ++i) b.push_back(amp_b * random_fourier_field(g, rng, kmax, decay));
  std::vector<ScalarField> s;
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      ScalarField f = (i == k ? 1.0 : 0.3) * amp_s * random_fourier_field(g, rng, kmax, decay);
      if (i == k) f += ScalarField(g, s0);
      s.push_back(std::move(f));
    }
  }
  return {VectorField(std::move(b)), gram_plus_alpha(g, prm.alpha, s)};
}

Slice lipschitz_slice(const Grid& g, const CoefficientParams& prm, std::mt19937_64& rng) {
  const int d = g.dim();
  const double L = g.length();
  const double amp_b = prm.get("amp_b", 0.5);
  const double s0 = prm.get("sigma0", 1.0);
  const double amp_s = prm.get("amp_sigma", 0.3);
  std::uniform_real_distribution<double> shift(0.0, L);
  auto tri_field = [&]() {
    std::array<double, 3> x0{shift(rng), shift(rng), shift(rng)};
    return ScalarField::sample(g, [&](const std::array<double, 3>& x) {
      double s = 0.0;
      for (int a = 0; a < d; ++a) s += triangle(x[a], x0[a], L);
      return s / d;
    });
  };
  std::vector<ScalarField> b;
  for (int i = 0; i < d; ++i) b.push_back(amp_b * tri_field());
  std::vector<ScalarField> s;
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      ScalarField f = (i == k ? 1.0 : 0.3) * amp_s * tri_field();
      if (i == k) f += ScalarField(g, s0);
      s.push_back(std::move(f));
    }
  }
  return {VectorField(std::move(b)), gram_plus_alpha(g, prm.alpha, s)};
}

Slice w1p_slice(const Grid& g, const CoefficientParams& prm, std::uint64_t seed, int slice) {
  const int d = g.dim();
  const double L = g.length();
  const double gamma = prm.get("gamma", 0.9);
  const auto [lo, hi] = admissible_gamma(d, prm.p);
  if (!(gamma > lo && gamma < hi)) {
    std::ostringstream os;
    os << "w1p_singular: gamma=" << gamma << " outside the admissible interval (" << lo << ", "
       << hi << ") for d=" << d << ", p=" << prm.p;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  const double gamma_b = prm.get("gamma_b", 0.8);
  const double amp = prm.get("amplitude", 0.8);
  const double base = prm.get("base", 1.0);
  const double wiggle = prm.get("wiggle", 0.2);
  const double eps = 0.5 * g.spacing();
  const double shift = static_cast<double>(seed % 1000) + slice;
  std::array<double, 3> xa{}, xb{};
  for (int a = 0; a < d; ++a) {
    xa[a] = std::fmod(2.0 + shift + 0.7 * a, L);
    xb[a] = std::fmod(4.0 + 0.7 * a, L);
  }
  const double k0 = 2.0 * std::numbers::pi / L;
  ScalarField phi = ScalarField::sample(g, [&](const std::array<double, 3>& x) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) s += std::sin(k0 * x[a] + shift);
    return base + wiggle * s / d;
  });
  phi += amp * periodic_cusp(g, xa, gamma, eps);
  MatrixField a(g);
  for (int i = 0; i < d; ++i) a(i, i) = phi;

  std::vector<ScalarField> b;
  if (prm.drift == "compensated") {
    const double amp0 = prm.get("amp_b", 0.5);
    for (int i = 0; i < d; ++i) {
      ScalarField b0 = ScalarField::sample(
          g, [&](const std::array<double, 3>& x) { return amp0 * std::sin(k0 * x[i]); });
      b.push_back(b0 + 0.5 * partial(phi, i));
    }
  } else if (prm.drift == "independent") {
    const ScalarField cb = periodic_cusp(g, xb, gamma_b, eps);
    for (int i = 0; i < d; ++i) {
      ScalarField bi = ScalarField::sample(
          g, [&](const std::array<double, 3>& x) { return 0.5 * std::cos(k0 * x[i]); });
      b.push_back(bi + cb);
    }
  } else {
    throw Error(ErrorKind::InvalidArgument,
                "w1p_singular: drift must be 'independent' or 'compensated', got '" + prm.drift + "'");
  }
  return {VectorField(std::move(b)), a};
}

Slice rough_slice(const Grid& g, const CoefficientParams& prm, std::mt19937_64& rng) {
  const int d = g.dim();
  const int kmax = static_cast<int>(prm.get("kmax", d == 1 ? 48 : 12));
  const double decay = prm.get("decay", 1.0);
  const double amp_b = prm.get("amp_b", 0.5);
  const double s0 = prm.get("sigma0", 0.7);
  const double amp_s = prm.get("amp_sigma", 0.25);
  std::vector<ScalarField> b;
  for (int i = 0; i < d; ++i) b.push_back(amp_b * random_fourier_field(g, rng, kmax, decay));
  std::vector<ScalarField> s;
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      ScalarField f = (i == k ? 1.0 : 0.2) * amp_s * random_fourier_field(g, rng, kmax, decay);
      if (i == k) f += ScalarField(g, s0);
      s.push_back(std::move(f));
    }
  }
  return {VectorField(std::move(b)), gram_plus_alpha(g, prm.alpha, s)};
}

Slice divfree_slice(const Grid& g, const CoefficientParams& prm, std::mt19937_64& rng) {
  if (g.dim() != 2) {
    throw Error(ErrorKind::InvalidArgument,
                "divfree_2d: requires d=2, got d=" + std::to_string(g.dim()));
  }
  const int kmax = static_cast<int>(prm.get("kmax", 3));
  const double amp = prm.get("amp_b", 1.0);
  const ScalarField psi = amp * random_fourier_field(g, rng, kmax, prm.get("decay", 2.0));
  std::vector<ScalarField> b{partial(psi, 1), -1.0 * partial(psi, 0)};
  return {VectorField(std::move(b)), MatrixField(g, prm.alpha + prm.get("a_extra", 0.5))};
}

Slice constant_slice(const Grid& g, const CoefficientParams& prm) {
  const int d = g.dim();
  std::vector<ScalarField> b;
  for (int i = 0; i < d; ++i) b.emplace_back(g, prm.get("b" + std::to_string(i), 0.0));
  MatrixField a(g, prm.get("a_diag", std::max(prm.alpha, 1.0)));
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      a(i, j) = ScalarField(g, prm.get("a" + std::to_string(i) + std::to_string(j), 0.0));
    }
  }
  return {VectorField(std::move(b)), a};
}

}  // namespace

CoefficientSet gen_coefficients(CoefficientClass cls, const Grid& grid,
                                const CoefficientParams& params, std::uint64_t seed) {
  if (params.time_slices < 1) {
    throw Error(ErrorKind::InvalidArgument, "gen_coefficients: time_slices must be >= 1");
  }
  if (!(params.alpha > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "gen_coefficients: alpha must be > 0");
  }
  std::vector<VectorField> bs;
  std::vector<MatrixField> as;
  for (int k = 0; k < params.time_slices; ++k) {
    auto rng = slice_rng(seed, k, static_cast<std::uint64_t>(cls));
    Slice s;
    switch (cls) {
      case CoefficientClass::Smooth: s = smooth_slice(grid, params, rng); break;
      case CoefficientClass::Lipschitz: s = lipschitz_slice(grid, params, rng); break;
      case CoefficientClass::W1pSingular: s = w1p_slice(grid, params, seed, k); break;
      case CoefficientClass::BoundedRough: s = rough_slice(grid, params, rng); break;
      case CoefficientClass::DivFree2d: s = divfree_slice(grid, params, rng); break;
      case CoefficientClass::Constant: s = constant_slice(grid, params); break;
    }
    bs.push_back(std::move(s.b));
    as.push_back(std::move(s.a));
  }
  return CoefficientSet(std::move(bs), std::move(as), params.horizon, params.alpha, cls, params.p);
}

}  // namespace fplab
