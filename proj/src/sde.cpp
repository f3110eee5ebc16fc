#include "fplab/sde.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace fplab {

NodeMatrix node_matrix(const MatrixField& a, std::size_t node) {
  NodeMatrix out;
  out.dim = a.dim();
  for (int i = 0; i < out.dim; ++i) {
    for (int j = 0; j < out.dim; ++j) out(i, j) = a(i, j)[node];
  }
  return out;
}

NodeMatrix sigma_from_a(const NodeMatrix& a, std::size_t node) {
  NodeMatrix L;
  L.dim = a.dim;
  for (int j = 0; j < a.dim; ++j) {
    double pivot = a(j, j);
    for (int k = 0; k < j; ++k) pivot -= L(j, k) * L(j, k);
    if (!(pivot > 0.0)) {
      std::ostringstream os;
      os << "sigma_from_a: matrix at node " << node << " is not positive definite (pivot " << j
         << " = " << pivot << ")";
      throw Error(ErrorKind::Precondition, os.str());
    }
    L(j, j) = std::sqrt(pivot);
    for (int i = j + 1; i < a.dim; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      L(i, j) = s / L(j, j);
    }
  }
  return L;
}

ParticleEnsemble::ParticleEnsemble(const Grid& grid, std::size_t count, std::uint64_t seed)
    : grid_(grid), count_(count), seed_(seed), x_(count * grid.dim(), 0.0) {
  if (count == 0) throw Error(ErrorKind::InvalidArgument, "ParticleEnsemble: N must be >= 1");
}

double ParticleEnsemble::mean(int axis) const {
  double s = 0.0;
  for (std::size_t i = 0; i < count_; ++i) s += position(i, axis);
  return s / static_cast<double>(count_);
}

double ParticleEnsemble::variance(int axis) const {
  const double m = mean(axis);
  double s = 0.0;
  for (std::size_t i = 0; i < count_; ++i) {
    const double d = position(i, axis) - m;
    s += d * d;
  }
  return s / static_cast<double>(count_ > 1 ? count_ - 1 : 1);
}

double interpolate(const ScalarField& f, const std::array<double, 3>& x) {
  const Grid& g = f.grid();
  const int d = g.dim();
  const int n = g.n();
  const double h = g.spacing();
  std::array<int, 3> i0{0, 0, 0};
  std::array<double, 3> fr{0, 0, 0};
  for (int a = 0; a < d; ++a) {
    const double s = x[a] / h;
    const double fl = std::floor(s);
    fr[a] = s - fl;
    i0[a] = static_cast<int>(((static_cast<long long>(fl) % n) + n) % n);
  }
  double v = 0.0;
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1.0;
    std::array<int, 3> idx{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      const bool up = (corner >> a) & 1;
      w *= up ? fr[a] : 1.0 - fr[a];
      idx[a] = (i0[a] + (up ? 1 : 0)) % n;
    }
    if (w != 0.0) v += w * f[g.flat(idx)];
  }
  return v;
}

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t batch, std::uint64_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return std::mt19937_64(seq);
}

double wrap(double x, double L) {
  double y = std::fmod(x, L);
  if (y < 0.0) y += L;
  if (y >= L) y -= L;
  return y;
}

}  // namespace

ParticleEnsemble sample_initial(const ScalarField& u0, std::size_t N, std::uint64_t seed) {
  const Grid& g = u0.grid();
  u0.require_finite("sample_initial");
  const double hd = g.cell_volume();
  double pos = 0.0, neg = 0.0;
  for (double v : u0.values()) (v >= 0 ? pos : neg) += std::abs(v) * hd;
  if (pos + neg == 0.0) throw Error(ErrorKind::InvalidArgument, "sample_initial: u0 has zero mass");
  if (neg / (pos + neg) > 1e-6) {
    std::ostringstream os;
    os << "sample_initial: u0 has negative mass fraction " << neg / (pos + neg)
       << " > 1e-6; clip it explicitly";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  ScalarField u = u0;
  for (double& v : u.values()) v = std::max(v, 0.0);
  ParticleEnsemble ens(g, N, seed);
  const double mass = u.sum() * hd;
  if (std::abs(mass - 1.0) > 1e-6) {
    std::ostringstream os;
    os << "initial density had mass " << mass << "; renormalized to 1";
    ens.warnings.push_back(os.str());
  }
  u *= 1.0 / mass;
  auto rng = stream(seed, 0, 1);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double h = g.spacing();
  const int n = g.n();

  if (g.dim() == 1) {
    std::vector<double> cdf(n + 1, 0.0);
    for (int k = 0; k < n; ++k) cdf[k + 1] = cdf[k] + 0.5 * h * (u[k] + u[(k + 1) % n]);
    const double total = cdf[n];
    for (std::size_t i = 0; i < N; ++i) {
      const double target = U(rng) * total;
      int k = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), target) - cdf.begin()) - 1;
      k = std::clamp(k, 0, n - 1);
      const double m = target - cdf[k];
      const double f0 = u[k], f1 = u[(k + 1) % n];
      const double slope = (f1 - f0) / h;
      double s;
      if (std::abs(slope) * h < 1e-12 * std::max(f0, 1e-300)) {
        s = f0 > 0 ? m / f0 : 0.0;
      } else {
        // 0.5 slope s^2 + f0 s - m = 0, stable root
        const double disc = std::max(f0 * f0 + 2.0 * slope * m, 0.0);
        s = 2.0 * m / (f0 + std::sqrt(disc));
      }
      ens.position(i, 0) = wrap(k * h + std::clamp(s, 0.0, h), g.length());
    }
    return ens;
  }

  const double umax = u.max();
  const double L = g.length();
  for (std::size_t i = 0; i < N; ++i) {
    for (;;) {
      std::array<double, 3> x{0, 0, 0};
      for (int a = 0; a < g.dim(); ++a) x[a] = U(rng) * L;
      if (U(rng) * umax <= interpolate(u, x)) {
        for (int a = 0; a < g.dim(); ++a) ens.position(i, a) = x[a];
        break;
      }
    }
  }
  return ens;
}

ParticleEnsemble simulate(const CoefficientSet& c, ParticleEnsemble ens, const TimeGrid& tg,
                          const SdeConfig& cfg) {
  const Grid& g = c.grid();
  require_same_grid(g, ens.grid(), "simulate");
  if (!(cfg.dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "simulate: dt_sde must be > 0");
  if (cfg.dt > tg.dt() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "simulate: dt_sde=" << cfg.dt << " exceeds the PDE step " << tg.dt();
    throw Error(ErrorKind::Precondition, os.str());
  }
  if (!(c.alpha() > 0.0) || ellipticity_check(c) < c.alpha() * (1.0 - 1e-12)) {
    throw Error(ErrorKind::Precondition,
                "simulate: diffusion must be uniformly elliptic with alpha > 0 (zero-noise limit excluded)");
  }
  const int d = g.dim();
  const double L = g.length();
  const int steps = static_cast<int>(std::ceil(tg.horizon() / cfg.dt - 1e-9));
  const double dt = tg.horizon() / steps;
  const double sq = std::sqrt(dt);
  const std::size_t batch = std::max<std::size_t>(cfg.batch_size, 1);
  const std::size_t nbatches = (ens.size() + batch - 1) / batch;

  for (std::size_t bi = 0; bi < nbatches; ++bi) {
    auto rng = stream(cfg.seed, bi, 2);
    std::normal_distribution<double> xi(0.0, 1.0);
    const std::size_t lo = bi * batch, hi = std::min(ens.size(), lo + batch);
    for (int step = 0; step < steps; ++step) {
      const int k = c.slice_at(step * dt * c.horizon() / tg.horizon());
      const VectorField& b = c.b(k);
      const MatrixField& a = c.a(k);
      for (std::size_t p = lo; p < hi; ++p) {
        std::array<double, 3> x{0, 0, 0};
        for (int ax = 0; ax < d; ++ax) x[ax] = ens.position(p, ax);
        NodeMatrix am;
        am.dim = d;
        for (int i = 0; i < d; ++i) {
          for (int j = i; j < d; ++j) am(i, j) = am(j, i) = interpolate(a(i, j), x);
        }
        const NodeMatrix s = sigma_from_a(am, p);
        std::array<double, 3> z{0, 0, 0};
        for (int ax = 0; ax < d; ++ax) z[ax] = xi(rng);
        for (int i = 0; i < d; ++i) {
          double noise = 0.0;
          for (int j = 0; j <= i; ++j) noise += s(i, j) * z[j];
          const double next = x[i] + interpolate(b[i], x) * dt + noise * sq;
          if (!std::isfinite(next)) {
            throw Error(ErrorKind::NonFinite,
                        "simulate: non-finite position for particle " + std::to_string(p));
          }
          ens.position(p, i) = wrap(next, L);
        }
      }
    }
  }
  ens.set_time(ens.time() + tg.horizon());
  return ens;
}

namespace {

int resolve_bins(const Grid& g, int bins) {
  if (bins == 0) bins = g.n();
  if (bins < 16 || g.n() % bins != 0) {
    throw Error(ErrorKind::InvalidArgument,
                "histogram bins per axis must be >= 16 and divide n=" + std::to_string(g.n()));
  }
  return bins;
}

}  // namespace

ScalarField histogram_density(const ParticleEnsemble& ens, int bins) {
  const Grid& g = ens.grid();
  bins = resolve_bins(g, bins);
  const int r = g.n() / bins;
  const Grid coarse = make_grid(g.dim(), bins, g.length());
  ScalarField hist(coarse);
  const double h = g.spacing();
  for (std::size_t p = 0; p < ens.size(); ++p) {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) {
      const int node = static_cast<int>(std::floor(ens.position(p, a) / h + 0.5)) % g.n();
      idx[a] = (node + r / 2) / r;
    }
    hist[coarse.flat(idx)] += 1.0;
  }
  hist *= 1.0 / (static_cast<double>(ens.size()) * coarse.cell_volume());
  return hist;
}

LawComparison law_compare(const ScalarField& density, const ParticleEnsemble& ens, int bins) {
  const Grid& g = density.grid();
  require_same_grid(g, ens.grid(), "law_compare");
  bins = resolve_bins(g, bins);
  const int r = g.n() / bins;
  const ScalarField hist = histogram_density(ens, bins);
  const Grid& coarse = hist.grid();
  ScalarField avg(coarse);
  for (std::size_t x = 0; x < g.size(); ++x) {
    auto idx = g.index(x);
    for (int a = 0; a < g.dim(); ++a) idx[a] = (idx[a] + r / 2) / r;
    avg[coarse.flat(idx)] += density[x];
  }
  avg *= 1.0 / std::pow(r, g.dim());
  LawComparison out;
  for (std::size_t k = 0; k < coarse.size(); ++k) out.l1 += std::abs(hist[k] - avg[k]);
  out.l1 *= coarse.cell_volume();
  out.bins = bins;
  out.N = ens.size();
  out.floor = std::sqrt(static_cast<double>(coarse.size()) / static_cast<double>(ens.size()));
  return out;
}

LawComparison law_compare(const Solution& sol, const ParticleEnsemble& ens, int bins) {
  const double T = sol.snapshot_times.back();
  if (std::abs(T - ens.time()) > 1e-9 * std::max(1.0, T)) {
    std::ostringstream os;
    os << "law_compare: PDE terminal time " << T << " does not match ensemble time " << ens.time();
    throw Error(ErrorKind::Precondition, os.str());
  }
  return law_compare(sol.final_state(), ens, bins);
}

}  // namespace fplab
