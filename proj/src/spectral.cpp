#include "fplab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace fplab {
namespace {

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// FFTW planning is not thread-safe; execution on new arrays is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, p] : plans_) {
      fftw_destroy_plan(p.r2c);
      fftw_destroy_plan(p.c2r);
    }
  }

  PlanPair get(int d, int n) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(d, n);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::array<int, 3> dims{n, n, n};
    std::size_t real_size = 1;
    for (int i = 0; i < d; ++i) real_size *= n;
    const std::size_t cplx_size = real_size / n * (n / 2 + 1);
    double* in = fftw_alloc_real(real_size);
    fftw_complex* out = fftw_alloc_complex(cplx_size);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    p.r2c = fftw_plan_dft_r2c(d, dims.data(), in, out, flags);
    p.c2r = fftw_plan_dft_c2r(d, dims.data(), out, in, flags);
    fftw_free(in);
    fftw_free(out);
    if (!p.r2c || !p.c2r) throw Error(ErrorKind::InvalidArgument, "FFTW planning failed");
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

std::size_t spectrum_size(const Grid& grid) {
  return grid.size() / grid.n() * (grid.n() / 2 + 1);
}

Spectrum forward_fft(const ScalarField& f) {
  const Grid& g = f.grid();
  f.require_finite("forward_fft");
  auto plan = cache().get(g.dim(), g.n());
  std::vector<double> in(f.data());
  Spectrum out(spectrum_size(g));
  fftw_execute_dft_r2c(plan.r2c, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

ScalarField inverse_fft(const Grid& grid, Spectrum spec) {
  if (spec.size() != spectrum_size(grid)) {
    throw Error(ErrorKind::InvalidArgument, "inverse_fft: spectrum size does not match grid");
  }
  auto plan = cache().get(grid.dim(), grid.n());
  std::vector<double> out(grid.size());
  fftw_execute_dft_c2r(plan.c2r, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (double& v : out) v *= scale;
  return ScalarField(grid, std::move(out));
}

void for_each_mode(const Grid& grid, const std::function<void(const Mode&)>& fn) {
  const int d = grid.dim();
  const int n = grid.n();
  const int half = n / 2 + 1;
  const double k0 = 2.0 * std::numbers::pi / grid.length();
  std::array<int, 3> extent{1, 1, 1};
  for (int a = 0; a < d; ++a) extent[a] = (a == d - 1) ? half : n;
  Mode m{};
  std::size_t flat = 0;
  for (int i0 = 0; i0 < extent[0]; ++i0) {
    for (int i1 = 0; i1 < extent[1]; ++i1) {
      for (int i2 = 0; i2 < extent[2]; ++i2, ++flat) {
        std::array<int, 3> idx{i0, i1, i2};
        m.flat = flat;
        m.xi = {0.0, 0.0, 0.0};
        m.nyquist = {false, false, false};
        for (int a = 0; a < d; ++a) {
          const int k = idx[a] <= n / 2 ? idx[a] : idx[a] - n;
          m.xi[a] = k0 * k;
          m.nyquist[a] = (idx[a] == n / 2);
        }
        const int last = idx[d - 1];
        m.weight = (last == 0 || last == n / 2) ? 1.0 : 2.0;
        fn(m);
      }
    }
  }
}

ScalarField apply_multiplier(const ScalarField& f,
                             const std::function<std::complex<double>(const Mode&)>& mult) {
  Spectrum spec = forward_fft(f);
  for_each_mode(f.grid(), [&](const Mode& m) { spec[m.flat] *= mult(m); });
  return inverse_fft(f.grid(), std::move(spec));
}

ScalarField partial(const ScalarField& f, int axis) {
  if (axis < 0 || axis >= f.grid().dim()) {
    throw Error(ErrorKind::InvalidArgument, "partial: axis out of range");
  }
  return apply_multiplier(f, [axis](const Mode& m) {
    if (m.nyquist[axis]) return std::complex<double>(0.0);
    return std::complex<double>(0.0, m.xi[axis]);
  });
}

ScalarField partial2(const ScalarField& f, int i, int j) {
  const int d = f.grid().dim();
  if (i < 0 || i >= d || j < 0 || j >= d) {
    throw Error(ErrorKind::InvalidArgument, "partial2: axis out of range");
  }
  return apply_multiplier(f, [i, j](const Mode& m) {
    if (i != j && (m.nyquist[i] || m.nyquist[j])) return std::complex<double>(0.0);
    return std::complex<double>(-m.xi[i] * m.xi[j], 0.0);
  });
}

ScalarField laplacian(const ScalarField& f) {
  const int d = f.grid().dim();
  return apply_multiplier(f, [d](const Mode& m) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) s += m.xi[a] * m.xi[a];
    return std::complex<double>(-s, 0.0);
  });
}

VectorField gradient(const ScalarField& f) {
  std::vector<ScalarField> c;
  for (int a = 0; a < f.grid().dim(); ++a) c.push_back(partial(f, a));
  return VectorField(std::move(c));
}

ScalarField divergence(const VectorField& v) {
  if (!v.all_finite()) throw Error(ErrorKind::NonFinite, "divergence: non-finite input");
  ScalarField out(v.grid());
  for (int a = 0; a < v.dim(); ++a) out += partial(v[a], a);
  return out;
}

}  // namespace fplab
