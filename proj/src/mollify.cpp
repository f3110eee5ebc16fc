#include "fplab/mollify.hpp"

#include <cmath>
#include <sstream>

namespace fplab {

const char* to_string(KernelFamily f) {
  return f == KernelFamily::Bump ? "bump" : "gaussian_truncated";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "bump") return KernelFamily::Bump;
  if (name == "gaussian_truncated" || name == "gaussian") return KernelFamily::GaussianTruncated;
  throw Error(ErrorKind::InvalidArgument,
              "unknown mollifier family '" + name + "' (expected bump or gaussian_truncated)");
}

Mollifier::Mollifier(KernelFamily family, double delta, const Grid& grid)
    : family_(family), delta_(delta), grid_(grid), kernel_(grid) {
  const double h = grid.spacing();
  if (!(delta >= 2.0 * h * (1.0 - 1e-12))) {
    std::ostringstream os;
    os << "mollifier under-resolved: delta=" << delta << " < 2h=" << 2.0 * h;
    throw Error(ErrorKind::Precondition, os.str());
  }
  const double cutoff = family == KernelFamily::Bump ? delta : 5.0 * delta;
  if (cutoff >= 0.5 * grid.length()) {
    std::ostringstream os;
    os << "mollifier support " << cutoff << " does not fit in half the box (L/2="
       << 0.5 * grid.length() << ")";
    throw Error(ErrorKind::Precondition, os.str());
  }
  const int d = grid.dim();
  const int n = grid.n();
  const int reach = static_cast<int>(std::ceil(cutoff / h)) + 1;
  std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int a = 0; a < d; ++a) {
    lo[a] = -reach;
    hi[a] = reach;
  }
  long double total = 0.0L;
  for (int i = lo[0]; i <= hi[0]; ++i) {
    for (int j = lo[1]; j <= hi[1]; ++j) {
      for (int k = lo[2]; k <= hi[2]; ++k) {
        const double r2 = (double(i) * i + double(j) * j + double(k) * k) * h * h;
        double v = 0.0;
        if (family == KernelFamily::Bump) {
          const double z2 = r2 / (delta * delta);
          if (z2 < 1.0) v = std::exp(-1.0 / (1.0 - z2));
        } else if (r2 <= cutoff * cutoff) {
          v = std::exp(-0.5 * r2 / (delta * delta));
        }
        if (v <= 0.0) continue;
        stencil_.push_back({{i, j, k}, v});
        total += v;
        support_cells_ = std::max({support_cells_, std::abs(i) + 1, std::abs(j) + 1, std::abs(k) + 1});
      }
    }
  }
  const double hd = grid.cell_volume();
  normalization_ = static_cast<double>(1.0L / (total * hd));
  long double mass = 0.0L;
  for (auto& e : stencil_) {
    e.weight = static_cast<double>(e.weight / total);
    mass += e.weight;
  }
  for (auto& e : stencil_) {
    if (e.offset == std::array<int, 3>{0, 0, 0}) e.weight += static_cast<double>(1.0L - mass);
  }
  for (const auto& e : stencil_) {
    kernel_[grid.flat({(e.offset[0] + n) % n, (e.offset[1] + n) % n, (e.offset[2] + n) % n})] +=
        e.weight / hd;
  }
  Spectrum spec = forward_fft(kernel_);
  multiplier_.resize(spec.size());
  for (std::size_t q = 0; q < spec.size(); ++q) multiplier_[q] = spec[q].real() * hd;
}

Mollifier make_mollifier(KernelFamily family, double delta, const Grid& grid) {
  return Mollifier(family, delta, grid);
}

ScalarField mollify(const ScalarField& f, const Mollifier& m) {
  require_same_grid(f.grid(), m.grid(), "mollify");
  Spectrum spec = forward_fft(f);
  const auto& mult = m.multiplier();
  for (std::size_t q = 0; q < spec.size(); ++q) spec[q] *= mult[q];
  return inverse_fft(f.grid(), std::move(spec));
}

VectorField mollify(const VectorField& v, const Mollifier& m) {
  std::vector<ScalarField> c;
  for (int i = 0; i < v.dim(); ++i) c.push_back(mollify(v[i], m));
  return VectorField(std::move(c));
}

MatrixField mollify(const MatrixField& a, const Mollifier& m) {
  std::vector<ScalarField> e;
  for (const auto& x : a.upper()) e.push_back(mollify(x, m));
  return MatrixField::from_upper(a.grid(), std::move(e));
}

}  // namespace fplab
