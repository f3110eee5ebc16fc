#include "fplab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fplab/spectral.hpp"

namespace fplab {
namespace {

void require_exponent(double p, const char* ctx) {
  if (!(p >= 1.0)) {
    std::ostringstream os;
    os << ctx << ": exponent p=" << p << " must be in [1, inf]";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

}  // namespace

double lp_norm(const ScalarField& f, double p) {
  require_exponent(p, "lp_norm");
  f.require_finite("lp_norm");
  if (std::isinf(p)) return f.max_abs();
  double s = 0.0;
  if (p == 1.0) {
    for (double v : f.values()) s += std::abs(v);
    return s * f.grid().cell_volume();
  }
  if (p == 2.0) {
    for (double v : f.values()) s += v * v;
    return std::sqrt(s * f.grid().cell_volume());
  }
  for (double v : f.values()) s += std::pow(std::abs(v), p);
  return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

double lp_norm(const VectorField& v, double p) {
  require_exponent(p, "lp_norm");
  ScalarField mag(v.grid());
  for (std::size_t k = 0; k < mag.size(); ++k) {
    double s = 0.0;
    for (int i = 0; i < v.dim(); ++i) s += v[i][k] * v[i][k];
    mag[k] = std::sqrt(s);
  }
  return lp_norm(mag, p);
}

double sobolev_norm(const ScalarField& f, int s) {
  const Grid& g = f.grid();
  const Spectrum spec = forward_fft(f);
  double acc = 0.0;
  for_each_mode(g, [&](const Mode& m) {
    double xi2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) xi2 += m.xi[a] * m.xi[a];
    const double w = s == 0 ? 1.0 : std::pow(1.0 + xi2, s);
    acc += m.weight * w * std::norm(spec[m.flat]);
  });
  const double N = static_cast<double>(g.size());
  return std::sqrt(acc * std::pow(g.length(), g.dim()) / (N * N));
}

double gradient_l2_squared(const ScalarField& f) {
  const Grid& g = f.grid();
  const Spectrum spec = forward_fft(f);
  double acc = 0.0;
  for_each_mode(g, [&](const Mode& m) {
    double xi2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      if (!m.nyquist[a]) xi2 += m.xi[a] * m.xi[a];
    }
    acc += m.weight * xi2 * std::norm(spec[m.flat]);
  });
  const double N = static_cast<double>(g.size());
  return acc * std::pow(g.length(), g.dim()) / (N * N);
}

std::string NormDescriptor::name() const {
  std::ostringstream os;
  os << "L" << (std::isinf(time_r) ? std::string("inf") : std::to_string(static_cast<int>(time_r)));
  if (sobolev == -1) os << "H-1";
  else if (sobolev == 1) os << "H1";
  else if (std::isinf(space_p)) os << "Linf";
  else os << "L" << space_p;
  return os.str();
}

double spatial_norm(const ScalarField& f, const NormDescriptor& desc) {
  if (desc.sobolev != 0) return sobolev_norm(f, desc.sobolev);
  return lp_norm(f, desc.space_p);
}

double bochner_norm(const std::vector<ScalarField>& slices, const std::vector<double>& times,
                    const NormDescriptor& desc) {
  require_exponent(desc.time_r, "bochner_norm");
  if (slices.empty() || slices.size() != times.size()) {
    throw Error(ErrorKind::InvalidArgument, "bochner_norm: need one sample time per slice");
  }
  std::vector<double> v;
  for (const auto& s : slices) v.push_back(spatial_norm(s, desc));
  if (std::isinf(desc.time_r)) return *std::max_element(v.begin(), v.end());
  if (v.size() == 1) return v.front();
  const double r = desc.time_r;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    acc += 0.5 * (std::pow(v[k], r) + std::pow(v[k + 1], r)) * (times[k + 1] - times[k]);
  }
  const double span = times.back() - times.front();
  if (!(span > 0.0)) throw Error(ErrorKind::InvalidArgument, "bochner_norm: times must increase");
  return std::pow(acc, 1.0 / r);
}

double bochner_norm_piecewise(const std::vector<ScalarField>& slices, double tau,
                              const NormDescriptor& desc) {
  require_exponent(desc.time_r, "bochner_norm_piecewise");
  if (slices.empty()) throw Error(ErrorKind::InvalidArgument, "bochner_norm_piecewise: no slices");
  double acc = 0.0, mx = 0.0;
  for (const auto& s : slices) {
    const double v = spatial_norm(s, desc);
    mx = std::max(mx, v);
    acc += std::pow(v, desc.time_r) * tau;
  }
  if (std::isinf(desc.time_r)) return mx;
  return std::pow(acc, 1.0 / desc.time_r);
}

void NormReport::add(double abscissa, double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw Error(ErrorKind::NonFinite, "NormReport: values must be finite and >= 0");
  }
  if (!x_.empty() && !(abscissa < x_.back())) {
    throw Error(ErrorKind::InvalidArgument, "NormReport: abscissae must strictly decrease");
  }
  x_.push_back(abscissa);
  y_.push_back(value);
}

bool NormReport::monotone_decreasing() const {
  for (std::size_t k = 1; k < y_.size(); ++k) {
    if (!(y_[k] < y_[k - 1])) return false;
  }
  return true;
}

double NormReport::final_over_initial() const {
  if (y_.empty() || y_.front() == 0.0) return 0.0;
  return y_.back() / y_.front();
}

RateFit rate_fit(const std::vector<double>& x, const std::vector<double>& y, double zero_floor) {
  if (x.size() < 3 || x.size() != y.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "rate_fit: need at least 3 points, got " + std::to_string(x.size()));
  }
  RateFit fit;
  if (std::any_of(y.begin(), y.end(), [&](double v) { return v <= zero_floor; })) {
    fit.infinite = true;
    fit.rate = std::numeric_limits<double>::infinity();
    return fit;
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw Error(ErrorKind::InvalidArgument, "rate_fit: abscissae are all equal");
  fit.rate = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.rate * sx) / n;
  double res = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double e = std::log(y[k]) - (fit.intercept + fit.rate * std::log(x[k]));
    res += e * e;
  }
  fit.residual = std::sqrt(res / n);
  return fit;
}

RateFit rate_fit(const NormReport& report, double zero_floor) {
  return rate_fit(report.abscissae(), report.values(), zero_floor);
}

}  // namespace fplab
