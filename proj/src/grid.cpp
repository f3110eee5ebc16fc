#include "fplab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fplab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::GridMismatch: return "grid_mismatch";
    case ErrorKind::NonFinite: return "non_finite";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Hypothesis: return "hypothesis_violation";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Grid make_grid(int dim, int n, double length) {
  if (dim < 1 || dim > 3) {
    throw Error(ErrorKind::InvalidArgument,
                "make_grid: dimension d=" + std::to_string(dim) + " must be 1, 2 or 3");
  }
  if (n < 8 || (n & (n - 1)) != 0) {
    throw Error(ErrorKind::InvalidArgument,
                "make_grid: points per axis n=" + std::to_string(n) +
                    " must be a power of two >= 8");
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    std::ostringstream os;
    os << "make_grid: box length L=" << length << " must be positive and finite";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  Grid g;
  g.dim_ = dim;
  g.n_ = n;
  g.length_ = length;
  return g;
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int i = 0; i < dim_; ++i) s *= static_cast<std::size_t>(n_);
  return s;
}

std::array<int, 3> Grid::index(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int axis = dim_ - 1; axis >= 0; --axis) {
    idx[axis] = static_cast<int>(flat % n_);
    flat /= n_;
  }
  return idx;
}

std::size_t Grid::flat(const std::array<int, 3>& idx) const {
  std::size_t f = 0;
  for (int axis = 0; axis < dim_; ++axis) {
    int k = ((idx[axis] % n_) + n_) % n_;
    f = f * n_ + static_cast<std::size_t>(k);
  }
  return f;
}

std::size_t Grid::neighbor(std::size_t flat_index, int axis, int offset) const {
  std::size_t stride = 1;
  for (int a = dim_ - 1; a > axis; --a) stride *= n_;
  const int k = static_cast<int>((flat_index / stride) % n_);
  const int shifted = ((k + offset) % n_ + n_) % n_;
  return flat_index + (static_cast<std::ptrdiff_t>(shifted) - k) * static_cast<std::ptrdiff_t>(stride);
}

std::array<double, 3> Grid::coord(std::size_t flat_index) const {
  auto idx = index(flat_index);
  const double h = spacing();
  return {idx[0] * h, idx[1] * h, idx[2] * h};
}

TimeGrid::TimeGrid(double horizon, int steps) : horizon_(horizon), steps_(steps) {
  if (steps < 1) {
    throw Error(ErrorKind::InvalidArgument,
                "TimeGrid: step count nt=" + std::to_string(steps) + " must be >= 1");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorKind::InvalidArgument, "TimeGrid: horizon T must be positive");
  }
}

void require_same_grid(const Grid& a, const Grid& b, const char* context) {
  if (!(a == b)) {
    std::ostringstream os;
    os << context << ": grid mismatch (d=" << a.dim() << ", n=" << a.n() << ", L=" << a.length()
       << ") vs (d=" << b.dim() << ", n=" << b.n() << ", L=" << b.length() << ")";
    throw Error(ErrorKind::GridMismatch, os.str());
  }
}

// ---------------------------------------------------------------- ScalarField

ScalarField::ScalarField(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "ScalarField: expected " + std::to_string(grid_.size()) + " values, got " +
                    std::to_string(values_.size()));
  }
}

ScalarField ScalarField::sample(const Grid& grid,
                                const std::function<double(const std::array<double, 3>&)>& f) {
  ScalarField out(grid);
  for (std::size_t i = 0; i < out.size(); ++i) out.values_[i] = f(grid.coord(i));
  return out;
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void ScalarField::require_finite(const char* context) const {
  if (!all_finite()) {
    throw Error(ErrorKind::NonFinite, std::string(context) + ": field has non-finite values");
  }
}

double ScalarField::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }
double ScalarField::mean() const { return sum() / static_cast<double>(values_.size()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField::+=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField::-=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, double s) { return a *= s; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "hadamard");
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid().cell_volume();
}

// ---------------------------------------------------------------- VectorField

VectorField::VectorField(const Grid& grid, double fill)
    : grid_(grid), components_(grid.dim(), ScalarField(grid, fill)) {}

VectorField::VectorField(std::vector<ScalarField> components) : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorKind::InvalidArgument, "VectorField: no components");
  grid_ = components_.front().grid();
  if (static_cast<int>(components_.size()) != grid_.dim()) {
    throw Error(ErrorKind::InvalidArgument, "VectorField: component count must equal grid dimension");
  }
  for (const auto& c : components_) require_same_grid(grid_, c.grid(), "VectorField");
}

bool VectorField::all_finite() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const ScalarField& c) { return c.all_finite(); });
}

double VectorField::max_norm() const {
  double m = 0.0;
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    double s = 0.0;
    for (const auto& c : components_) s += c[k] * c[k];
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "VectorField::+");
  std::vector<ScalarField> c;
  for (int i = 0; i < a.dim(); ++i) c.push_back(a[i] + b[i]);
  return VectorField(std::move(c));
}

VectorField operator*(double s, const VectorField& a) {
  std::vector<ScalarField> c;
  for (int i = 0; i < a.dim(); ++i) c.push_back(s * a[i]);
  return VectorField(std::move(c));
}

double inner(const VectorField& a, const VectorField& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += inner(a[i], b[i]);
  return s;
}

// ---------------------------------------------------------------- MatrixField

namespace {
int upper_count(int d) { return d * (d + 1) / 2; }
}  // namespace

MatrixField::MatrixField(const Grid& grid, double diagonal) : grid_(grid) {
  const int d = grid.dim();
  entries_.assign(upper_count(d), ScalarField(grid));
  for (int i = 0; i < d; ++i) entries_[slot(i, i)] = ScalarField(grid, diagonal);
}

int MatrixField::slot(int i, int j) const {
  if (i > j) std::swap(i, j);
  const int d = grid_.dim();
  // rows 0..i-1 hold d, d-1, ... entries
  return i * d - i * (i - 1) / 2 + (j - i);
}

MatrixField MatrixField::from_upper(const Grid& grid, std::vector<ScalarField> upper) {
  if (static_cast<int>(upper.size()) != upper_count(grid.dim())) {
    throw Error(ErrorKind::InvalidArgument, "MatrixField: wrong number of upper entries");
  }
  for (const auto& e : upper) require_same_grid(grid, e.grid(), "MatrixField");
  MatrixField m;
  m.grid_ = grid;
  m.entries_ = std::move(upper);
  return m;
}

MatrixField MatrixField::from_full(const Grid& grid, const std::vector<ScalarField>& full) {
  const int d = grid.dim();
  if (static_cast<int>(full.size()) != d * d) {
    throw Error(ErrorKind::InvalidArgument, "MatrixField: expected d*d components");
  }
  MatrixField m(grid);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const auto& aij = full[i * d + j];
      const auto& aji = full[j * d + i];
      require_same_grid(grid, aij.grid(), "MatrixField::from_full");
      for (std::size_t k = 0; k < aij.size(); ++k) {
        const double scale = std::max({1.0, std::abs(aij[k]), std::abs(aji[k])});
        if (std::abs(aij[k] - aji[k]) > 1e-12 * scale) {
          std::ostringstream os;
          os << "MatrixField: asymmetric input, |a_" << i << j << " - a_" << j << i
             << "| = " << std::abs(aij[k] - aji[k]) << " at node " << k;
          throw Error(ErrorKind::InvalidArgument, os.str());
        }
      }
      m(i, j) = aij;
    }
  }
  return m;
}

bool MatrixField::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const ScalarField& c) { return c.all_finite(); });
}

double MatrixField::max_abs() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, e.max_abs());
  return m;
}

MatrixField operator+(const MatrixField& a, const MatrixField& b) {
  require_same_grid(a.grid(), b.grid(), "MatrixField::+");
  std::vector<ScalarField> e;
  for (std::size_t k = 0; k < a.upper().size(); ++k) e.push_back(a.upper()[k] + b.upper()[k]);
  return MatrixField::from_upper(a.grid(), std::move(e));
}

MatrixField operator*(double s, const MatrixField& a) {
  std::vector<ScalarField> e;
  for (const auto& x : a.upper()) e.push_back(s * x);
  return MatrixField::from_upper(a.grid(), std::move(e));
}

}  // namespace fplab
