#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fplab/error.hpp"

namespace fplab {

/// Uniform periodic grid on the torus [0, L)^d with n points per axis.
/// Nodes are stored row-major with axis 0 slowest.
class Grid {
 public:
  Grid() = default;

  int dim() const { return dim_; }
  int n() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / n_; }
  /// h^d, the quadrature weight of one node.
  double cell_volume() const;
  std::size_t size() const;

  std::array<int, 3> index(std::size_t flat) const;
  std::size_t flat(const std::array<int, 3>& idx) const;
  /// Flat index of the node shifted by `offset` cells along `axis` (wraps).
  std::size_t neighbor(std::size_t flat, int axis, int offset) const;
  std::array<double, 3> coord(std::size_t flat) const;

  bool operator==(const Grid&) const = default;

 private:
  friend Grid make_grid(int, int, double);
  int dim_ = 1;
  int n_ = 8;
  double length_ = 1.0;
};

/// Throws Error{InvalidArgument} naming the offending parameter.
Grid make_grid(int dim, int n, double length);

class TimeGrid {
 public:
  TimeGrid(double horizon, int steps);

  double horizon() const { return horizon_; }
  int steps() const { return steps_; }
  double dt() const { return horizon_ / steps_; }
  double time(int k) const { return k * dt(); }

 private:
  double horizon_;
  int steps_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* context);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double fill = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  /// Samples f(x) at every node; x has `grid.dim()` meaningful entries.
  static ScalarField sample(const Grid& grid,
                            const std::function<double(const std::array<double, 3>&)>& f);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  const std::vector<double>& data() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  bool all_finite() const;
  /// Throws Error{NonFinite} when any value is NaN or infinite.
  void require_finite(const char* context) const;

  double sum() const;
  double mean() const;
  double max() const;
  double min() const;
  double max_abs() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

  bool operator==(const ScalarField&) const = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, double s);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);
/// Discrete inner product sum(f g) h^d.
double inner(const ScalarField& a, const ScalarField& b);

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Grid& grid, double fill = 0.0);
  explicit VectorField(std::vector<ScalarField> components);

  const Grid& grid() const { return grid_; }
  int dim() const { return static_cast<int>(components_.size()); }
  const ScalarField& operator[](int i) const { return components_[i]; }
  ScalarField& operator[](int i) { return components_[i]; }
  const std::vector<ScalarField>& components() const { return components_; }

  bool all_finite() const;
  /// max over nodes of the Euclidean norm.
  double max_norm() const;

  bool operator==(const VectorField&) const = default;

 private:
  Grid grid_;
  std::vector<ScalarField> components_;
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator*(double s, const VectorField& a);
double inner(const VectorField& a, const VectorField& b);

/// Symmetric d x d matrix per node, stored as the d(d+1)/2 upper entries, so
/// a_ij == a_ji holds structurally.
class MatrixField {
 public:
  MatrixField() = default;
  explicit MatrixField(const Grid& grid, double diagonal = 0.0);

  /// Ingests a full (row-major d*d) component list; rejects asymmetric input.
  static MatrixField from_full(const Grid& grid, const std::vector<ScalarField>& full);
  static MatrixField from_upper(const Grid& grid, std::vector<ScalarField> upper);

  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  const ScalarField& operator()(int i, int j) const { return entries_[slot(i, j)]; }
  ScalarField& operator()(int i, int j) { return entries_[slot(i, j)]; }
  const std::vector<ScalarField>& upper() const { return entries_; }

  bool all_finite() const;
  double max_abs() const;

  bool operator==(const MatrixField&) const = default;

 private:
  int slot(int i, int j) const;
  Grid grid_;
  std::vector<ScalarField> entries_;
};

MatrixField operator+(const MatrixField& a, const MatrixField& b);
MatrixField operator*(double s, const MatrixField& a);

}  // namespace fplab
