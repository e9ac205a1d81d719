#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace elwave {

/// Uniform square grid with nodes at the cell centres of [-R, R]^2.
///
/// Index i runs along x1, j along x2. Node (i, j) sits at
/// (-R + (i + 1/2) dx, -R + (j + 1/2) dx), so n * dx == 2R.
struct Grid2D {
  double radius = 0.0;
  double spacing = 0.0;
  int n = 0;

  double coord(int i) const { return -radius + (i + 0.5) * spacing; }
  double cell_area() const { return spacing * spacing; }
  std::size_t size() const { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }

  bool operator==(const Grid2D&) const = default;
};

/// Builds a grid with `n` cells of size `spacing`, centred on the origin.
Grid2D make_grid(int n, double spacing);

class GridMismatch : public std::invalid_argument {
 public:
  explicit GridMismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// Scalar samples on a Grid2D.
///
/// Storage carries a zero halo of kPad nodes on every side. The halo is never
/// written, so stencils up to radius kPad can be applied at every node without
/// branching; this is the homogeneous Dirichlet truncation of the plane.
class Lattice {
 public:
  static constexpr int kPad = 2;

  Lattice() = default;
  explicit Lattice(const Grid2D& grid, double fill = 0.0);

  const Grid2D& grid() const { return grid_; }
  int n() const { return grid_.n; }
  std::ptrdiff_t stride() const { return stride_; }

  std::ptrdiff_t index(int i, int j) const {
    return static_cast<std::ptrdiff_t>(j + kPad) * stride_ + (i + kPad);
  }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(index(i, j))]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(index(i, j))]; }

  /// Pointer to the node (0, j); neighbours are reachable at +-1, +-stride().
  double* row(int j) { return data_.data() + index(0, j); }
  const double* row(int j) const { return data_.data() + index(0, j); }

  void fill(double value);
  /// Sets every interior node to zero (the halo already is).
  void clear() { fill(0.0); }

  void swap(Lattice& other) noexcept {
    std::swap(grid_, other.grid_);
    std::swap(stride_, other.stride_);
    data_.swap(other.data_);
  }

 private:
  Grid2D grid_{};
  std::ptrdiff_t stride_ = 0;
  std::vector<double> data_;
};

/// Two-component field (u1, u2) on one grid.
struct VectorField2 {
  Lattice c1;
  Lattice c2;

  VectorField2() = default;
  explicit VectorField2(const Grid2D& grid) : c1(grid), c2(grid) {}

  const Grid2D& grid() const { return c1.grid(); }

  void clear() {
    c1.clear();
    c2.clear();
  }
  void swap(VectorField2& other) noexcept {
    c1.swap(other.c1);
    c2.swap(other.c2);
  }
};

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* where);

/// alpha * x + beta * y, nodewise.
VectorField2 combine(double alpha, const VectorField2& x, double beta, const VectorField2& y);
VectorField2 scaled(double alpha, const VectorField2& x);

/// Max |u| over nodes, |u| = (u1^2 + u2^2)^(1/2).
double max_magnitude(const VectorField2& u);
bool all_finite(const VectorField2& u);

}  // namespace elwave
