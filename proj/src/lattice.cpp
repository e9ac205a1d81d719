#include "elwave/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace elwave {

Grid2D make_grid(int n, double spacing) {
  if (n <= 0 || !(spacing > 0.0)) {
    throw std::invalid_argument("make_grid: need n > 0 and spacing > 0");
  }
  return Grid2D{0.5 * n * spacing, spacing, n};
}

Lattice::Lattice(const Grid2D& grid, double fill_value)
    : grid_(grid),
      stride_(grid.n + 2 * kPad),
      data_(static_cast<std::size_t>(stride_) * static_cast<std::size_t>(stride_), 0.0) {
  if (fill_value != 0.0) fill(fill_value);
}

void Lattice::fill(double value) {
  for (int j = 0; j < grid_.n; ++j) {
    double* r = row(j);
    std::fill(r, r + grid_.n, value);
  }
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* where) {
  if (!(a == b)) {
    std::ostringstream msg;
    msg << where << ": grid mismatch (n=" << a.n << ", dx=" << a.spacing << " vs n=" << b.n
        << ", dx=" << b.spacing << ")";
    throw GridMismatch(msg.str());
  }
}

VectorField2 combine(double alpha, const VectorField2& x, double beta, const VectorField2& y) {
  require_same_grid(x.grid(), y.grid(), "combine");
  VectorField2 out(x.grid());
  const int n = x.grid().n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      out.c1(i, j) = alpha * x.c1(i, j) + beta * y.c1(i, j);
      out.c2(i, j) = alpha * x.c2(i, j) + beta * y.c2(i, j);
    }
  }
  return out;
}

VectorField2 scaled(double alpha, const VectorField2& x) {
  VectorField2 out(x.grid());
  const int n = x.grid().n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      out.c1(i, j) = alpha * x.c1(i, j);
      out.c2(i, j) = alpha * x.c2(i, j);
    }
  }
  return out;
}

double max_magnitude(const VectorField2& u) {
  double m = 0.0;
  const int n = u.grid().n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      m = std::max(m, std::hypot(u.c1(i, j), u.c2(i, j)));
    }
  }
  return m;
}

bool all_finite(const VectorField2& u) {
  const int n = u.grid().n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(u.c1(i, j)) || !std::isfinite(u.c2(i, j))) return false;
    }
  }
  return true;
}

}  // namespace elwave
