#include "elwave/operators.hpp"

namespace elwave {

namespace {

void require_spacing(const Grid2D& g, const StencilSet& st, const char* where) {
  if (g.spacing != st.dx) {
    throw GridMismatch(std::string(where) + ": stencil spacing does not match the grid");
  }
}

}  // namespace

VectorField2 apply_elastic(const VectorField2& u, const LameParams& lame, const StencilSet& st) {
  require_same_grid(u.c1.grid(), u.c2.grid(), "apply_elastic");
  require_spacing(u.grid(), st, "apply_elastic");
  const ElasticCoefficients coeff(lame, st);
  VectorField2 out(u.grid());
  const int n = u.grid().n;
  const std::ptrdiff_t s = u.c1.stride();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    const double* r1 = u.c1.row(j);
    const double* r2 = u.c2.row(j);
    double* o1 = out.c1.row(j);
    double* o2 = out.c2.row(j);
    for (int i = 0; i < n; ++i) elastic_at(r1 + i, r2 + i, s, coeff, o1[i], o2[i]);
  }
  return out;
}

Lattice divergence(const VectorField2& u, const StencilSet& st) {
  require_same_grid(u.c1.grid(), u.c2.grid(), "divergence");
  require_spacing(u.grid(), st, "divergence");
  Lattice out(u.grid());
  const int n = u.grid().n;
  const std::ptrdiff_t s = u.c1.stride();
  for (int j = 0; j < n; ++j) {
    const double* r1 = u.c1.row(j);
    const double* r2 = u.c2.row(j);
    double* o = out.row(j);
    for (int i = 0; i < n; ++i) o[i] = gradient_at(r1 + i, r2 + i, s, st.first).div();
  }
  return out;
}

Lattice gradient_energy_density(const VectorField2& u, const StencilSet& st) {
  require_same_grid(u.c1.grid(), u.c2.grid(), "gradient_energy_density");
  require_spacing(u.grid(), st, "gradient_energy_density");
  Lattice out(u.grid());
  const int n = u.grid().n;
  const std::ptrdiff_t s = u.c1.stride();
  for (int j = 0; j < n; ++j) {
    const double* r1 = u.c1.row(j);
    const double* r2 = u.c2.row(j);
    double* o = out.row(j);
    for (int i = 0; i < n; ++i) o[i] = gradient_at(r1 + i, r2 + i, s, st.first).grad_sq();
  }
  return out;
}

Lattice laplacian(const Lattice& f, const StencilSet& st) {
  require_spacing(f.grid(), st, "laplacian");
  Lattice out(f.grid());
  const int n = f.n();
  const std::ptrdiff_t s = f.stride();
  for (int j = 0; j < n; ++j) {
    const double* p = f.row(j);
    double* o = out.row(j);
    for (int i = 0; i < n; ++i) {
      o[i] = st.second_compact * (p[i + 1] + p[i - 1] + p[i + s] + p[i - s] - 4.0 * p[i]);
    }
  }
  return out;
}

VectorField2 laplacian(const VectorField2& f, const StencilSet& st) {
  require_same_grid(f.c1.grid(), f.c2.grid(), "laplacian");
  VectorField2 out;
  out.c1 = laplacian(f.c1, st);
  out.c2 = laplacian(f.c2, st);
  return out;
}

}  // namespace elwave
