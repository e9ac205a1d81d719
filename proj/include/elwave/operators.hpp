#pragma once

#include <cstddef>

#include "elwave/lattice.hpp"
#include "elwave/model.hpp"

namespace elwave {

/// Second-order centred difference coefficients for one grid spacing.
///
/// The elastic operator is built as a composition of centred first
/// differences D_k u = (u[+1] - u[-1]) / (2 dx):
///   d_kk = D_k D_k   (points -2, 0, +2, weight 1 / (4 dx^2))
///   d_12 = D_1 D_2   (four-corner cross, weight 1 / (4 dx^2))
/// so that -<u, L u> equals the lattice sum of a^2 |D u|^2 + (b^2 - a^2)(D.u)^2
/// with D the same first differences used by every energy functional.
/// The scalar Laplacian used for Poisson residuals is the compact five-point one.
struct StencilSet {
  double dx = 0.0;
  double first = 0.0;         // 1 / (2 dx)
  double second_wide = 0.0;   // 1 / (4 dx^2)
  double cross = 0.0;         // 1 / (4 dx^2)
  double second_compact = 0.0;  // 1 / dx^2

  explicit StencilSet(double spacing)
      : dx(spacing),
        first(0.5 / spacing),
        second_wide(0.25 / (spacing * spacing)),
        cross(0.25 / (spacing * spacing)),
        second_compact(1.0 / (spacing * spacing)) {}
};

/// Coefficients of L = a^2 Delta + (b^2 - a^2) grad div on one grid.
struct ElasticCoefficients {
  double b2_d;     // b^2 / (4 dx^2)
  double a2_d;     // a^2 / (4 dx^2)
  double cpl_d;    // (b^2 - a^2) / (4 dx^2)

  ElasticCoefficients(const LameParams& lame, const StencilSet& st)
      : b2_d(lame.b * lame.b * st.second_wide),
        a2_d(lame.a * lame.a * st.second_wide),
        cpl_d(lame.coupling() * st.cross) {}
};

/// L u at one node. `p1`, `p2` point at the node in the two component arrays,
/// `s` is the row stride; needs a zero halo of two nodes.
inline void elastic_at(const double* p1, const double* p2, std::ptrdiff_t s,
                       const ElasticCoefficients& c, double& out1, double& out2) {
  const double s11_1 = p1[2] - 2.0 * p1[0] + p1[-2];
  const double s22_1 = p1[2 * s] - 2.0 * p1[0] + p1[-2 * s];
  const double s11_2 = p2[2] - 2.0 * p2[0] + p2[-2];
  const double s22_2 = p2[2 * s] - 2.0 * p2[0] + p2[-2 * s];
  const double x12_1 = p1[s + 1] - p1[-s + 1] - p1[s - 1] + p1[-s - 1];
  const double x12_2 = p2[s + 1] - p2[-s + 1] - p2[s - 1] + p2[-s - 1];
  out1 = c.b2_d * s11_1 + c.a2_d * s22_1 + c.cpl_d * x12_2;
  out2 = c.a2_d * s11_2 + c.b2_d * s22_2 + c.cpl_d * x12_1;
}

/// Centred first differences of both components at one node.
struct NodeGradient {
  double d1u1, d2u1, d1u2, d2u2;

  double grad_sq() const { return d1u1 * d1u1 + d2u1 * d2u1 + d1u2 * d1u2 + d2u2 * d2u2; }
  double div() const { return d1u1 + d2u2; }
};

inline NodeGradient gradient_at(const double* p1, const double* p2, std::ptrdiff_t s,
                                double first) {
  return {first * (p1[1] - p1[-1]), first * (p1[s] - p1[-s]), first * (p2[1] - p2[-1]),
          first * (p2[s] - p2[-s])};
}

/// a^2 Delta u + (b^2 - a^2) grad div u on every node.
VectorField2 apply_elastic(const VectorField2& u, const LameParams& lame, const StencilSet& st);

/// D_1 u_1 + D_2 u_2.
Lattice divergence(const VectorField2& u, const StencilSet& st);

/// |D u_1|^2 + |D u_2|^2 per node.
Lattice gradient_energy_density(const VectorField2& u, const StencilSet& st);

/// Five-point Laplacian.
Lattice laplacian(const Lattice& f, const StencilSet& st);
VectorField2 laplacian(const VectorField2& f, const StencilSet& st);

}  // namespace elwave
