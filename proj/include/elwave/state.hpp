#pragma once

#include "elwave/lattice.hpp"
#include "elwave/model.hpp"

namespace elwave {

/// All quadratic integrals of (u, u_t) at one level that the energy and
/// multiplier functionals are assembled from.
struct FieldMoments {
  double kinetic = 0.0;         // int |u_t|^2
  double grad_sq = 0.0;         // int |grad u|^2
  double div_sq = 0.0;          // int (div u)^2
  double l2 = 0.0;              // int |u|^2
  double damped_kinetic = 0.0;  // int V |u_t|^2
  double damped_l2 = 0.0;       // int V |u|^2
  double u_dot_ut = 0.0;        // int u . u_t

  /// int a^2 |grad u|^2 + (b^2 - a^2)(div u)^2.
  double strain(const LameParams& lame) const {
    return lame.a * lame.a * grad_sq + lame.coupling() * div_sq;
  }
};

/// Three consecutive displacement levels plus the running time integrals.
///
/// `t` is the time of u_curr. u_next is always available so that the centred
/// velocity (u_next - u_prev) / (2 dt) exists at the current level, including t = 0.
struct SimState {
  double t = 0.0;
  double dt = 0.0;
  long step_index = 0;

  VectorField2 u_prev;
  VectorField2 u_curr;
  VectorField2 u_next;

  /// Trapezoidal accumulation of v(t) = int_0^t u ds; zero at t = 0.
  VectorField2 v_accum;

  /// int_0^t int V |u_s|^2, trapezoid over centred velocities.
  double dissipation = 0.0;
  /// int_0^t int V |u|^2.
  double damped_l2 = 0.0;
  /// int_0^t ||u||^2 / (1 + s) ds.
  double weighted_l2 = 0.0;

  /// Moments of the current level, produced by the update that wrote u_next.
  FieldMoments moments;
  /// max |u_curr|^2 over the nodes.
  double peak_sq = 0.0;

  const Grid2D& grid() const { return u_curr.grid(); }

  /// Centred velocity at the current level.
  double velocity1(int i, int j) const { return (u_next.c1(i, j) - u_prev.c1(i, j)) / (2.0 * dt); }
  double velocity2(int i, int j) const { return (u_next.c2(i, j) - u_prev.c2(i, j)) / (2.0 * dt); }
};

}  // namespace elwave
