#pragma once

#include <span>

#include "elwave/lattice.hpp"
#include "elwave/model.hpp"
#include "elwave/operators.hpp"
#include "elwave/state.hpp"

namespace elwave {

/// One output row. Integrals are lattice sums times dx^2.
struct DiagnosticsRecord {
  double t = 0.0;
  double E_u = 0.0;
  double l2_sq = 0.0;
  double dissipation = 0.0;
  double energy_identity_residual = 0.0;
  double support_radius = 0.0;
  double v_energy_lhs = 0.0;
  double v_energy_rhs = 0.0;
  double v_identity_residual = 0.0;
  double e_t = 0.0;
  double F_t = 0.0;
  /// |de/dt + F| at this row; filled after the run (zero at the end points).
  double multiplier_residual = 0.0;
  /// int_0^t int V |u|^2.
  double damped_l2 = 0.0;
  /// int_0^t ||u||^2 / (1 + s) ds.
  double weighted_l2 = 0.0;
  /// int u . u_t.
  double u_dot_ut = 0.0;
};

FieldMoments field_moments(const SimState& state, const Lattice& V, const StencilSet& st);

/// E_u(t) = 1/2 int |u_t|^2 + a^2 |grad u|^2 + (b^2 - a^2)(div u)^2.
double total_energy(const FieldMoments& m, const LameParams& lame);
double total_energy(const SimState& state, const LameParams& lame, const StencilSet& st);

double l2_norm_sq(const VectorField2& u);

constexpr double kSupportThreshold = 1e-12;

/// Largest |x| over nodes with |u(x)| > rel_threshold * max |u|; 0 for u == 0.
double support_radius(const VectorField2& u, double rel_threshold = kSupportThreshold);
/// Same with max |u|^2 already known.
double support_radius_with_peak(const VectorField2& u, double peak_sq,
                                double rel_threshold = kSupportThreshold);

struct ResidualValue {
  double value = 0.0;
  /// True when the reference quantity vanished and `value` is absolute.
  bool absolute = false;
};

/// max_t |E_u(t) + dissipation(t) - E_u(0)| / E_u(0).
ResidualValue energy_identity_residual(std::span<const DiagnosticsRecord> series);

struct VEnergyCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// Energy identity of v = int_0^t u: the left side uses v_t = u, the right side
/// 1/2 ||u0||^2 + int (u1 + V u0) . v.
VEnergyCheck v_energy_check(const SimState& state, const InitialData& init, const Lattice& V,
                            const LameParams& lame, const StencilSet& st);
/// Same check with rho = u1 + V u0 and ||u0||^2 precomputed; ||u||^2 comes
/// from state.moments.
VEnergyCheck v_energy_check(const SimState& state, const VectorField2& rho, double u0_l2_sq,
                            const LameParams& lame, const StencilSet& st);

}  // namespace elwave
