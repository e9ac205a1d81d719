#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "elwave/diagnostics.hpp"
#include "elwave/model.hpp"
#include "elwave/multiplier.hpp"
#include "elwave/operators.hpp"
#include "elwave/state.hpp"

namespace elwave {

/// A non-finite value appeared in the new time level.
class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(long step, const std::string& what) : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// dt = cfl_safety * dx / (b sqrt 2).
double choose_dt(const Grid2D& grid, const LameParams& lame, double cfl_safety);

/// Leapfrog in time with the damping term centred:
///   (1 + dt V / 2) u^{n+1} = 2 u^n - u^{n-1} + dt^2 L u^n + (dt V / 2) u^{n-1}.
/// V is diagonal so the implicit part is a nodewise division.
class Integrator {
 public:
  Integrator(const LameParams& lame, const Lattice& V, double dt);

  double dt() const { return dt_; }
  const StencilSet& stencils() const { return stencils_; }

  /// u_curr = u0, ghost level u_prev = u0 - dt u1 + dt^2/2 (L u0 - V u1), and
  /// u_next from one update.
  SimState initialize(const InitialData& init) const;

  /// Advances the state by dt and updates the running integrals.
  void step(SimState& state) const;

 private:
  /// Writes u_next from (u_prev, u_curr), stores the moments of the current
  /// level, and accumulates v when `v_weight` != 0.
  void advance(SimState& state, double v_weight) const;

  LameParams lame_;
  StencilSet stencils_;
  double dt_;
  Lattice V_;
};

/// Aggregates of the initial data used by the growth envelopes.
struct InitialNorms {
  double u0_l2_sq = 0.0;
  double u1_l2_sq = 0.0;
  /// rho = u1 + V u0 with vector magnitudes.
  double rho_l1 = 0.0;
  double rho_linf = 0.0;
  double E0 = 0.0;
};

struct DualitySample {
  double t = 0.0;
  /// int |rho . v|.
  double abs_source_dot_v = 0.0;
  /// int rho . v.
  double source_dot_v = 0.0;
  /// int |grad v|^2.
  double grad_v_sq = 0.0;
};

struct RunOptions {
  std::size_t memory_cap_bytes = kDefaultMemoryCapBytes;
  bool multiplier = true;
  /// Evaluate C(t0) at the first output time >= this.
  std::optional<double> constant_t0;
  /// Duality samples are taken at the steps nearest these times.
  std::vector<double> duality_times;
};

struct RunOutput {
  Grid2D grid;
  double dt = 0.0;
  long steps = 0;
  std::vector<DiagnosticsRecord> records;
  InitialNorms norms;
  ResidualValue energy_residual;
  double v_identity_residual = 0.0;
  std::optional<IdentityResidual> multiplier;
  std::optional<double> C_t0;
  std::optional<double> C_t0_time;
  std::vector<DualitySample> duality;
  /// max over outputs of support_radius - (L + b t).
  double max_support_excess = 0.0;
  bool finite_propagation_ok = true;
};

/// Slack allowed on the discrete support front, in grid spacings.
constexpr double kSupportSlackCells = 3.0;

/// Steps from 0 to T with N = output_stride * ceil(T / (stride dt_cfl)) steps of
/// dt = T / N, emitting a record every output_stride steps.
RunOutput run(const SimConfig& config, const RunOptions& options = {});

/// rho = u1 + V u0.
VectorField2 source_density_field(const InitialData& init, const Lattice& V);

}  // namespace elwave
