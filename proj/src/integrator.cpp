#include "elwave/integrator.hpp"

#include "elwave/fpenv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace elwave {

double choose_dt(const Grid2D& grid, const LameParams& lame, double cfl_safety) {
  if (!(cfl_safety > 0.0 && cfl_safety < 1.0)) {
    throw ConfigError("choose_dt: cfl_safety must lie in (0, 1)");
  }
  return cfl_safety * grid.spacing / (lame.b * std::sqrt(2.0));
}

Integrator::Integrator(const LameParams& lame, const Lattice& V, double dt)
    : lame_(lame), stencils_(V.grid().spacing), dt_(dt), V_(V) {}

void Integrator::advance(SimState& s, double v_weight) const {
  const Grid2D& g = s.grid();
  const int n = g.n;
  const std::ptrdiff_t stride = s.u_curr.c1.stride();
  const ElasticCoefficients coeff(lame_, stencils_);
  const double dt2 = dt_ * dt_;
  const double half_dt = 0.5 * dt_;
  const double inv2dt = 1.0 / (2.0 * dt_);
  const double first = stencils_.first;

  // Per row: the seven moments, then max |u|^2.
  std::vector<std::array<double, 8>> rows(static_cast<std::size_t>(n));
#pragma omp parallel
  {
    flush_subnormals();
#pragma omp for schedule(static)
    for (int j = 0; j < n; ++j) {
      const double* c1 = s.u_curr.c1.row(j);
      const double* c2 = s.u_curr.c2.row(j);
      const double* p1 = s.u_prev.c1.row(j);
      const double* p2 = s.u_prev.c2.row(j);
      double* n1 = s.u_next.c1.row(j);
      double* n2 = s.u_next.c2.row(j);
      const double* V = V_.row(j);
      std::array<double, 8> acc{};
      for (int i = 0; i < n; ++i) {
        double L1, L2;
        elastic_at(c1 + i, c2 + i, stride, coeff, L1, L2);
        const double hd = half_dt * V[i];
        const double inv = 1.0 / (1.0 + hd);
        const double x1 = (2.0 * c1[i] - (1.0 - hd) * p1[i] + dt2 * L1) * inv;
        const double x2 = (2.0 * c2[i] - (1.0 - hd) * p2[i] + dt2 * L2) * inv;
        n1[i] = x1;
        n2[i] = x2;
        const double ut1 = (x1 - p1[i]) * inv2dt;
        const double ut2 = (x2 - p2[i]) * inv2dt;
        const NodeGradient gr = gradient_at(c1 + i, c2 + i, stride, first);
        const double kin = ut1 * ut1 + ut2 * ut2;
        const double mag = c1[i] * c1[i] + c2[i] * c2[i];
        const double div = gr.div();
        acc[0] += kin;
        acc[1] += gr.grad_sq();
        acc[2] += div * div;
        acc[3] += mag;
        acc[4] += V[i] * kin;
        acc[5] += V[i] * mag;
        acc[6] += c1[i] * ut1 + c2[i] * ut2;
        acc[7] = std::max(acc[7], mag);
      }
      if (v_weight != 0.0) {
        double* v1 = s.v_accum.c1.row(j);
        double* v2 = s.v_accum.c2.row(j);
        for (int i = 0; i < n; ++i) {
          v1[i] += v_weight * (p1[i] + c1[i]);
          v2[i] += v_weight * (p2[i] + c2[i]);
        }
      }
      rows[static_cast<std::size_t>(j)] = acc;
    }
  }

  std::array<double, 8> total{};
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < 7; ++k) total[k] += r[k];
    total[7] = std::max(total[7], r[7]);
  }
  if (!std::isfinite(total[0]) || !std::isfinite(total[3]) || !std::isfinite(total[1])) {
    std::ostringstream msg;
    msg << "non-finite displacement at step " << s.step_index + 1 << " (t = " << s.t + dt_ << ")";
    throw InstabilityError(s.step_index + 1, msg.str());
  }
  const double area = g.cell_area();
  s.moments = FieldMoments{total[0] * area, total[1] * area, total[2] * area, total[3] * area,
                           total[4] * area, total[5] * area, total[6] * area};
  s.peak_sq = total[7];
}

SimState Integrator::initialize(const InitialData& init) const {
  const Grid2D& g = init.u0.grid();
  require_same_grid(g, V_.grid(), "Integrator::initialize");
  require_same_grid(g, init.u1.grid(), "Integrator::initialize");

  SimState s;
  s.dt = dt_;
  s.u_curr = init.u0;
  s.u_next = VectorField2(g);
  s.v_accum = VectorField2(g);

  const VectorField2 Lu0 = apply_elastic(init.u0, lame_, stencils_);
  s.u_prev = VectorField2(g);
  const double half_dt2 = 0.5 * dt_ * dt_;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double v = V_(i, j);
      s.u_prev.c1(i, j) = init.u0.c1(i, j) - dt_ * init.u1.c1(i, j) +
                          half_dt2 * (Lu0.c1(i, j) - v * init.u1.c1(i, j));
      s.u_prev.c2(i, j) = init.u0.c2(i, j) - dt_ * init.u1.c2(i, j) +
                          half_dt2 * (Lu0.c2(i, j) - v * init.u1.c2(i, j));
    }
  }

  advance(s, 0.0);
  return s;
}

void Integrator::step(SimState& s) const {
  // prev <- curr <- next; the old prev buffer receives the new level.
  s.u_prev.swap(s.u_curr);
  s.u_curr.swap(s.u_next);

  const double t_old = s.t;
  const FieldMoments old = s.moments;
  advance(s, 0.5 * dt_);
  const FieldMoments& now = s.moments;

  s.step_index += 1;
  s.t = static_cast<double>(s.step_index) * dt_;
  s.dissipation += 0.5 * dt_ * (old.damped_kinetic + now.damped_kinetic);
  s.damped_l2 += 0.5 * dt_ * (old.damped_l2 + now.damped_l2);
  s.weighted_l2 += 0.5 * dt_ * (old.l2 / (1.0 + t_old) + now.l2 / (1.0 + s.t));
}

VectorField2 source_density_field(const InitialData& init, const Lattice& V) {
  require_same_grid(init.u0.grid(), V.grid(), "source_density_field");
  const Grid2D& g = V.grid();
  VectorField2 rho(g);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      rho.c1(i, j) = init.u1.c1(i, j) + V(i, j) * init.u0.c1(i, j);
      rho.c2(i, j) = init.u1.c2(i, j) + V(i, j) * init.u0.c2(i, j);
    }
  }
  return rho;
}

namespace {

InitialNorms initial_norms(const InitialData& init, const VectorField2& rho) {
  InitialNorms n;
  n.u0_l2_sq = l2_norm_sq(init.u0);
  n.u1_l2_sq = l2_norm_sq(init.u1);
  const Grid2D& g = rho.grid();
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double m = std::hypot(rho.c1(i, j), rho.c2(i, j));
      n.rho_l1 += m;
      n.rho_linf = std::max(n.rho_linf, m);
    }
  }
  n.rho_l1 *= g.cell_area();
  return n;
}

DualitySample duality_sample(const SimState& s, const VectorField2& rho, const StencilSet& st) {
  const Grid2D& g = s.grid();
  DualitySample d;
  d.t = s.t;
  const Lattice grad = gradient_energy_density(s.v_accum, st);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double dot = rho.c1(i, j) * s.v_accum.c1(i, j) + rho.c2(i, j) * s.v_accum.c2(i, j);
      d.abs_source_dot_v += std::abs(dot);
      d.source_dot_v += dot;
      d.grad_v_sq += grad(i, j);
    }
  }
  const double area = g.cell_area();
  d.abs_source_dot_v *= area;
  d.source_dot_v *= area;
  d.grad_v_sq *= area;
  return d;
}

}  // namespace

RunOutput run(const SimConfig& config, const RunOptions& options) {
  validate(config);
  RunOutput out;

  // T = 0 still needs a grid wide enough for the data and stencil halo.
  SimConfig sizing = config;
  if (sizing.T == 0.0) sizing.T = std::numeric_limits<double>::min();
  out.grid = build_grid(sizing, options.memory_cap_bytes);
  const Grid2D& g = out.grid;

  const DampingField damping = sample_damping(config.damping, g);
  const InitialData init = sample_initial_data(config.init, g);
  const VectorField2 rho = source_density_field(init, damping.V);
  out.norms = initial_norms(init, rho);

  const double dt_cfl = choose_dt(g, config.lame, config.cfl_safety);
  const int stride = config.output_stride;
  long steps = 0;
  double dt = dt_cfl;
  if (config.T > 0.0) {
    const long blocks = static_cast<long>(std::ceil(config.T / (dt_cfl * stride) - 1e-12));
    steps = std::max(1L, blocks) * stride;
    dt = config.T / static_cast<double>(steps);
  }
  out.dt = dt;
  out.steps = steps;

  const Integrator integrator(config.lame, damping.V, dt);
  const StencilSet& st = integrator.stencils();
  const WeightPair weights = WeightPair::for_config(config);
  SimState state = integrator.initialize(init);

  std::vector<double> duality_times = options.duality_times;
  std::sort(duality_times.begin(), duality_times.end());
  std::size_t next_duality = 0;
  const double time_eps = 1e-9 * std::max(1.0, config.T);

  // e and F at every step: the identity check then resolves de/dt at the
  // step size whatever the output stride.
  std::vector<double> series_t, series_e, series_F;
  std::vector<std::size_t> record_steps;

  auto record = [&]() {
    const FieldMoments& m = state.moments;
    DiagnosticsRecord r;
    r.t = state.t;
    r.E_u = total_energy(m, config.lame);
    r.l2_sq = m.l2;
    r.dissipation = state.dissipation;
    r.damped_l2 = state.damped_l2;
    r.weighted_l2 = state.weighted_l2;
    r.u_dot_ut = m.u_dot_ut;
    r.support_radius = support_radius_with_peak(state.u_curr, state.peak_sq);
    const VEnergyCheck vc = v_energy_check(state, rho, out.norms.u0_l2_sq, config.lame, st);
    r.v_energy_lhs = vc.lhs;
    r.v_energy_rhs = vc.rhs;
    r.v_identity_residual = vc.residual;
    if (options.multiplier) {
      r.e_t = series_e.back();
      r.F_t = series_F.back();
      if (options.constant_t0 && !out.C_t0 && state.t >= *options.constant_t0 - time_eps) {
        out.C_t0 = constant_at_t0(state, damping.V, weights.eval(state.t), r.E_u);
        out.C_t0_time = state.t;
      }
    }
    const double e0 = out.records.empty() ? r.E_u : out.records.front().E_u;
    const double gap = std::abs(r.E_u + r.dissipation - e0);
    r.energy_identity_residual = e0 > 0.0 ? gap / e0 : gap;

    const double excess = r.support_radius - RegionOmega{r.t, config.init.L, config.lame.b}.radius();
    out.max_support_excess = out.records.empty() ? excess : std::max(out.max_support_excess, excess);
    if (r.support_radius > 0.0 && excess > kSupportSlackCells * g.spacing) {
      out.finite_propagation_ok = false;
    }
    record_steps.push_back(series_t.empty() ? 0 : series_t.size() - 1);
    out.records.push_back(r);
  };

  auto sample_multiplier = [&]() {
    if (!options.multiplier) return;
    const WeightValues w = weights.eval(state.t);
    series_t.push_back(state.t);
    series_e.push_back(e_functional(state.moments, w, config.lame));
    series_F.push_back(F_functional(state.moments, w, config.lame));
  };

  // Duality samples land on the step nearest each requested time.
  auto sample_duality = [&]() {
    while (next_duality < duality_times.size() &&
           state.t >= duality_times[next_duality] - 0.5 * dt - time_eps) {
      out.duality.push_back(duality_sample(state, rho, st));
      ++next_duality;
    }
  };

  sample_multiplier();
  sample_duality();
  record();
  for (long k = 1; k <= steps; ++k) {
    integrator.step(state);
    sample_multiplier();
    sample_duality();
    if (k % stride == 0) record();
  }

  out.energy_residual = energy_identity_residual(out.records);
  for (const auto& r : out.records) {
    out.v_identity_residual = std::max(out.v_identity_residual, r.v_identity_residual);
  }
  out.norms.E0 = out.records.front().E_u;

  if (options.multiplier && series_t.size() >= 3) {
    out.multiplier = identity_residual(series_t, series_e, series_F);
    for (std::size_t k = 0; k < out.records.size(); ++k) {
      out.records[k].multiplier_residual = out.multiplier->pointwise[record_steps[k]];
    }
  }
  return out;
}

}  // namespace elwave
