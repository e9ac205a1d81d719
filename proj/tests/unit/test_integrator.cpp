#include <doctest.h>

#include <cmath>

#include "elwave/integrator.hpp"
#include "elwave/reports.hpp"
#include "fields.hpp"

using namespace elwave;
using testutil::bump_config;

namespace {

double max_abs_diff(const VectorField2& x, const VectorField2& y) {
  double d = 0.0;
  const Grid2D& g = x.grid();
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      d = std::max({d, std::abs(x.c1(i, j) - y.c1(i, j)), std::abs(x.c2(i, j) - y.c2(i, j))});
    }
  }
  return d;
}

InitialData sampled(const SimConfig& cfg, Grid2D& g) {
  SimConfig s = cfg;
  g = build_grid(s);
  return sample_initial_data(cfg.init, g);
}

}  // namespace

TEST_CASE("choose_dt") {
  const Grid2D g = make_grid(20, 0.1);
  CHECK(choose_dt(g, {1.0, 2.0}, 0.5) == doctest::Approx(0.0176776695));
  CHECK(choose_dt(g, {1.0, 4.0}, 0.5) == doctest::Approx(0.5 * choose_dt(g, {1.0, 2.0}, 0.5)));
  CHECK_THROWS_AS(choose_dt(g, {1.0, 2.0}, 0.0), ConfigError);
  CHECK_THROWS_AS(choose_dt(g, {1.0, 2.0}, 1.0), ConfigError);
}

TEST_CASE("initialize builds the second-order ghost level") {
  const double dx = 0.1, dt = 0.02;
  const Grid2D g = make_grid(40, dx);
  const LameParams lame{0.6, 1.0};

  InitialData zero{VectorField2(g), VectorField2(g), 1.0};
  const SimState z = Integrator(lame, Lattice(g), dt).initialize(zero);
  CHECK(max_magnitude(z.u_prev) == 0.0);
  CHECK(max_magnitude(z.u_curr) == 0.0);
  CHECK(max_magnitude(z.v_accum) == 0.0);

  // u1 = 0: u_prev = u0 + dt^2/2 L u0.
  SimConfig cfg = bump_config(0.0, DampingCase::Undamped, 1.0, 10.0);
  InitialData data{VectorField2(g), VectorField2(g), 1.0};
  data.u0 = sample_initial_data(cfg.init, g).u0;
  const SimState s = Integrator(lame, Lattice(g), dt).initialize(data);
  const VectorField2 expect =
      combine(1.0, data.u0, 0.5 * dt * dt, apply_elastic(data.u0, lame, StencilSet(dx)));
  CHECK(max_abs_diff(s.u_prev, expect) < 1e-15);
  CHECK(s.t == 0.0);
  CHECK(s.dissipation == 0.0);
}

TEST_CASE("scheme velocity at t = 0 reproduces u1") {
  // With the centred damping the ghost level makes (u^1 - u^-1) / (2 dt) equal
  // u1 exactly, which is stronger than the O(dt^2) the start needs.
  SimConfig cfg = bump_config(3.0, DampingCase::StrongDamping, 1.0, 10.0);
  Grid2D g;
  const InitialData data = sampled(cfg, g);
  const Lattice V = sample_damping(cfg.damping, g).V;
  for (double dt : {0.02, 0.01}) {
    const SimState s = Integrator(cfg.lame, V, dt).initialize(data);
    double e = 0.0;
    for (int j = 0; j < g.n; ++j) {
      for (int i = 0; i < g.n; ++i) {
        e = std::max({e, std::abs(s.velocity1(i, j) - data.u1.c1(i, j)),
                      std::abs(s.velocity2(i, j) - data.u1.c2(i, j))});
      }
    }
    CHECK(e < 1e-11);
  }
}

TEST_CASE("V = 0 step is classical leapfrog; zero state stays zero") {
  const double dx = 0.1, dt = 0.03;
  const Grid2D g = make_grid(40, dx);
  const LameParams lame{0.6, 1.0};
  SimConfig cfg = bump_config(0.0, DampingCase::Undamped, 1.0, 10.0);
  const InitialData data = sample_initial_data(cfg.init, g);
  const Integrator it(lame, Lattice(g), dt);
  SimState s = it.initialize(data);
  for (int k = 0; k < 4; ++k) it.step(s);
  const VectorField2 expect = combine(1.0, combine(2.0, s.u_curr, -1.0, s.u_prev), dt * dt,
                                      apply_elastic(s.u_curr, lame, StencilSet(dx)));
  CHECK(max_abs_diff(s.u_next, expect) < 1e-14);
  CHECK(s.t == doctest::Approx(4 * dt));
  CHECK(s.step_index == 4);

  SimState z = it.initialize({VectorField2(g), VectorField2(g), 1.0});
  for (int k = 0; k < 10; ++k) it.step(z);
  CHECK(max_magnitude(z.u_curr) == 0.0);
  CHECK(z.dissipation == 0.0);
}

TEST_CASE("damped step matches the centred formula and dissipation grows") {
  const double dx = 0.1, dt = 0.03;
  SimConfig cfg = bump_config(4.0, DampingCase::StrongDamping, 2.0, 10.0);
  Grid2D g;
  const InitialData data = sampled(cfg, g);
  const Lattice V = sample_damping(cfg.damping, g).V;
  const Integrator it(cfg.lame, V, dt);
  SimState s = it.initialize(data);
  double last = 0.0;
  for (int k = 0; k < 20; ++k) {
    it.step(s);
    CHECK(s.dissipation >= last);
    last = s.dissipation;
  }
  CHECK(last > 0.0);
  const VectorField2 Lu = apply_elastic(s.u_curr, cfg.lame, StencilSet(dx));
  double worst = 0.0;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double h = 0.5 * dt * V(i, j);
      const double x1 = (2 * s.u_curr.c1(i, j) - (1 - h) * s.u_prev.c1(i, j) + dt * dt * Lu.c1(i, j)) / (1 + h);
      worst = std::max(worst, std::abs(x1 - s.u_next.c1(i, j)));
    }
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("v accumulates the trapezoid rule of u") {
  const double dt = 0.05;
  SimConfig cfg = bump_config(0.0, DampingCase::Undamped, 1.0, 10.0);
  Grid2D g;
  const InitialData data = sampled(cfg, g);
  const Integrator it(cfg.lame, Lattice(g), dt);
  SimState s = it.initialize(data);
  VectorField2 v(g);
  for (int k = 0; k < 5; ++k) {
    const VectorField2 before = s.u_curr;
    it.step(s);
    v = combine(1.0, v, 0.5 * dt, combine(1.0, before, 1.0, s.u_curr));
  }
  CHECK(max_abs_diff(v, s.v_accum) < 1e-15);
}

TEST_CASE("instability raises with the step index") {
  SimConfig cfg = bump_config(0.0, DampingCase::Undamped, 1.0, 10.0);
  Grid2D g;
  const InitialData data = sampled(cfg, g);
  const Integrator it(cfg.lame, Lattice(g), 0.3);  // far beyond the stability limit
  SimState s = it.initialize(data);
  long failed_at = -1;
  try {
    for (int k = 0; k < 20000; ++k) it.step(s);
  } catch (const InstabilityError& e) {
    failed_at = e.step();
  }
  CHECK(failed_at > 0);
  CHECK(failed_at == s.step_index + 1);
}

TEST_CASE("run: T = 0 gives a single record") {
  SimConfig cfg = bump_config(0.0, DampingCase::Undamped, 0.0, 10.0);
  const RunOutput out = run(cfg);
  REQUIRE(out.records.size() == 1);
  CHECK(out.records[0].t == 0.0);
  CHECK(out.steps == 0);
  CHECK(out.records[0].E_u > 0.0);
}

TEST_CASE("run: dt lands on T and records follow the stride") {
  SimConfig cfg = bump_config(4.0, DampingCase::StrongDamping, 3.0, 10.0);
  cfg.output_stride = 3;
  const RunOutput out = run(cfg);
  CHECK(out.dt <= choose_dt(out.grid, cfg.lame, cfg.cfl_safety));
  CHECK(out.steps % 3 == 0);
  CHECK(out.dt * out.steps == doctest::Approx(3.0));
  CHECK(out.records.size() == static_cast<std::size_t>(out.steps / 3 + 1));
  CHECK(out.records.back().t == doctest::Approx(3.0));
}

TEST_CASE("run is deterministic and linear in the data") {
  SimConfig cfg = bump_config(4.0, DampingCase::StrongDamping, 2.0, 10.0);
  const RunOutput a = run(cfg), b = run(cfg);
  CHECK(series_csv(a.records) == series_csv(b.records));

  SimConfig scaled_cfg = cfg;
  for (auto& bump : scaled_cfg.init.u0) bump.amplitude = {3.0 * bump.amplitude[0], 3.0 * bump.amplitude[1]};
  for (auto& bump : scaled_cfg.init.u1) bump.amplitude = {3.0 * bump.amplitude[0], 3.0 * bump.amplitude[1]};
  const RunOutput c = run(scaled_cfg);
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(c.records[k].E_u == doctest::Approx(9.0 * a.records[k].E_u).epsilon(1e-12));
    CHECK(c.records[k].dissipation == doctest::Approx(9.0 * a.records[k].dissipation).epsilon(1e-12));
  }
}

TEST_CASE("run: undamped mirror symmetry") {
  // Reflect x1 -> -x1: u1 component flips sign, u2 is kept.
  SimConfig cfg = bump_config(0.0, DampingCase::Undamped, 2.0, 10.0);
  cfg.init.u1[0].amplitude = {0.7, 1.0};
  SimConfig mirror = cfg;
  for (auto* list : {&mirror.init.u0, &mirror.init.u1}) {
    for (auto& bump : *list) {
      bump.center[0] = -bump.center[0];
      bump.amplitude[0] = -bump.amplitude[0];
    }
  }
  const RunOutput a = run(cfg), b = run(mirror);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(b.records[k].E_u == doctest::Approx(a.records[k].E_u).epsilon(1e-12));
    CHECK(b.records[k].l2_sq == doctest::Approx(a.records[k].l2_sq).epsilon(1e-12));
    CHECK(b.records[k].support_radius == doctest::Approx(a.records[k].support_radius));
  }
}

TEST_CASE("undamped energy drift converges at second order in dt") {
  auto drift = [](double cfl) {
    SimConfig cfg = bump_config(0.0, DampingCase::Undamped, 4.0, 10.0, cfl);
    cfg.suites = {false, false, false};
    return run(cfg, RunOptions{.multiplier = false}).energy_residual.value;
  };
  const double coarse = drift(0.4), fine = drift(0.2);
  const double order = std::log2(coarse / fine);
  CHECK(order >= 1.7);
  CHECK(order <= 2.3);
}
