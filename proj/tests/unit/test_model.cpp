#include <doctest.h>

#include <cmath>

#include "elwave/model.hpp"

using namespace elwave;

namespace {

SimConfig sizing(double L, double b, double T, double margin, double res) {
  SimConfig c;
  c.lame = {0.5 * b, b};
  c.init.L = L;
  c.T = T;
  c.grid_margin = margin;
  c.resolution = res;
  return c;
}

}  // namespace

TEST_CASE("build_grid sizing rule") {
  const Grid2D g = build_grid(sizing(1.0, 1.0, 10.0, 1.0, 10.0));
  CHECK(g.radius == doctest::Approx(12.0));
  CHECK(g.n == 240);
  CHECK(g.spacing == doctest::Approx(0.1));

  const Grid2D far = build_grid(sizing(1.0, 2.0, 200.0, 2.0, 2.0));
  CHECK(far.radius == doctest::Approx(403.0));
  CHECK(far.n == 1612);

  // 8060^2 nodes does not fit a 4 GiB budget.
  CHECK_THROWS_AS(build_grid(sizing(1.0, 2.0, 200.0, 2.0, 10.0)), ResourceError);
  CHECK_THROWS_AS(build_grid(sizing(1.0, 1.0, 0.0, 1.0, 10.0)), ConfigError);

  // A margin below 4 dx is raised to 4 dx; tiny grids are padded to 16.
  const Grid2D tight = build_grid(sizing(1.0, 1.0, 1.0, 0.0, 10.0));
  CHECK(tight.radius == doctest::Approx(2.4));
  CHECK(build_grid(sizing(0.1, 1.0, 0.1, 0.0, 10.0)).n == 16);
}

TEST_CASE("critical damping values and the two-sided bound") {
  CHECK(critical_damping(3.0, 0.0, 0.0) == doctest::Approx(3.0));
  CHECK(critical_damping(3.0, 1.0, 0.0) == doctest::Approx(2.1213203436));
  CHECK(critical_damping(3.0, 0.6, 0.8) == doctest::Approx(3.0 / std::sqrt(2.0)));

  const Grid2D g = make_grid(64, 0.25);
  const DampingField d = sample_damping(DampingProfile::critical(3.0), g);
  double worst_low = 1e300, worst_high = -1e300;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double r = std::hypot(g.coord(i), g.coord(j));
      worst_low = std::min(worst_low, d.V(i, j) - 3.0 / (1.0 + r));
      worst_high = std::max(worst_high, d.V(i, j) - 3.0);
    }
  }
  CHECK(worst_low >= 0.0);
  CHECK(worst_high <= 0.0);
  CHECK(d.linf <= 3.0);
  CHECK(d.linf == doctest::Approx(critical_damping(3.0, 0.125, 0.125)));
}

TEST_CASE("zero and tabulated damping") {
  const Grid2D g = make_grid(16, 0.5);
  const DampingField z = sample_damping(DampingProfile::zero(), g);
  CHECK(z.linf == 0.0);
  CHECK(z.V(5, 7) == 0.0);

  DampingProfile tab{DampingKind::Tabulated, 2.0, {}};
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) tab.table.push_back(2.0 / (1.0 + std::hypot(g.coord(i), g.coord(j))));
  }
  CHECK(sample_damping(tab, g).V(3, 4) == doctest::Approx(tab.table[4 * 16 + 3]));

  tab.table[5 * 16 + 9] = 0.0;
  try {
    sample_damping(tab, g);
    FAIL("zero node accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("(9, 5)") != std::string::npos);
  }
  tab.table.pop_back();
  CHECK_THROWS_AS(sample_damping(tab, g), ConfigError);
}

TEST_CASE("initial data vanish outside |x| <= L") {
  InitialDataSpec spec;
  spec.L = 1.0;
  spec.u0.push_back({{0.0, 0.0}, 1.0, {1.0, -2.0}});
  spec.u1.push_back({{0.3, 0.2}, 0.5, {0.0, 1.0}});
  const Grid2D g = make_grid(60, 0.1);
  const InitialData d = sample_initial_data(spec, g);

  double outside = 0.0, peak = 0.0;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double x1 = g.coord(i), x2 = g.coord(j);
      const double m = std::hypot(d.u0.c1(i, j), d.u0.c2(i, j)) + std::hypot(d.u1.c1(i, j), d.u1.c2(i, j));
      if (std::hypot(x1, x2) > 1.0) outside = std::max(outside, m);
      peak = std::max(peak, m);
    }
  }
  CHECK(outside == 0.0);
  CHECK(peak > 0.5);

  // (1 - q)^4 at a node with q = |x|^2.
  const double x1 = g.coord(32), x2 = g.coord(30);
  const double w = 1.0 - (x1 * x1 + x2 * x2);
  CHECK(d.u0.c2(32, 30) == doctest::Approx(-2.0 * w * w * w * w));

  spec.u1.push_back({{0.8, 0.0}, 0.5, {1.0, 0.0}});
  CHECK_THROWS_AS(sample_initial_data(spec, g), ConfigError);
}

TEST_CASE("region omega grows with t") {
  const RegionOmega early{1.0, 1.0, 2.0}, late{3.0, 1.0, 2.0};
  CHECK(early.radius() == doctest::Approx(3.0));
  CHECK(early.contains(2.2, 2.2) == false);
  CHECK(late.contains(2.2, 2.2));
  for (double x = 0.0; x < 10.0; x += 0.37) {
    if (early.contains(x, 0.5 * x)) CHECK(late.contains(x, 0.5 * x));
  }
}

TEST_CASE("config validation mirrors the case split") {
  SimConfig c = sizing(1.0, 1.0, 10.0, 1.0, 10.0);
  c.lame = {0.6, 1.0};
  c.init.u0.push_back({{0.0, 0.0}, 1.0, {1.0, 0.0}});
  c.damping = DampingProfile::critical(4.0);
  c.damping_case = DampingCase::StrongDamping;
  CHECK_NOTHROW(validate(c));

  c.damping.V0 = 2.0;  // V0 = 2b is intermediate
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.damping_case = DampingCase::IntermediateDamping;
  c.delta = 0.5;
  CHECK_NOTHROW(validate(c));
  c.delta = 1.0;  // needs delta < V0/b - 1
  CHECK_THROWS_AS(validate(c), ConfigError);

  c.damping_case = DampingCase::Undamped;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.damping = DampingProfile::zero();
  CHECK_NOTHROW(validate(c));

  c.lame = {1.0, 0.6};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.lame = {0.6, 1.0};
  c.cfl_safety = 0.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
}
