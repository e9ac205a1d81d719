#include <doctest.h>

#include <cmath>

#include "elwave/operators.hpp"
#include "fields.hpp"

using namespace elwave;
using testutil::interior_max_error;
using testutil::sample;

namespace {

const LameParams kLame{0.6, 1.0};
const testutil::Fn kZero = [](double, double) { return 0.0; };

// Interior max error of L u + c^2 |k|^2 u for a plane wave d sin(k.x) on
// [-2, 2]^2, first component.
double plane_wave_error(double dx, double k1, double k2, double d1, double d2, double c) {
  const Grid2D g = make_grid(static_cast<int>(std::lround(4.0 / dx)), dx);
  const auto u = sample(
      g, [&](double x, double y) { return d1 * std::sin(k1 * x + k2 * y); },
      [&](double x, double y) { return d2 * std::sin(k1 * x + k2 * y); });
  const VectorField2 out = apply_elastic(u, kLame, StencilSet(dx));
  const double lam = c * c * (k1 * k1 + k2 * k2);
  return interior_max_error(
      out.c1, [&](double x, double y) { return -lam * d1 * std::sin(k1 * x + k2 * y); }, 2);
}

}  // namespace

TEST_CASE("elastic operator annihilates constants") {
  const Grid2D g = make_grid(20, 0.1);
  const auto one = [](double, double) { return 1.0; };
  const VectorField2 out = apply_elastic(sample(g, one, one), kLame, StencilSet(0.1));
  CHECK(interior_max_error(out.c1, kZero, 2) < 1e-12);
  CHECK(interior_max_error(out.c2, kZero, 2) < 1e-12);
}

TEST_CASE("elastic operator is exact on quadratics") {
  const double dx = 0.05;
  const Grid2D g = make_grid(40, dx);
  const StencilSet st(dx);
  // u1 = x1^2: out1 = 2 a^2 + 2 (b^2 - a^2) = 2 b^2, out2 = 0.
  VectorField2 out = apply_elastic(sample(g, [](double x, double) { return x * x; }, kZero), kLame, st);
  CHECK(interior_max_error(out.c1, [](double, double) { return 2.0; }, 2) < 1e-9);
  CHECK(interior_max_error(out.c2, kZero, 2) < 1e-9);
  // u1 = x1 x2: only the coupling survives, out2 = (b^2 - a^2).
  out = apply_elastic(sample(g, [](double x, double y) { return x * y; }, kZero), kLame, st);
  CHECK(interior_max_error(out.c1, kZero, 2) < 1e-9);
  CHECK(interior_max_error(out.c2, [](double, double) { return 0.64; }, 2) < 1e-9);
  // u2 = x2^2: out2 = 2 b^2.
  out = apply_elastic(sample(g, kZero, [](double, double y) { return y * y; }), kLame, st);
  CHECK(interior_max_error(out.c2, [](double, double) { return 2.0; }, 2) < 1e-9);
}

TEST_CASE("plane waves: P mode at speed b, S mode at speed a, second order") {
  const double k1 = 3.0, k2 = 4.0;  // |k| = 5
  // d parallel to k (curl-free) and perpendicular (divergence-free).
  const double p_c = plane_wave_error(0.02, k1, k2, 0.6, 0.8, kLame.b);
  const double p_f = plane_wave_error(0.01, k1, k2, 0.6, 0.8, kLame.b);
  const double s_c = plane_wave_error(0.02, k1, k2, 0.8, -0.6, kLame.a);
  const double s_f = plane_wave_error(0.01, k1, k2, 0.8, -0.6, kLame.a);
  // Relative to |L u| = c^2 |k|^2 max|d_1|.
  CHECK(p_f / (25.0 * 0.6) < 2e-3);
  CHECK(s_f / (0.36 * 25.0 * 0.8) < 2e-3);
  CHECK(p_c / p_f >= 3.5);
  CHECK(p_c / p_f <= 4.5);
  CHECK(s_c / s_f >= 3.5);
  CHECK(s_c / s_f <= 4.5);
}

TEST_CASE("elastic operator is linear and symmetric") {
  const double dx = 0.1;
  const Grid2D g = make_grid(30, dx);
  const StencilSet st(dx);
  const auto u = sample(
      g, [](double x, double y) { return std::exp(-x * x - 2 * y * y) * (1 + x); },
      [](double x, double y) { return std::sin(x) * std::cos(2 * y) * std::exp(-x * x - y * y); });
  const auto w = sample(
      g, [](double x, double y) { return std::cos(x * y) * std::exp(-y * y - x * x); },
      [](double x, double y) { return (x - y) * std::exp(-(x + 0.3) * (x + 0.3) - y * y); });
  const VectorField2 lhs = apply_elastic(combine(2.5, u, -0.7, w), kLame, st);
  const VectorField2 rhs = combine(2.5, apply_elastic(u, kLame, st), -0.7, apply_elastic(w, kLame, st));
  double diff = 0.0, scale = 0.0;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      diff = std::max({diff, std::abs(lhs.c1(i, j) - rhs.c1(i, j)), std::abs(lhs.c2(i, j) - rhs.c2(i, j))});
      scale = std::max(scale, std::abs(rhs.c1(i, j)));
    }
  }
  CHECK(diff <= 1e-13 * scale);

  // <w, L u> = <L w, u> with the zero halo: the lattice operator is self-adjoint.
  const double a = testutil::dot(w, apply_elastic(u, kLame, st));
  const double b = testutil::dot(apply_elastic(w, kLame, st), u);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("divergence") {
  const double dx = 0.1;
  const Grid2D g = make_grid(20, dx);
  const StencilSet st(dx);
  const auto id = sample(g, [](double x, double) { return x; }, [](double, double y) { return y; });
  CHECK(interior_max_error(divergence(id, st), [](double, double) { return 2.0; }, 1) < 1e-12);
  const auto rot = sample(g, [](double, double y) { return y; }, [](double x, double) { return -x; });
  CHECK(interior_max_error(divergence(rot, st), kZero, 1) < 1e-12);

  // Transverse plane wave: the divergence vanishes at second order.
  auto transverse = [](double h) {
    const Grid2D gg = make_grid(static_cast<int>(std::lround(4.0 / h)), h);
    const auto u = sample(
        gg, [](double x, double y) { return 2.0 * std::sin(x + 2.0 * y); },
        [](double x, double y) { return -1.0 * std::sin(x + 2.0 * y); });
    return interior_max_error(divergence(u, StencilSet(h)), kZero, 1);
  };
  const double e_c = transverse(0.04), e_f = transverse(0.02);
  CHECK(e_c > 0.0);
  CHECK(e_c / e_f == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("gradient energy density") {
  const double dx = 0.1;
  const Grid2D g = make_grid(20, dx);
  const StencilSet st(dx);
  const auto lin = sample(g, [](double x, double) { return x; }, kZero);
  CHECK(interior_max_error(gradient_energy_density(lin, st), [](double, double) { return 1.0; }, 1) < 1e-12);
  const auto one = [](double, double) { return 1.0; };
  CHECK(interior_max_error(gradient_energy_density(sample(g, one, one), st), kZero, 1) < 1e-12);

  // Bump (1 - |x|^2)^4 times amplitude (1, 2): int |grad u|^2 = 5 * 8 pi / 7.
  auto bump_integral = [](double h) {
    const Grid2D gg = make_grid(static_cast<int>(std::lround(3.0 / h)), h);
    const auto s = [](double x, double y) {
      const double w = std::max(0.0, 1.0 - x * x - y * y);
      return w * w * w * w;
    };
    const auto u = sample(gg, s, [&](double x, double y) { return 2.0 * s(x, y); });
    const Lattice d = gradient_energy_density(u, StencilSet(h));
    double sum = 0.0;
    for (int j = 0; j < gg.n; ++j) {
      for (int i = 0; i < gg.n; ++i) sum += d(i, j);
    }
    return sum * h * h;
  };
  const double exact = 5.0 * 8.0 * M_PI / 7.0;
  const double e_c = std::abs(bump_integral(0.05) - exact);
  const double e_f = std::abs(bump_integral(0.025) - exact);
  CHECK(e_f / exact < 5e-3);
  CHECK(std::log2(e_c / e_f) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("five-point laplacian") {
  const double dx = 0.1;
  const Grid2D g = make_grid(20, dx);
  const StencilSet st(dx);
  const Lattice q = sample(g, [](double x, double y) { return x * x + y * y; });
  CHECK(interior_max_error(laplacian(q, st), [](double, double) { return 4.0; }, 1) < 1e-10);
  CHECK(interior_max_error(laplacian(sample(g, [](double, double) { return 7.0; }), st), kZero, 1) < 1e-12);

  auto sine = [](double h) {
    const Grid2D gg = make_grid(static_cast<int>(std::lround(4.0 / h)), h);
    const Lattice f = sample(gg, [](double x, double) { return std::sin(3.0 * x); });
    return interior_max_error(laplacian(f, StencilSet(h)),
                              [](double x, double) { return -9.0 * std::sin(3.0 * x); }, 1);
  };
  const double e_c = sine(0.04), e_f = sine(0.02);
  CHECK(e_c / e_f == doctest::Approx(4.0).epsilon(0.05));

  VectorField2 v(g);
  v.c2 = q;
  CHECK(laplacian(v, st).c2(10, 10) == doctest::Approx(4.0));
  CHECK_THROWS_AS(laplacian(q, StencilSet(0.2)), GridMismatch);
}
