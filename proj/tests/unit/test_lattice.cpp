#include <doctest.h>

#include <cmath>
#include <limits>

#include "elwave/lattice.hpp"

using namespace elwave;

TEST_CASE("grid nodes sit at cell centres of [-R, R]^2") {
  const Grid2D g = make_grid(40, 0.25);
  CHECK(g.radius == doctest::Approx(5.0));
  CHECK(g.n * g.spacing == doctest::Approx(2.0 * g.radius));
  CHECK(g.coord(0) == doctest::Approx(-5.0 + 0.125));
  CHECK(g.coord(39) == doctest::Approx(5.0 - 0.125));
  CHECK(g.coord(19) == doctest::Approx(-g.coord(20)));
  CHECK(g.size() == 1600u);
  CHECK_THROWS_AS(make_grid(0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(10, -1.0), std::invalid_argument);
}

TEST_CASE("lattice halo stays zero and indexing is row-major") {
  Lattice f(make_grid(16, 0.1), 3.0);
  CHECK(f(0, 0) == 3.0);
  CHECK(f(15, 15) == 3.0);
  const double* r = f.row(4);
  CHECK(r[-1] == 0.0);
  CHECK(r[-2] == 0.0);
  CHECK(r[16] == 0.0);
  CHECK(r[17] == 0.0);
  CHECK(f.row(0)[-f.stride()] == 0.0);
  CHECK(f.row(15)[2 * f.stride()] == 0.0);
  f(3, 7) = -1.5;
  CHECK(f.row(7)[3] == -1.5);
  f.clear();
  CHECK(f(3, 7) == 0.0);
}

TEST_CASE("combine, scaled and magnitude helpers") {
  const Grid2D g = make_grid(16, 0.1);
  VectorField2 x(g), y(g);
  x.c1(2, 3) = 3.0;
  x.c2(2, 3) = 4.0;
  y.c1(2, 3) = 1.0;
  const VectorField2 z = combine(2.0, x, -1.0, y);
  CHECK(z.c1(2, 3) == 5.0);
  CHECK(z.c2(2, 3) == 8.0);
  CHECK(max_magnitude(x) == doctest::Approx(5.0));
  CHECK(max_magnitude(scaled(-2.0, x)) == doctest::Approx(10.0));
  CHECK(all_finite(x));
  x.c2(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(all_finite(x));

  VectorField2 other(make_grid(18, 0.1));
  CHECK_THROWS_AS(combine(1.0, x, 1.0, other), GridMismatch);
}
