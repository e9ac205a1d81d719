#include "elwave/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "elwave/model.hpp"

namespace elwave {

namespace {

constexpr double kPi = std::numbers::pi;

// Antiderivative of log|z| in both variables:
// d^2/dx dy F = log sqrt(x^2 + y^2).
double log_antiderivative(double x, double y) {
  const double r2 = x * x + y * y;
  if (r2 == 0.0) return 0.0;
  double out = x * y * (std::log(r2) - 3.0);
  if (x != 0.0) out += x * x * std::atan(y / x);
  if (y != 0.0) out += y * y * std::atan(x / y);
  return 0.5 * out;
}

// int log sqrt(s^2 + t^2) dt.
double log_line_antiderivative(double s, double t) {
  const double r2 = s * s + t * t;
  if (r2 == 0.0) return 0.0;
  double out = 0.5 * t * std::log(r2) - t;
  if (s != 0.0) out += s * std::atan(t / s);
  return out;
}

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

GaussRule gauss_legendre(int n) {
  GaussRule rule{std::vector<double>(static_cast<std::size_t>(n)),
                 std::vector<double>(static_cast<std::size_t>(n))};
  for (int k = 0; k < n; ++k) {
    double x = std::cos(kPi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[static_cast<std::size_t>(k)] = x;
    rule.w[static_cast<std::size_t>(k)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& rule16() {
  static const GaussRule r = gauss_legendre(16);
  return r;
}

constexpr int kAngles = 64;

// Angular trapezoid of |grad h|^2 on the circle of radius r.
double circle_average_sq(const NewtonPotential& pot, double r) {
  double acc = 0.0;
  for (int k = 0; k < kAngles; ++k) {
    const double th = 2.0 * kPi * (k + 0.5) / kAngles;
    const double m = pot.gradient_magnitude(r * std::cos(th), r * std::sin(th));
    acc += m * m;
  }
  return acc * (2.0 * kPi / kAngles);
}

// int_{a}^{b} (circle integral) r dr with Gauss-Legendre on linear panels.
double radial_panels(const NewtonPotential& pot, double a, double b, int panels) {
  if (!(b > a)) return 0.0;
  const GaussRule& g = rule16();
  double total = 0.0;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double half = 0.5 * width;
    for (std::size_t k = 0; k < g.x.size(); ++k) {
      const double r = lo + half * (1.0 + g.x[k]);
      total += half * g.w[k] * r * circle_average_sq(pot, r);
    }
  }
  return total;
}

// Same integral in s = log r, panels of width <= 0.5 in s.
double log_radial_panels(const NewtonPotential& pot, double a, double b) {
  if (!(b > a)) return 0.0;
  const GaussRule& g = rule16();
  const double sa = std::log(a);
  const double sb = std::log(b);
  const int panels = std::max(1, static_cast<int>(std::ceil((sb - sa) / 0.5)));
  const double width = (sb - sa) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = sa + p * width;
    const double half = 0.5 * width;
    for (std::size_t k = 0; k < g.x.size(); ++k) {
      const double r = std::exp(lo + half * (1.0 + g.x[k]));
      total += half * g.w[k] * r * r * circle_average_sq(pot, r);
    }
  }
  return total;
}

}  // namespace

SourceDensity make_source(VectorField2 rho, double L) {
  const Grid2D& g = rho.grid();
  SourceDensity s;
  s.L = L;
  for (int j = 0; j < g.n; ++j) {
    const double x2 = g.coord(j);
    for (int i = 0; i < g.n; ++i) {
      const double x1 = g.coord(i);
      const double m = std::hypot(rho.c1(i, j), rho.c2(i, j));
      if (m == 0.0) continue;
      if (x1 * x1 + x2 * x2 > L * L) {
        std::ostringstream msg;
        msg << "source density nonzero outside |x| <= " << L << " at (" << x1 << ", " << x2
            << ")";
        throw std::invalid_argument(msg.str());
      }
      s.l1_norm += m;
      s.linf_norm = std::max(s.linf_norm, m);
    }
  }
  s.l1_norm *= g.cell_area();
  s.rho = std::move(rho);
  return s;
}

double log_rectangle_integral(double p1, double q1, double p2, double q2) {
  return log_antiderivative(q1, q2) - log_antiderivative(p1, q2) - log_antiderivative(q1, p2) +
         log_antiderivative(p1, p2);
}

std::array<double, 2> log_gradient_rectangle_integral(double p1, double q1, double p2,
                                                      double q2) {
  const double d1 = log_line_antiderivative(q1, q2) - log_line_antiderivative(q1, p2) -
                    log_line_antiderivative(p1, q2) + log_line_antiderivative(p1, p2);
  const double d2 = log_line_antiderivative(q2, q1) - log_line_antiderivative(q2, p1) -
                    log_line_antiderivative(p2, q1) + log_line_antiderivative(p2, p1);
  return {d1, d2};
}

NewtonPotential::NewtonPotential(const SourceDensity& source, double near_cells)
    : dx_(source.rho.grid().spacing), L_(source.L) {
  const Grid2D& g = source.rho.grid();
  // Cells at exactly near_cells * dx use the midpoint rule; the small margin
  // keeps that choice independent of roundoff in the offsets.
  near2_ = near_cells * near_cells * dx_ * dx_ * (1.0 - 1e-9);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double r1 = source.rho.c1(i, j);
      const double r2 = source.rho.c2(i, j);
      if (r1 == 0.0 && r2 == 0.0) continue;
      nodes_.push_back({g.coord(i), g.coord(j), r1, r2});
    }
  }
}

std::array<double, 2> NewtonPotential::value(double x1, double x2) const {
  const double h = 0.5 * dx_;
  const double area = dx_ * dx_;
  double s1 = 0.0, s2 = 0.0;
  for (const Node& nd : nodes_) {
    const double z1 = x1 - nd.y1;
    const double z2 = x2 - nd.y2;
    const double r2 = z1 * z1 + z2 * z2;
    const double k = r2 < near2_ ? log_rectangle_integral(z1 - h, z1 + h, z2 - h, z2 + h)
                                 : 0.5 * area * std::log(r2);
    s1 += k * nd.r1;
    s2 += k * nd.r2;
  }
  const double c = -1.0 / (2.0 * kPi);
  return {c * s1, c * s2};
}

std::array<double, 4> NewtonPotential::gradient(double x1, double x2) const {
  const double h = 0.5 * dx_;
  const double area = dx_ * dx_;
  double g11 = 0.0, g12 = 0.0, g21 = 0.0, g22 = 0.0;
  for (const Node& nd : nodes_) {
    const double z1 = x1 - nd.y1;
    const double z2 = x2 - nd.y2;
    const double r2 = z1 * z1 + z2 * z2;
    double k1, k2;
    if (r2 < near2_) {
      const auto k = log_gradient_rectangle_integral(z1 - h, z1 + h, z2 - h, z2 + h);
      k1 = k[0];
      k2 = k[1];
    } else {
      const double w = area / r2;
      k1 = w * z1;
      k2 = w * z2;
    }
    g11 += k1 * nd.r1;
    g12 += k2 * nd.r1;
    g21 += k1 * nd.r2;
    g22 += k2 * nd.r2;
  }
  const double c = -1.0 / (2.0 * kPi);
  return {c * g11, c * g12, c * g21, c * g22};
}

double NewtonPotential::gradient_magnitude(double x1, double x2) const {
  const auto g = gradient(x1, x2);
  return std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
}

PotentialField newton_potential(const NewtonPotential& potential, const Grid2D& eval_grid) {
  PotentialField out{VectorField2(eval_grid),
                     {Lattice(eval_grid), Lattice(eval_grid), Lattice(eval_grid),
                      Lattice(eval_grid)}};
  const int n = eval_grid.n;
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < n; ++j) {
    const double x2 = eval_grid.coord(j);
    for (int i = 0; i < n; ++i) {
      const double x1 = eval_grid.coord(i);
      const auto h = potential.value(x1, x2);
      const auto g = potential.gradient(x1, x2);
      out.h.c1(i, j) = h[0];
      out.h.c2(i, j) = h[1];
      for (int k = 0; k < 4; ++k) out.grad[static_cast<std::size_t>(k)](i, j) = g[static_cast<std::size_t>(k)];
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(out.h.c1(i, j)) || !std::isfinite(out.h.c2(i, j))) {
        throw std::runtime_error("newton_potential: non-finite value on the evaluation lattice");
      }
    }
  }
  return out;
}

PoissonResidual poisson_residual(const PotentialField& field, const SourceDensity& source,
                                 const StencilSet& st) {
  const Grid2D& g = field.h.grid();
  require_same_grid(g, source.rho.grid(), "poisson_residual");
  const VectorField2 lap = laplacian(field.h, st);
  const double L2 = source.L * source.L;
  double err = 0.0, ref = 0.0;
  for (int j = 0; j < g.n; ++j) {
    const double x2 = g.coord(j);
    for (int i = 0; i < g.n; ++i) {
      const double x1 = g.coord(i);
      if (x1 * x1 + x2 * x2 > L2) continue;
      const double e1 = -lap.c1(i, j) - source.rho.c1(i, j);
      const double e2 = -lap.c2(i, j) - source.rho.c2(i, j);
      err += e1 * e1 + e2 * e2;
      ref += source.rho.c1(i, j) * source.rho.c1(i, j) + source.rho.c2(i, j) * source.rho.c2(i, j);
    }
  }
  if (ref == 0.0) return {std::sqrt(err * g.cell_area()), true};
  return {std::sqrt(err / ref), false};
}

FarFieldBound far_field_bound(const NewtonPotential& potential, const SourceDensity& source,
                              double r_outer, RingSampling sampling, double slack) {
  FarFieldBound out;
  out.r_inner = 2.0 * source.L;
  out.r_outer = std::max(r_outer, out.r_inner);
  out.bound = source.l1_norm / kPi;
  const double ratio = out.r_outer / out.r_inner;
  for (int a = 0; a < sampling.radii; ++a) {
    const double frac = sampling.radii > 1 ? static_cast<double>(a) / (sampling.radii - 1) : 0.0;
    const double r = out.r_inner * std::pow(ratio, frac);
    for (int k = 0; k < sampling.angles; ++k) {
      const double th = 2.0 * kPi * k / sampling.angles;
      out.sup = std::max(out.sup, r * potential.gradient_magnitude(r * std::cos(th), r * std::sin(th)));
    }
  }
  out.pass = out.sup <= out.bound * (1.0 + slack);
  return out;
}

double grad_h_disk_integral(const NewtonPotential& potential, double radius) {
  const double L = potential.support_radius();
  double total = radial_panels(potential, 0.0, std::min(radius, L), 2);
  if (radius > L) total += radial_panels(potential, L, std::min(radius, 2.0 * L), 2);
  if (radius > 2.0 * L) total += log_radial_panels(potential, 2.0 * L, radius);
  return total;
}

double grad_h_ring_integral(const NewtonPotential& potential, double r_inner, double r_outer) {
  if (!(r_outer > r_inner)) return 0.0;
  const double L = potential.support_radius();
  if (r_inner >= L) return log_radial_panels(potential, r_inner, r_outer);
  return grad_h_disk_integral(potential, r_outer) - grad_h_disk_integral(potential, r_inner);
}

GrowthReport ih_and_growth(const NewtonPotential& potential, const SourceDensity& source,
                           std::span<const double> t_samples, double b, const Grid2D* inner_grid,
                           double slack) {
  const double L = source.L;
  GrowthReport out;
  out.I_h = grad_h_disk_integral(potential, 2.0 * L);

  out.pointwise_bound = 4.0 * L * source.linf_norm;
  for (int a = 0; a <= 16; ++a) {
    const double r = 2.0 * L * a / 16.0;
    for (int k = 0; k < 32; ++k) {
      const double th = 2.0 * kPi * k / 32.0;
      out.max_grad_inner =
          std::max(out.max_grad_inner, potential.gradient_magnitude(r * std::cos(th), r * std::sin(th)));
    }
  }
  if (inner_grid != nullptr) {
    for (int j = 0; j < inner_grid->n; ++j) {
      const double x2 = inner_grid->coord(j);
      for (int i = 0; i < inner_grid->n; ++i) {
        const double x1 = inner_grid->coord(i);
        if (x1 * x1 + x2 * x2 > 4.0 * L * L) continue;
        out.max_grad_inner = std::max(out.max_grad_inner, potential.gradient_magnitude(x1, x2));
      }
    }
  }
  out.pointwise_pass = out.max_grad_inner <= out.pointwise_bound * (1.0 + slack);
  out.I_h_bound = 64.0 * kPi * std::pow(L, 4) * source.linf_norm * source.linf_norm;
  out.I_h_pass = out.I_h <= out.I_h_bound * (1.0 + slack);

  // 2 pi C^2 with C = 1/pi.
  const double growth_coeff = 2.0 / kPi * source.l1_norm * source.l1_norm;
  out.growth_pass = true;
  for (const double t : t_samples) {
    GrowthSample s;
    s.t = t;
    s.radius = 2.0 * L + b * t;
    s.ring = grad_h_ring_integral(potential, 2.0 * L, s.radius);
    s.total = out.I_h + s.ring;
    s.envelope = out.I_h + growth_coeff * std::log(s.radius);
    s.pass = s.total <= s.envelope * (1.0 + slack);
    out.growth_pass = out.growth_pass && s.pass;
    out.samples.push_back(s);
  }
  return out;
}

VectorField2 crop(const VectorField2& field, int n_sub) {
  const int n = field.grid().n;
  if (n_sub > n || (n - n_sub) % 2 != 0) {
    throw std::invalid_argument("crop: sub-lattice must be smaller with matching parity");
  }
  const int off = (n - n_sub) / 2;
  VectorField2 out(make_grid(n_sub, field.grid().spacing));
  for (int j = 0; j < n_sub; ++j) {
    for (int i = 0; i < n_sub; ++i) {
      out.c1(i, j) = field.c1(i + off, j + off);
      out.c2(i, j) = field.c2(i + off, j + off);
    }
  }
  return out;
}

}  // namespace elwave
