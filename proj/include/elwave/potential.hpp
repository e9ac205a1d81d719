#pragma once

#include <array>
#include <span>
#include <vector>

#include "elwave/lattice.hpp"
#include "elwave/operators.hpp"

namespace elwave {

/// rho = u1 + V u0 sampled on a lattice, with the norms the bounds use.
/// Norms combine components as |rho| = (rho_1^2 + rho_2^2)^(1/2).
struct SourceDensity {
  VectorField2 rho;
  double L = 0.0;
  double l1_norm = 0.0;
  double linf_norm = 0.0;
};

/// Fails if rho is nonzero at a node with |x| > L.
SourceDensity make_source(VectorField2 rho, double L);

/// int int log|z| dz over the rectangle [p1, q1] x [p2, q2].
double log_rectangle_integral(double p1, double q1, double p2, double q2);

/// grad_x of int_cell log|x - y| dy for the rectangle of z = x - y values
/// [p1, q1] x [p2, q2].
std::array<double, 2> log_gradient_rectangle_integral(double p1, double q1, double p2, double q2);

/// h(x) = -(1/2 pi) int log|x - y| rho(y) dy for a lattice source.
///
/// Each source cell contributes its exact cell integral of the kernel when the
/// evaluation point is nearer than `near_cells` * dx, and the midpoint value
/// dx^2 log|x - y| otherwise. Gradients use the same split with the kernel
/// gradient (x - y) / |x - y|^2.
class NewtonPotential {
 public:
  NewtonPotential(const SourceDensity& source, double near_cells = 2.0);

  std::array<double, 2> value(double x1, double x2) const;
  /// (d1 h^1, d2 h^1, d1 h^2, d2 h^2).
  std::array<double, 4> gradient(double x1, double x2) const;
  /// |grad h| = (sum of the four squares)^(1/2).
  double gradient_magnitude(double x1, double x2) const;

  double spacing() const { return dx_; }
  double support_radius() const { return L_; }
  std::size_t source_nodes() const { return nodes_.size(); }

 private:
  struct Node {
    double y1, y2, r1, r2;
  };
  std::vector<Node> nodes_;
  double dx_ = 0.0;
  double L_ = 0.0;
  double near2_ = 0.0;
};

/// h and grad h on every node of a lattice.
struct PotentialField {
  VectorField2 h;
  /// d1 h^1, d2 h^1, d1 h^2, d2 h^2.
  std::array<Lattice, 4> grad;
};

PotentialField newton_potential(const NewtonPotential& potential, const Grid2D& eval_grid);

struct PoissonResidual {
  double value = 0.0;
  bool absolute = false;
};

/// ||-Delta_h h - rho|| / ||rho|| in discrete L2 over nodes with |x| <= L.
/// `field` must live on the source lattice.
PoissonResidual poisson_residual(const PotentialField& field, const SourceDensity& source,
                                 const StencilSet& st);

/// Polar sample points on the annulus r_inner <= |x| <= r_outer.
struct RingSampling {
  int radii = 24;
  int angles = 32;
};

constexpr double kQuadratureSlack = 0.05;

struct FarFieldBound {
  double r_inner = 0.0;
  double r_outer = 0.0;
  /// sup |x| |grad h(x)| over the samples.
  double sup = 0.0;
  /// (1 / pi) ||rho||_L1.
  double bound = 0.0;
  bool pass = false;
};

FarFieldBound far_field_bound(const NewtonPotential& potential, const SourceDensity& source,
                              double r_outer, RingSampling sampling = {},
                              double slack = kQuadratureSlack);

/// int_{|x| <= radius} |grad h|^2 by Gauss-Legendre in r (panels split at L
/// and 2L, logarithmic in r beyond 2L) and the trapezoid rule in angle.
double grad_h_disk_integral(const NewtonPotential& potential, double radius);

/// int_{r_inner <= |x| <= r_outer} |grad h|^2.
double grad_h_ring_integral(const NewtonPotential& potential, double r_inner, double r_outer);

struct GrowthSample {
  double t = 0.0;
  double radius = 0.0;  // 2L + b t
  double ring = 0.0;    // int_{2L <= |x| <= 2L + bt} |grad h|^2
  double total = 0.0;   // I_h + ring
  double envelope = 0.0;  // I_h + 2 pi C^2 ||rho||_1^2 log(2L + bt), C = 1/pi
  bool pass = false;
};

struct GrowthReport {
  double I_h = 0.0;
  /// max |grad h| over |x| <= 2L and the bound 4 L ||rho||_inf.
  double max_grad_inner = 0.0;
  double pointwise_bound = 0.0;
  bool pointwise_pass = false;
  /// 64 pi L^4 ||rho||_inf^2.
  double I_h_bound = 0.0;
  bool I_h_pass = false;
  std::vector<GrowthSample> samples;
  bool growth_pass = false;
};

/// Dirichlet integral near the source, its growth on expanding disks, and the
/// pointwise bound on |x| <= 2L. `inner_grid` supplies extra pointwise sample
/// nodes (any lattice; nodes outside |x| <= 2L are skipped).
GrowthReport ih_and_growth(const NewtonPotential& potential, const SourceDensity& source,
                           std::span<const double> t_samples, double b,
                           const Grid2D* inner_grid = nullptr, double slack = kQuadratureSlack);

/// Centred sub-lattice of `field` with n_sub nodes per axis (same parity as n).
VectorField2 crop(const VectorField2& field, int n_sub);

}  // namespace elwave
