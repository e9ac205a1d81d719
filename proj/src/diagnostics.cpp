#include "elwave/diagnostics.hpp"

#include "elwave/fpenv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace elwave {

namespace {

// Row partial sums are combined in row order so results do not depend on the
// number of threads.
template <std::size_t K, typename RowFn>
std::array<double, K> row_reduce(int n, RowFn&& fn) {
  std::vector<std::array<double, K>> rows(static_cast<std::size_t>(n));
#pragma omp parallel
  {
    flush_subnormals();
#pragma omp for schedule(static)
    for (int j = 0; j < n; ++j) rows[static_cast<std::size_t>(j)] = fn(j);
  }
  std::array<double, K> total{};
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < K; ++k) total[k] += r[k];
  }
  return total;
}

}  // namespace

FieldMoments field_moments(const SimState& state, const Lattice& V, const StencilSet& st) {
  const Grid2D& g = state.grid();
  require_same_grid(g, V.grid(), "field_moments");
  const int n = g.n;
  const std::ptrdiff_t s = state.u_curr.c1.stride();
  const double inv2dt = 1.0 / (2.0 * state.dt);

  auto sums = row_reduce<7>(n, [&](int j) {
    std::array<double, 7> acc{};
    const double* c1 = state.u_curr.c1.row(j);
    const double* c2 = state.u_curr.c2.row(j);
    const double* p1 = state.u_prev.c1.row(j);
    const double* p2 = state.u_prev.c2.row(j);
    const double* n1 = state.u_next.c1.row(j);
    const double* n2 = state.u_next.c2.row(j);
    const double* v = V.row(j);
    for (int i = 0; i < n; ++i) {
      const NodeGradient gr = gradient_at(c1 + i, c2 + i, s, st.first);
      const double ut1 = (n1[i] - p1[i]) * inv2dt;
      const double ut2 = (n2[i] - p2[i]) * inv2dt;
      const double kin = ut1 * ut1 + ut2 * ut2;
      const double mag = c1[i] * c1[i] + c2[i] * c2[i];
      const double div = gr.div();
      acc[0] += kin;
      acc[1] += gr.grad_sq();
      acc[2] += div * div;
      acc[3] += mag;
      acc[4] += v[i] * kin;
      acc[5] += v[i] * mag;
      acc[6] += c1[i] * ut1 + c2[i] * ut2;
    }
    return acc;
  });

  const double area = g.cell_area();
  return FieldMoments{sums[0] * area, sums[1] * area, sums[2] * area, sums[3] * area,
                      sums[4] * area, sums[5] * area, sums[6] * area};
}

double total_energy(const FieldMoments& m, const LameParams& lame) {
  return 0.5 * (m.kinetic + m.strain(lame));
}

double total_energy(const SimState& state, const LameParams& lame, const StencilSet& st) {
  const Lattice zero(state.grid());
  return total_energy(field_moments(state, zero, st), lame);
}

double l2_norm_sq(const VectorField2& u) {
  const int n = u.grid().n;
  auto sums = row_reduce<1>(n, [&](int j) {
    const double* a = u.c1.row(j);
    const double* b = u.c2.row(j);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += a[i] * a[i] + b[i] * b[i];
    return std::array<double, 1>{acc};
  });
  return sums[0] * u.grid().cell_area();
}

double support_radius(const VectorField2& u, double rel_threshold) {
  const double peak = max_magnitude(u);
  return support_radius_with_peak(u, peak * peak, rel_threshold);
}

double support_radius_with_peak(const VectorField2& u, double peak_sq, double rel_threshold) {
  const Grid2D& g = u.grid();
  if (peak_sq == 0.0) return 0.0;
  // |u| > rel * peak, compared in squares.
  const double cut_sq = rel_threshold * rel_threshold * peak_sq;
  double r2max = 0.0;
  for (int j = 0; j < g.n; ++j) {
    const double x2 = g.coord(j);
    const double* a = u.c1.row(j);
    const double* b = u.c2.row(j);
    // |x| grows toward both row ends, so the first hit from each end is the
    // farthest node of the row.
    int lo = 0;
    while (lo < g.n && a[lo] * a[lo] + b[lo] * b[lo] <= cut_sq) ++lo;
    if (lo == g.n) continue;
    int hi = g.n - 1;
    while (a[hi] * a[hi] + b[hi] * b[hi] <= cut_sq) --hi;
    const double x1 = std::max(std::abs(g.coord(lo)), std::abs(g.coord(hi)));
    r2max = std::max(r2max, x1 * x1 + x2 * x2);
  }
  return std::sqrt(r2max);
}

ResidualValue energy_identity_residual(std::span<const DiagnosticsRecord> series) {
  if (series.empty()) return {};
  const double e0 = series.front().E_u;
  double worst = 0.0;
  for (const auto& r : series) worst = std::max(worst, std::abs(r.E_u + r.dissipation - e0));
  if (e0 == 0.0) return {worst, true};
  return {worst / e0, false};
}

VEnergyCheck v_energy_check(const SimState& state, const InitialData& init, const Lattice& V,
                            const LameParams& lame, const StencilSet& st) {
  const Grid2D& g = state.grid();
  require_same_grid(g, init.u0.grid(), "v_energy_check");
  require_same_grid(g, V.grid(), "v_energy_check");
  VectorField2 rho(g);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      rho.c1(i, j) = init.u1.c1(i, j) + V(i, j) * init.u0.c1(i, j);
      rho.c2(i, j) = init.u1.c2(i, j) + V(i, j) * init.u0.c2(i, j);
    }
  }
  return v_energy_check(state, rho, l2_norm_sq(init.u0), lame, st);
}

VEnergyCheck v_energy_check(const SimState& state, const VectorField2& rho, double u0_l2_sq,
                            const LameParams& lame, const StencilSet& st) {
  const Grid2D& g = state.grid();
  require_same_grid(g, rho.grid(), "v_energy_check");
  const int n = g.n;
  const std::ptrdiff_t s = state.v_accum.c1.stride();

  auto sums = row_reduce<3>(n, [&](int j) {
    std::array<double, 3> acc{};
    const double* v1 = state.v_accum.c1.row(j);
    const double* v2 = state.v_accum.c2.row(j);
    const double* r1 = rho.c1.row(j);
    const double* r2 = rho.c2.row(j);
    for (int i = 0; i < n; ++i) {
      const NodeGradient gr = gradient_at(v1 + i, v2 + i, s, st.first);
      const double div = gr.div();
      acc[0] += gr.grad_sq();
      acc[1] += div * div;
      acc[2] += r1[i] * v1[i] + r2[i] * v2[i];
    }
    return acc;
  });

  const double area = g.cell_area();
  VEnergyCheck out;
  out.lhs = 0.5 * state.moments.l2 + 0.5 * lame.a * lame.a * sums[0] * area +
            0.5 * lame.coupling() * sums[1] * area + state.damped_l2;
  out.rhs = 0.5 * u0_l2_sq + sums[2] * area;
  const double scale = std::max(std::abs(out.lhs), std::abs(out.rhs));
  out.residual = scale > 0.0 ? std::abs(out.lhs - out.rhs) / scale : 0.0;
  return out;
}

}  // namespace elwave
