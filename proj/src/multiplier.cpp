#include "elwave/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace elwave {

WeightPair WeightPair::quadratic() {
  WeightPair w;
  w.family_ = Family::Quadratic;
  w.q_ = 2.0;
  return w;
}

WeightPair WeightPair::power(double V0, double b, double delta) {
  if (!(b > 0.0) || !(delta > 0.0 && delta < V0 / b - 1.0)) {
    std::ostringstream msg;
    msg << "power weights need 0 < delta < V0/b - 1 (V0=" << V0 << ", b=" << b
        << ", delta=" << delta << ")";
    throw ConfigError(msg.str());
  }
  WeightPair w;
  w.family_ = Family::Power;
  w.q_ = V0 / b - delta;
  return w;
}

WeightPair WeightPair::constant(double f, double g) {
  WeightPair w;
  w.family_ = Family::Constant;
  w.q_ = 0.0;
  w.f_const_ = f;
  w.g_const_ = g;
  return w;
}

WeightPair WeightPair::for_config(const SimConfig& config) {
  if (config.damping_case == DampingCase::IntermediateDamping) {
    return power(config.damping.V0, config.lame.b, config.delta);
  }
  return quadratic();
}

WeightValues WeightPair::eval(double t) const {
  if (t < 0.0) throw std::invalid_argument("WeightPair::eval: t must be >= 0");
  const double s = 1.0 + t;
  switch (family_) {
    case Family::Quadratic:
      return {s * s, 2.0 * s, s, 1.0, 0.0};
    case Family::Power: {
      const double q = q_;
      const double c = 0.5 * q;
      const double p = std::pow(s, q - 3.0);
      // p * s^k keeps every power consistent with one pow() call.
      return {p * s * s * s, q * p * s * s, c * p * s * s, c * (q - 1.0) * p * s,
              c * (q - 1.0) * (q - 2.0) * p};
    }
    case Family::Constant:
      return {f_const_, 0.0, g_const_, 0.0, 0.0};
  }
  return {};
}

double e_functional(const FieldMoments& m, const WeightValues& w, const LameParams& lame) {
  return 0.5 * w.f * (m.kinetic + m.strain(lame)) + w.g * m.u_dot_ut +
         0.5 * (w.g * m.damped_l2 - w.g_t * m.l2);
}

double F_functional(const FieldMoments& m, const WeightValues& w, const LameParams& lame) {
  const double kinetic_part = 2.0 * w.f * m.damped_kinetic - (w.f_t + 2.0 * w.g) * m.kinetic;
  const double strain_part = (2.0 * w.g - w.f_t) * m.strain(lame);
  return 0.5 * (kinetic_part + strain_part) + 0.5 * (w.g_tt * m.l2 - w.g_t * m.damped_l2);
}

IdentityResidual identity_residual(std::span<const double> t, std::span<const double> e,
                                   std::span<const double> F) {
  if (t.size() < 3 || e.size() != t.size() || F.size() != t.size()) {
    throw std::invalid_argument("identity_residual: need >= 3 aligned samples");
  }
  IdentityResidual out;
  out.pointwise.assign(t.size(), 0.0);
  double max_F = 0.0;
  double max_e = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    max_F = std::max(max_F, std::abs(F[k]));
    max_e = std::max(max_e, std::abs(e[k]));
  }
  for (std::size_t k = 1; k + 1 < t.size(); ++k) {
    const double de = (e[k + 1] - e[k - 1]) / (t[k + 1] - t[k - 1]);
    out.pointwise[k] = std::abs(de + F[k]);
    out.max_abs = std::max(out.max_abs, out.pointwise[k]);
  }
  const double span = t.back() - t.front();
  const double scale = max_F + (span > 0.0 ? max_e / span : 0.0);
  out.normalized = scale > 0.0 ? out.max_abs / scale : 0.0;
  return out;
}

double absorption_constant(double L, double b) { return 1.0 / std::max(1.0 + L, b); }

ConditionReport check_conditions(const WeightPair& pair, const Lattice& V, double L, double b,
                                 std::span<const double> t_samples) {
  const Grid2D& g = V.grid();

  // Nodes ordered by radius with running minimum of V: min V over Omega(t) is
  // then a binary search away.
  std::vector<std::pair<double, double>> nodes;
  nodes.reserve(g.size());
  for (int j = 0; j < g.n; ++j) {
    const double x2 = g.coord(j);
    for (int i = 0; i < g.n; ++i) {
      const double x1 = g.coord(i);
      nodes.emplace_back(x1 * x1 + x2 * x2, V(i, j));
    }
  }
  std::sort(nodes.begin(), nodes.end());
  std::vector<double> prefix_min(nodes.size());
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    running = std::min(running, nodes[k].second);
    prefix_min[k] = running;
  }

  ConditionReport report;
  for (const double t : t_samples) {
    ConditionSample s;
    s.t = t;
    s.omega_radius = RegionOmega{t, L, b}.radius();
    const double r2 = s.omega_radius * s.omega_radius;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), std::make_pair(r2, std::numeric_limits<double>::infinity()));
    const auto count = static_cast<std::size_t>(it - nodes.begin());
    s.min_V = count > 0 ? prefix_min[count - 1] : 0.0;

    const WeightValues w = pair.eval(t);
    s.cond_i = 2.0 * w.f * s.min_V - w.f_t - 2.0 * w.g;
    s.cond_ii = 2.0 * w.g - w.f_t;
    s.c1 = (1.0 + t) * std::max(0.0, -w.g_tt);
    s.c2 = w.g_t;
    s.c3 = std::max(0.0, w.g_t - s.min_V * w.g);
    const double tol = 1e-12 * std::max({1.0, w.f_t, 2.0 * w.g});
    s.holds = count > 0 && s.cond_i >= -tol && s.cond_ii >= -tol && std::isfinite(s.c1) &&
              std::isfinite(s.c2) && std::isfinite(s.c3);
    report.samples.push_back(s);
  }

  std::size_t first_ok = report.samples.size();
  while (first_ok > 0 && report.samples[first_ok - 1].holds) --first_ok;
  if (first_ok < report.samples.size()) {
    report.located_t0 = report.samples[first_ok].t;
    MultiplierConstants& c = report.constants;
    c.t0 = *report.located_t0;
    for (std::size_t k = first_ok; k < report.samples.size(); ++k) {
      c.C1 = std::max(c.C1, report.samples[k].c1);
      c.C2 = std::max(c.C2, report.samples[k].c2);
      c.C3 = std::max(c.C3, report.samples[k].c3);
    }
  }
  report.constants.C_star = absorption_constant(L, b);
  return report;
}

std::vector<double> condition_sample_times(double T, double first, int per_octave) {
  std::vector<double> out{0.0};
  for (int k = 0;; ++k) {
    const double t = first * std::exp2(static_cast<double>(k) / per_octave);
    if (t >= T) break;
    out.push_back(t);
  }
  if (T > 0.0) out.push_back(T);
  return out;
}

double constant_at_t0(const SimState& state, const Lattice& V, const WeightValues& w, double E_u) {
  const Grid2D& g = state.grid();
  double cross = 0.0;
  double weighted = 0.0;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double u1 = state.u_curr.c1(i, j);
      const double u2 = state.u_curr.c2(i, j);
      cross += std::abs(u1 * state.velocity1(i, j) + u2 * state.velocity2(i, j));
      weighted += std::abs(w.g_t - V(i, j) * w.g) * (u1 * u1 + u2 * u2);
    }
  }
  const double area = g.cell_area();
  return w.f * E_u + w.g * cross * area + 0.5 * weighted * area;
}

}  // namespace elwave
