#include "elwave/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace elwave {

namespace {

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

Verdict bound_verdict(std::string name, double value, double limit, bool gating = true) {
  return {std::move(name), value <= limit, gating, fmt(value) + " <= " + fmt(limit)};
}

bool log_t_envelope(DampingCase c) {
  return c == DampingCase::StrongDamping || c == DampingCase::IntermediateDamping;
}

void check_rate_preconditions(const SimConfig& config) {
  if (!config.suites.rates) return;
  const Window w = rate_window(config);
  validate(w);
  if (w.hi > config.T * (1.0 + 1e-12)) {
    throw ConfigError("rate window ends after T = " + fmt(config.T));
  }
  if (log_t_envelope(config.damping_case) && !(w.lo > 1.0)) {
    throw ConfigError("rate window must start after t = 1 for the t^-p log t envelope (t_lo = " +
                      fmt(w.lo) + ")");
  }
}

Grid2D source_grid(double L, double resolution, double pad_cells) {
  const double dx = 1.0 / resolution;
  int n = static_cast<int>(std::ceil(2.0 * (L + pad_cells * dx) * resolution - 1e-9));
  n += n % 2;
  return make_grid(std::max(n, 16), dx);
}

}  // namespace

bool SuiteResult::pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.pass || !v.gating; });
}

SourceDensity potential_source(const SimConfig& config, double resolution, double pad_cells,
                               std::size_t memory_cap_bytes) {
  const double L = config.init.L;
  if (config.damping.kind == DampingKind::Tabulated) {
    SimConfig sizing = config;
    if (!(sizing.T > 0.0)) sizing.T = std::numeric_limits<double>::min();
    const Grid2D g = build_grid(sizing, memory_cap_bytes);
    const DampingField damping = sample_damping(config.damping, g);
    const InitialData init = sample_initial_data(config.init, g);
    VectorField2 rho = source_density_field(init, damping.V);
    int n_sub = static_cast<int>(std::ceil(2.0 * (L + pad_cells * g.spacing) / g.spacing - 1e-9));
    if ((g.n - n_sub) % 2 != 0) ++n_sub;
    n_sub = std::min(n_sub, g.n);
    return make_source(crop(rho, n_sub), L);
  }
  const Grid2D g = source_grid(L, resolution, pad_cells);
  const DampingField damping = sample_damping(config.damping, g);
  const InitialData init = sample_initial_data(config.init, g);
  return make_source(source_density_field(init, damping.V), L);
}

std::vector<double> growth_sample_times(double T) {
  std::vector<double> out;
  if (!(T > 0.0)) return out;
  for (double t = 1.0; t < T; t *= 2.0) out.push_back(t);
  out.push_back(T);
  return out;
}

std::vector<double> duality_times(const SimConfig& config) {
  std::vector<double> out;
  if (!config.potential.lemma26_times.empty()) {
    for (double t : config.potential.lemma26_times) {
      if (t >= 0.0 && t <= config.T * (1.0 + 1e-12)) out.push_back(t);
    }
  } else if (config.T > 0.0) {
    out = {0.25 * config.T, 0.5 * config.T, config.T};
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PotentialReport potential_report(const SimConfig& config, const std::vector<double>& growth_times,
                                 const SuiteOptions& options) {
  constexpr double kPadCells = 4.0;
  const double res = config.potential.resolution;
  const SourceDensity src = potential_source(config, res, kPadCells, options.memory_cap_bytes);
  const NewtonPotential pot(src, config.potential.near_cells);
  const StencilSet st(src.rho.grid().spacing);

  PotentialReport rep;
  rep.resolution = 1.0 / src.rho.grid().spacing;
  rep.L = src.L;
  rep.source_nodes = pot.source_nodes();
  rep.rho_l1 = src.l1_norm;
  rep.rho_linf = src.linf_norm;
  rep.poisson = poisson_residual(newton_potential(pot, src.rho.grid()), src, st);

  if (options.poisson_refinement && config.damping.kind != DampingKind::Tabulated) {
    const SourceDensity fine = potential_source(config, 2.0 * res, kPadCells, options.memory_cap_bytes);
    const NewtonPotential pot_fine(fine, config.potential.near_cells);
    rep.poisson_fine =
        poisson_residual(newton_potential(pot_fine, fine.rho.grid()), fine, StencilSet(fine.rho.grid().spacing));
    if (rep.poisson.value > 0.0 && rep.poisson_fine->value > 0.0) {
      rep.poisson_order = std::log2(rep.poisson.value / rep.poisson_fine->value);
    }
  }

  const double L = src.L;
  const double t_max = growth_times.empty() ? 0.0 : growth_times.back();
  const double r_outer = std::max(4.0 * L, 2.0 * L + config.lame.b * t_max);
  rep.far_field = far_field_bound(pot, src, r_outer);
  const Grid2D inner = source_grid(2.0 * L, res, 0.0);
  rep.growth = ih_and_growth(pot, src, growth_times, config.lame.b, &inner);
  return rep;
}

namespace {

void potential_verdicts(const PotentialReport& p, const SimConfig& config,
                        std::vector<Verdict>& out) {
  out.push_back(bound_verdict("poisson_residual", p.poisson.value, config.tolerances.poisson));
  if (p.poisson_order) {
    const double q = *p.poisson_order;
    out.push_back({"poisson_order", q >= 1.7 && q <= 2.3, true, fmt(q) + " in [1.7, 2.3]"});
  }
  out.push_back({"far_field_bound", p.far_field.pass, true,
                 fmt(p.far_field.sup) + " <= " + fmt(p.far_field.bound) + " (1 + slack)"});
  out.push_back({"pointwise_gradient_bound", p.growth.pointwise_pass, true,
                 fmt(p.growth.max_grad_inner) + " <= " + fmt(p.growth.pointwise_bound) +
                     " (1 + slack)"});
  out.push_back({"I_h_bound", p.growth.I_h_pass, true,
                 fmt(p.growth.I_h) + " <= " + fmt(p.growth.I_h_bound) + " (1 + slack)"});
  out.push_back({"log_growth_envelope", p.growth.growth_pass, true,
                 std::to_string(p.growth.samples.size()) + " disks"});
}

}  // namespace

SuiteResult run_suite(const SimConfig& config, const SuiteOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  validate(config);
  check_rate_preconditions(config);

  SuiteResult res;
  res.config = config;
  const double L = config.init.L;
  const double b = config.lame.b;

  RunOptions ropt;
  ropt.memory_cap_bytes = options.memory_cap_bytes;
  ropt.multiplier = config.suites.multiplier;
  const bool lemma26 = config.suites.rates && config.T > 0.0;
  if (lemma26) ropt.duality_times = duality_times(config);

  const WeightPair weights = WeightPair::for_config(config);
  if (config.suites.multiplier) {
    SimConfig sizing = config;
    if (!(sizing.T > 0.0)) sizing.T = std::numeric_limits<double>::min();
    const Grid2D g = build_grid(sizing, options.memory_cap_bytes);
    const DampingField damping = sample_damping(config.damping, g);
    MultiplierReport m;
    m.family = weights.family();
    m.exponent = weights.exponent();
    m.conditions = check_conditions(weights, damping.V, L, b, condition_sample_times(config.T));
    m.C_star_expected = 1.0 / std::max(1.0 + L, b);
    m.conditions_gating = log_t_envelope(config.damping_case);
    ropt.constant_t0 = m.conditions.located_t0 ? std::max(config.t0, *m.conditions.located_t0)
                                               : config.t0;
    res.multiplier = std::move(m);
  }

  res.run = run(config, ropt);
  const RunOutput& r = *res.run;
  auto& V = res.verdicts;

  V.push_back({"finite_propagation", r.finite_propagation_ok, true,
               "max excess " + fmt(r.max_support_excess) + " <= " +
                   fmt(kSupportSlackCells * r.grid.spacing)});
  V.push_back(bound_verdict("energy_identity", r.energy_residual.value, config.tolerances.energy));
  V.push_back(bound_verdict("v_identity", r.v_identity_residual, config.tolerances.v_identity));

  if (res.multiplier) {
    MultiplierReport& m = *res.multiplier;
    m.identity = r.multiplier;
    if (r.C_t0) m.conditions.constants.C_t0 = *r.C_t0;
    if (r.C_t0_time) m.conditions.constants.t0 = *r.C_t0_time;
    if (m.identity) {
      V.push_back(bound_verdict("multiplier_identity", m.identity->normalized,
                                config.tolerances.multiplier));
    }
    V.push_back({"conditions_certified", m.conditions.certified(), m.conditions_gating,
                 m.conditions.located_t0 ? "t0 = " + fmt(*m.conditions.located_t0)
                                         : "no admissible t0 among the samples"});
    V.push_back({"absorption_constant", m.conditions.constants.C_star == m.C_star_expected, true,
                 fmt(m.conditions.constants.C_star)});
  }

  if (config.suites.potential) {
    res.potential = potential_report(config, growth_sample_times(config.T), options);
    potential_verdicts(*res.potential, config, V);
  }

  if (config.suites.rates && config.T > 0.0) {
    GrowthConstants gc;
    gc.A = r.norms.u0_l2_sq + r.norms.rho_linf * r.norms.rho_linf;
    gc.B = r.norms.rho_l1 * r.norms.rho_l1;
    RateReport rates = theorem_verdicts(r.records, config, gc, absorption_constant(L, b));

    const SourceDensity src = potential_source(config, config.potential.resolution, 4.0,
                                               options.memory_cap_bytes);
    const NewtonPotential np(src, config.potential.near_cells);
    const double eps = config.potential.epsilon > 0.0 ? config.potential.epsilon
                                                      : 0.25 * config.lame.a * config.lame.a;
    for (const DualitySample& d : r.duality) {
      const double gh = grad_h_disk_integral(np, 2.0 * L + b * d.t);
      rates.lemma26.push_back(
          lemma26_check(d.t, d.abs_source_dot_v, d.source_dot_v, gh, d.grad_v_sq, eps));
    }

    const bool g = rates.gating;
    V.push_back({"rate_envelope", rates.primary.pass, g,
                 rates.primary.claim + ": end " + fmt(rates.primary.end_value) + " vs first-half max " +
                     fmt(rates.primary.max_first_half)});
    if (rates.l2_growth) {
      V.push_back({"l2_growth", rates.l2_growth->pass, g,
                   "end " + fmt(rates.l2_growth->end_value) + " vs first-half max " +
                       fmt(rates.l2_growth->max_first_half)});
    }
    if (rates.absorption) {
      V.push_back({"absorption_inequality", rates.absorption->pass, g,
                   fmt(rates.absorption->lhs) + " >= " + fmt(rates.absorption->rhs)});
    }
    for (const auto& c : rates.lemma26) {
      V.push_back({"duality_t=" + fmt(c.t), c.pass, true, fmt(c.lhs) + " <= " + fmt(c.rhs)});
    }
    res.rates = std::move(rates);
  }

  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

SuiteResult verify_potential(const SimConfig& config, const SuiteOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  validate(config);
  SuiteResult res;
  res.config = config;
  res.potential = potential_report(config, growth_sample_times(config.T), options);
  potential_verdicts(*res.potential, config, res.verdicts);
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace elwave
