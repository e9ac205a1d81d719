#include "elwave/ratefit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace elwave {

namespace {

bool inside(double t, const Window& w) {
  const double eps = 1e-9 * std::max(1.0, w.hi);
  return t >= w.lo - eps && t <= w.hi + eps;
}

}  // namespace

void validate(const Window& w) {
  if (!(w.lo > 0.0) || !(w.hi >= 2.0 * w.lo)) {
    std::ostringstream msg;
    msg << "rate window [" << w.lo << ", " << w.hi << "] must satisfy 0 < t_lo and t_hi >= 2 t_lo";
    throw ConfigError(msg.str());
  }
}

Window rate_window(const SimConfig& config) {
  if (config.rate_window) return {(*config.rate_window)[0], (*config.rate_window)[1]};
  return {0.25 * config.T, config.T};
}

DecayFit fit_decay(std::span<const double> t, std::span<const double> E, const Window& window,
                   bool log_correction) {
  if (t.size() != E.size()) throw std::invalid_argument("fit_decay: length mismatch");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!inside(t[k], window)) continue;
    double y = E[k];
    if (!(y > 0.0)) {
      std::ostringstream msg;
      msg << "fit_decay: nonpositive value " << y << " at t = " << t[k];
      throw std::domain_error(msg.str());
    }
    if (log_correction) {
      const double lt = std::log(t[k]);
      if (!(lt > 0.0)) throw std::domain_error("fit_decay: log correction needs t > 1");
      y /= lt;
    }
    const double x = std::log(t[k]);
    const double ly = std::log(y);
    sx += x;
    sy += ly;
    sxx += x * x;
    sxy += x * ly;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("fit_decay: fewer than two samples in the window");
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_decay: degenerate abscissae");
  const double slope = (dn * sxy - sx * sy) / denom;
  DecayFit fit;
  fit.exponent = -slope;
  fit.intercept = (sy - slope * sx) / dn;
  fit.samples = n;
  fit.log_corrected = log_correction;
  return fit;
}

BoundedRatio bounded_ratio(std::span<const double> t, std::span<const double> q,
                           std::span<const double> envelope, const Window& window,
                           double tol_factor, std::string claim) {
  if (t.size() != q.size() || t.size() != envelope.size()) {
    throw std::invalid_argument("bounded_ratio: length mismatch");
  }
  BoundedRatio out;
  out.claim = std::move(claim);
  out.tol_factor = tol_factor;
  const double mid = window.mid();
  bool have_first = false;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!inside(t[k], window)) continue;
    if (!(envelope[k] > 0.0)) {
      std::ostringstream msg;
      msg << "bounded_ratio: envelope " << envelope[k] << " not positive at t = " << t[k];
      throw std::domain_error(msg.str());
    }
    const double r = q[k] / envelope[k];
    out.t.push_back(t[k]);
    out.ratio.push_back(r);
    if (t[k] <= mid + 1e-9 * std::max(1.0, window.hi)) {
      out.max_first_half = have_first ? std::max(out.max_first_half, r) : r;
      have_first = true;
    }
  }
  if (out.ratio.empty() || !have_first) {
    throw std::invalid_argument("bounded_ratio: no samples in the first half of the window");
  }
  out.end_value = out.ratio.back();
  out.pass = out.end_value <= tol_factor * out.max_first_half;
  return out;
}

Lemma26Check lemma26_check(double t, double abs_source_dot_v, double source_dot_v,
                           double grad_h_sq, double grad_v_sq, double epsilon, double slack) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("lemma26_check: epsilon must be positive");
  Lemma26Check c;
  c.t = t;
  c.epsilon = epsilon;
  c.lhs = abs_source_dot_v;
  c.signed_lhs = source_dot_v;
  c.grad_h_sq = grad_h_sq;
  c.grad_v_sq = grad_v_sq;
  c.rhs = grad_h_sq / epsilon + epsilon * grad_v_sq;
  c.pass = c.lhs <= c.rhs * (1.0 + slack);
  return c;
}

bool RateReport::pass() const {
  bool ok = primary.pass;
  if (l2_growth) ok = ok && l2_growth->pass;
  if (absorption) ok = ok && absorption->pass;
  for (const auto& c : lemma26) ok = ok && c.pass;
  return ok;
}

RateReport theorem_verdicts(std::span<const DiagnosticsRecord> series, const SimConfig& config,
                            const GrowthConstants& constants, double C_star) {
  RateReport rep;
  rep.damping_case = config.damping_case;
  rep.window = rate_window(config);
  validate(rep.window);
  rep.constants = constants;
  rep.gating = config.damping_case != DampingCase::WeakDamping;

  const double L = config.init.L;
  const double b = config.lame.b;
  const double V0 = config.damping.V0;
  std::vector<double> t, E, l2, growth_q, log_front;
  for (const auto& r : series) {
    t.push_back(r.t);
    E.push_back(r.E_u);
    l2.push_back(r.l2_sq);
    growth_q.push_back(r.l2_sq + r.damped_l2);
    log_front.push_back(std::log(2.0 * L + b * r.t));
  }
  const double tol = config.tol_factor;

  auto energy_envelope = [&](double p, const char* claim) {
    std::vector<double> env;
    for (double s : t) env.push_back(std::pow(s, -p) * std::log(s));
    rep.envelope_exponent = p;
    rep.primary = bounded_ratio(t, E, env, rep.window, tol, claim);
  };

  switch (config.damping_case) {
    case DampingCase::StrongDamping:
      energy_envelope(2.0, "E_u(t) = O(t^-2 log t)");
      break;
    case DampingCase::IntermediateDamping:
      energy_envelope(V0 / b - config.delta, "E_u(t) = O(t^(-V0/b + delta) log t)");
      break;
    case DampingCase::Undamped:
    case DampingCase::WeakDamping:
      rep.primary = bounded_ratio(t, l2, log_front, rep.window, tol, "||u||^2 = O(log(2L + bt))");
      break;
  }

  const bool damped = config.damping_case != DampingCase::Undamped;
  if (damped) {
    std::vector<double> env;
    for (double lf : log_front) env.push_back(constants.A + constants.B * lf);
    bool positive = std::all_of(env.begin(), env.end(), [](double v) { return v > 0.0; });
    if (positive) {
      rep.l2_growth = bounded_ratio(t, growth_q, env, rep.window, tol,
                                    "||u||^2 + int int V|u|^2 = O(A + B log(2L + bt))");
    } else {
      // Zero data: both sides vanish.
      BoundedRatio zero;
      zero.claim = "||u||^2 + int int V|u|^2 = O(A + B log(2L + bt))";
      zero.tol_factor = tol;
      zero.pass = std::all_of(growth_q.begin(), growth_q.end(), [](double v) { return v == 0.0; });
      rep.l2_growth = zero;
    }

    // Over [t_lo, T] the damped space-time norm dominates C* V0 times the
    // time-weighted L2 norm because supp u(s) lies in |x| <= L + bs.
    const DiagnosticsRecord* lo = nullptr;
    for (const auto& r : series) {
      if (r.t >= rep.window.lo - 1e-9 * std::max(1.0, rep.window.hi)) {
        lo = &r;
        break;
      }
    }
    if (lo != nullptr) {
      const auto& hi = series.back();
      AbsorptionCheck ab;
      ab.C_star = C_star;
      ab.lhs = hi.damped_l2 - lo->damped_l2;
      ab.rhs = C_star * V0 * (hi.weighted_l2 - lo->weighted_l2);
      ab.pass = ab.lhs >= ab.rhs * (1.0 - 1e-9);
      rep.absorption = ab;
    }
  }

  if (damped) {
    try {
      rep.energy_fit = fit_decay(t, E, rep.window, true);
    } catch (const std::exception&) {
      // Energy at roundoff level or nonpositive; leave the fit out.
    }
  }
  return rep;
}

}  // namespace elwave
