#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elwave/diagnostics.hpp"
#include "elwave/model.hpp"

namespace elwave {

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
};

/// Throws ConfigError unless 0 < lo and hi >= 2 lo.
void validate(const Window& w);

/// [T/4, T] unless the config overrides it.
Window rate_window(const SimConfig& config);

struct DecayFit {
  /// p such that E ~ t^(-p) (or t^(-p) log t when corrected).
  double exponent = 0.0;
  double intercept = 0.0;
  std::size_t samples = 0;
  bool log_corrected = false;
};

/// Least-squares slope of log(E / (log t if corrected)) against log t over the
/// samples inside the window; exponent = -slope. Throws std::domain_error on a
/// nonpositive value (or log t <= 0 when corrected) and std::invalid_argument
/// with fewer than two samples.
DecayFit fit_decay(std::span<const double> t, std::span<const double> E, const Window& window,
                   bool log_correction);

struct BoundedRatio {
  std::string claim;
  std::vector<double> t;
  std::vector<double> ratio;
  double max_first_half = 0.0;
  double end_value = 0.0;
  double tol_factor = 1.5;
  bool pass = false;
};

/// r = q / envelope on the window; pass iff r(t_hi) <= tol_factor * max of r
/// over [t_lo, t_mid]. Throws std::domain_error if the envelope is not
/// positive on the window.
BoundedRatio bounded_ratio(std::span<const double> t, std::span<const double> q,
                           std::span<const double> envelope, const Window& window,
                           double tol_factor, std::string claim = {});

struct Lemma26Check {
  double t = 0.0;
  double epsilon = 0.0;
  /// int |rho . v| and the signed int rho . v.
  double lhs = 0.0;
  double signed_lhs = 0.0;
  /// int_{|x| <= 2L + bt} |grad h|^2.
  double grad_h_sq = 0.0;
  /// int |grad v|^2.
  double grad_v_sq = 0.0;
  /// (1/eps) grad_h_sq + eps grad_v_sq.
  double rhs = 0.0;
  bool pass = false;
};

/// Duality estimate with C_eps = 1 / eps; passes if lhs <= rhs (1 + slack).
Lemma26Check lemma26_check(double t, double abs_source_dot_v, double source_dot_v,
                           double grad_h_sq, double grad_v_sq, double epsilon,
                           double slack = 0.05);

/// Growth envelope constants A + B log(2L + bt) for the damped L2 bound:
/// A = ||u0||^2 + ||rho||_inf^2, B = ||rho||_1^2.
struct GrowthConstants {
  double A = 0.0;
  double B = 0.0;
};

struct AbsorptionCheck {
  /// int_{t_lo}^{t} int V |u|^2 against C* V0 int_{t_lo}^{t} ||u||^2 / (1 + s).
  double lhs = 0.0;
  double rhs = 0.0;
  double C_star = 0.0;
  bool pass = false;
};

struct RateReport {
  DampingCase damping_case = DampingCase::Undamped;
  Window window;
  /// Exponent of the checked energy envelope (2 or V0/b - delta); absent when
  /// the case checks L2 growth only.
  std::optional<double> envelope_exponent;
  std::optional<DecayFit> energy_fit;
  /// Claimed envelope: energy decay (damped) or L2 log growth (undamped).
  BoundedRatio primary;
  /// L2 plus space-time damped norm against A + B log(2L + bt) (damped cases).
  std::optional<BoundedRatio> l2_growth;
  std::optional<AbsorptionCheck> absorption;
  GrowthConstants constants;
  std::vector<Lemma26Check> lemma26;
  /// WeakDamping results carry no claim.
  bool gating = true;

  bool pass() const;
};

/// Assembles every late-time verdict from the output series. Throws
/// std::invalid_argument when the window holds fewer than two records.
RateReport theorem_verdicts(std::span<const DiagnosticsRecord> series, const SimConfig& config,
                            const GrowthConstants& constants, double C_star);

}  // namespace elwave
