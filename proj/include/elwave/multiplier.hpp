#pragma once

#include <optional>
#include <span>
#include <vector>

#include "elwave/diagnostics.hpp"
#include "elwave/model.hpp"

namespace elwave {

struct WeightValues {
  double f = 0.0;
  double f_t = 0.0;
  double g = 0.0;
  double g_t = 0.0;
  double g_tt = 0.0;
};

/// Time weights of the multiplier f(t) u_t + g(t) u.
///
///   Quadratic: f = (1+t)^2, g = 1+t                         (V0 > 2b)
///   Power:     f = (1+t)^q, g = (q/2)(1+t)^(q-1), q = V0/b - delta  (b < V0 <= 2b)
///   Constant:  f, g fixed (identity checks only)
class WeightPair {
 public:
  enum class Family { Quadratic, Power, Constant };

  static WeightPair quadratic();
  /// Throws ConfigError unless 0 < delta < V0/b - 1.
  static WeightPair power(double V0, double b, double delta);
  static WeightPair constant(double f, double g);
  /// Weights matching the case split; Undamped and WeakDamping use Quadratic.
  static WeightPair for_config(const SimConfig& config);

  Family family() const { return family_; }
  /// Exponent q of f (2 for Quadratic, 0 for Constant).
  double exponent() const { return q_; }

  WeightValues eval(double t) const;

 private:
  Family family_ = Family::Quadratic;
  double q_ = 2.0;
  double f_const_ = 1.0;
  double g_const_ = 0.0;
};

/// e(t) = int f/2 (|u_t|^2 + strain) + g u.u_t + (V g - g_t)|u|^2 / 2.
double e_functional(const FieldMoments& m, const WeightValues& w, const LameParams& lame);

/// F(t) = 1/2 int [2Vf - f_t - 2g]|u_t|^2 + (2g - f_t) strain + 1/2 int (g_tt - V g_t)|u|^2.
double F_functional(const FieldMoments& m, const WeightValues& w, const LameParams& lame);

struct IdentityResidual {
  /// max over interior samples of |de/dt + F|, normalised by max|F| + max|e| / T.
  double normalized = 0.0;
  double max_abs = 0.0;
  /// |de/dt + F| per sample (zero at both ends).
  std::vector<double> pointwise;
};

/// Centred-difference check of d/dt e + F = 0 on uniformly spaced samples.
IdentityResidual identity_residual(std::span<const double> t, std::span<const double> e,
                                   std::span<const double> F);

struct ConditionSample {
  double t = 0.0;
  double omega_radius = 0.0;
  double min_V = 0.0;
  /// min over Omega(t) nodes of 2 f V - f_t - 2 g.
  double cond_i = 0.0;
  /// 2 g - f_t.
  double cond_ii = 0.0;
  /// (1 + t)(-g_tt)^+, g_t, sup over Omega(t) nodes of (g_t - V g)^+.
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  bool holds = false;
};

struct MultiplierConstants {
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
  double C_t0 = 0.0;
  double C_star = 0.0;
  double t0 = 0.0;
};

struct ConditionReport {
  std::vector<ConditionSample> samples;
  /// Smallest sample time from which (i)-(v) hold at every later sample.
  std::optional<double> located_t0;
  MultiplierConstants constants;

  bool certified() const { return located_t0.has_value(); }
};

/// C* = 1 / max(1 + L, b).
double absorption_constant(double L, double b);

/// Evaluates (i)-(v) at every sample time on the node set |x| <= L + b t.
/// Constants are the sharpest ones over samples t >= located t0 (positive parts).
ConditionReport check_conditions(const WeightPair& pair, const Lattice& V, double L, double b,
                                 std::span<const double> t_samples);

/// Geometric sample times in [0, T] used by check_conditions: 0, then
/// first * 2^(k/per_octave), and T itself.
std::vector<double> condition_sample_times(double T, double first = 0.05, int per_octave = 4);

/// C(t0) = f E_u + g int |u . u_t| + 1/2 int |g_t - V g| |u|^2 at the state's time.
double constant_at_t0(const SimState& state, const Lattice& V, const WeightValues& w, double E_u);

}  // namespace elwave
