#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "elwave/integrator.hpp"
#include "elwave/model.hpp"
#include "elwave/multiplier.hpp"
#include "elwave/potential.hpp"
#include "elwave/ratefit.hpp"

namespace elwave {

/// One named pass/fail entry. Non-gating entries are informational and never
/// affect the exit status.
struct Verdict {
  std::string name;
  bool pass = false;
  bool gating = true;
  std::string detail;
};

struct MultiplierReport {
  WeightPair::Family family = WeightPair::Family::Quadratic;
  double exponent = 2.0;
  ConditionReport conditions;
  std::optional<IdentityResidual> identity;
  /// 1 / max(1 + L, b) from the closed form, next to the module's value.
  double C_star_expected = 0.0;
  /// Conditions carry a claim only in the strong and intermediate damping cases.
  bool conditions_gating = false;
};

struct PotentialReport {
  double resolution = 0.0;
  double L = 0.0;
  std::size_t source_nodes = 0;
  double rho_l1 = 0.0;
  double rho_linf = 0.0;
  PoissonResidual poisson;
  /// Same check at twice the resolution, and log2 of the residual ratio.
  std::optional<PoissonResidual> poisson_fine;
  std::optional<double> poisson_order;
  FarFieldBound far_field;
  GrowthReport growth;
};

struct SuiteOptions {
  std::size_t memory_cap_bytes = kDefaultMemoryCapBytes;
  /// Repeat the Poisson check at twice the potential resolution.
  bool poisson_refinement = true;
};

struct SuiteResult {
  SimConfig config;
  std::optional<RunOutput> run;
  std::optional<MultiplierReport> multiplier;
  std::optional<PotentialReport> potential;
  std::optional<RateReport> rates;
  std::vector<Verdict> verdicts;
  double wall_seconds = 0.0;

  /// Every gating verdict passes.
  bool pass() const;
};

/// Lattice source rho = u1 + V u0 at `resolution` points per unit covering
/// |x| <= L + pad. Tabulated damping is only known on the run grid, so that
/// case crops the run-grid source instead and ignores `resolution`.
SourceDensity potential_source(const SimConfig& config, double resolution, double pad_cells,
                               std::size_t memory_cap_bytes = kDefaultMemoryCapBytes);

/// Poisson residual, gradient bounds and log growth for one source.
/// `growth_times` are the t values of the expanding-disk comparison.
PotentialReport potential_report(const SimConfig& config, const std::vector<double>& growth_times,
                                 const SuiteOptions& options);

/// Sample times 1, 2, 4, ... below T, then T itself (empty for T <= 0).
std::vector<double> growth_sample_times(double T);

/// Duality check times: the configured list clipped to [0, T], else T/4, T/2, T.
std::vector<double> duality_times(const SimConfig& config);

/// Time stepping plus every enabled suite.
SuiteResult run_suite(const SimConfig& config, const SuiteOptions& options = {});

/// Potential suite alone, no time stepping.
SuiteResult verify_potential(const SimConfig& config, const SuiteOptions& options = {});

}  // namespace elwave
