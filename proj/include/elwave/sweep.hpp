#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "elwave/reports.hpp"
#include "elwave/suite.hpp"

namespace elwave {

/// Cartesian product of V0/b, delta and resolution over a base config.
struct SweepSpec {
  nlohmann::json base;
  std::vector<double> V0_over_b;
  std::vector<double> delta;
  std::vector<double> resolution;
};

/// Keys: base (config object) or base_config (path relative to the sweep
/// file's directory), V0_over_b, delta, resolution. Unknown keys are errors.
SweepSpec parse_sweep(const nlohmann::json& doc, const std::filesystem::path& base_dir);
SweepSpec load_sweep(const std::filesystem::path& path);

/// Case implied by V0/b: 0 is Undamped, (0, 1] WeakDamping, (1, 2]
/// IntermediateDamping, above 2 StrongDamping.
DampingCase case_for_ratio(double V0_over_b);

/// Base config with one sweep cell's values applied (damping kind and case
/// follow V0/b).
nlohmann::json cell_config(const SweepSpec& spec, double V0_over_b, double delta, double resolution);

std::string cell_name(double V0_over_b, double delta, double resolution);

inline constexpr const char* kSummaryHeader =
    "cell,V0_over_b,delta,resolution,case,envelope_exponent,fitted_exponent,energy_identity_residual,"
    "rates_pass,pass,status";

struct SweepOutcome {
  std::size_t cells = 0;
  std::size_t failed = 0;   // verdict failures
  std::size_t errored = 0;  // config or runtime errors
};

/// Runs every cell into out_dir/<cell>/ and writes out_dir/summary.csv. A cell
/// error is recorded in its summary row and the sweep moves on.
SweepOutcome run_sweep(const SweepSpec& spec, const std::filesystem::path& out_dir,
                       const SuiteOptions& options, const RunInfo& info);

}  // namespace elwave
