#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "elwave/suite.hpp"

namespace elwave {

inline constexpr const char* kVersion = "1.0.0";

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

inline constexpr const char* kSeriesHeader =
    "t,E_u,l2_sq,dissipation,energy_identity_residual,support_radius,v_identity_residual,e_t,F_t";

std::string series_csv(std::span<const DiagnosticsRecord> records);

nlohmann::json to_json(const MultiplierReport& m);
nlohmann::json to_json(const PotentialReport& p);
nlohmann::json to_json(const RateReport& r);
nlohmann::json verdicts_json(const std::vector<Verdict>& verdicts);

struct RunInfo {
  std::string command;
  int threads = 1;
  std::size_t memory_cap_bytes = kDefaultMemoryCapBytes;
};

nlohmann::json manifest_json(const SuiteResult& result, const RunInfo& info);

/// series.csv (when the run stepped), reports/{multiplier,potential,rate}.json
/// for the suites that ran, and manifest.json. Throws std::runtime_error on IO
/// failure.
void write_outputs(const std::filesystem::path& out_dir, const SuiteResult& result,
                   const RunInfo& info);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Verdict table for standard output.
std::string summary_table(const SuiteResult& result);

}  // namespace elwave
