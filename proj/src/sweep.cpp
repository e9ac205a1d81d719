#include "elwave/sweep.hpp"

#include <cmath>
#include <iostream>
#include <set>

#include "elwave/config_io.hpp"

namespace elwave {

using nlohmann::json;

namespace {

std::vector<double> number_list(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ConfigError(std::string("sweep.") + key + ": missing");
  if (!it->is_array()) throw ConfigError(std::string("sweep.") + key + ": expected an array");
  std::vector<double> out;
  for (const auto& v : *it) {
    if (!v.is_number()) throw ConfigError(std::string("sweep.") + key + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

SweepSpec parse_sweep(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("sweep: expected an object");
  static const std::set<std::string> known = {"base", "base_config", "V0_over_b", "delta",
                                              "resolution"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!known.count(it.key())) throw ConfigError("sweep." + it.key() + ": unknown key");
  }
  SweepSpec spec;
  const bool inline_base = doc.contains("base");
  const bool file_base = doc.contains("base_config");
  if (inline_base == file_base) throw ConfigError("sweep: give exactly one of base, base_config");
  if (inline_base) {
    spec.base = doc["base"];
  } else {
    if (!doc["base_config"].is_string()) throw ConfigError("sweep.base_config: expected a path");
    const std::filesystem::path p = base_dir / doc["base_config"].get<std::string>();
    try {
      spec.base = json::parse(read_text_file(p));
    } catch (const json::parse_error& e) {
      throw ConfigError(p.string() + ": malformed JSON: " + e.what());
    }
  }
  if (!spec.base.is_object()) throw ConfigError("sweep.base: expected an object");
  spec.V0_over_b = number_list(doc, "V0_over_b");
  spec.delta = number_list(doc, "delta");
  spec.resolution = number_list(doc, "resolution");
  return spec;
}

SweepSpec load_sweep(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": malformed JSON: " + e.what());
  }
  return parse_sweep(doc, path.parent_path());
}

DampingCase case_for_ratio(double r) {
  if (r == 0.0) return DampingCase::Undamped;
  if (r <= 1.0) return DampingCase::WeakDamping;
  if (r <= 2.0) return DampingCase::IntermediateDamping;
  return DampingCase::StrongDamping;
}

json cell_config(const SweepSpec& spec, double V0_over_b, double delta, double resolution) {
  json c = spec.base;
  double b = 0.0;
  if (c.contains("lame") && c["lame"].is_object() && c["lame"].contains("b") &&
      c["lame"]["b"].is_number()) {
    b = c["lame"]["b"].get<double>();
  } else {
    throw ConfigError("sweep.base.lame.b: required to scale V0");
  }
  const DampingCase dc = case_for_ratio(V0_over_b);
  if (dc == DampingCase::Undamped) {
    c["damping"] = {{"kind", "Zero"}, {"V0", 0.0}};
  } else {
    c["damping"] = {{"kind", "Critical"}, {"V0", V0_over_b * b}};
  }
  c["case"] = to_string(dc);
  c["delta"] = delta;
  c["resolution"] = resolution;
  return c;
}

std::string cell_name(double V0_over_b, double delta, double resolution) {
  return "V0b_" + format_double(V0_over_b) + "__delta_" + format_double(delta) + "__res_" +
         format_double(resolution);
}

SweepOutcome run_sweep(const SweepSpec& spec, const std::filesystem::path& out_dir,
                       const SuiteOptions& options, const RunInfo& info) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());

  SweepOutcome outcome;
  std::string summary = std::string(kSummaryHeader) + "\n";
  for (double r : spec.V0_over_b) {
    for (double d : spec.delta) {
      for (double res : spec.resolution) {
        ++outcome.cells;
        const std::string name = cell_name(r, d, res);
        const DampingCase dc = case_for_ratio(r);
        std::string envelope, fitted, energy, rates_pass, pass, status = "ok";
        if (dc == DampingCase::StrongDamping) envelope = format_double(2.0);
        if (dc == DampingCase::IntermediateDamping) envelope = format_double(r - d);
        try {
          const json cfg_doc = cell_config(spec, r, d, res);
          const SimConfig cfg = parse_config(cfg_doc);
          const SuiteResult result = run_suite(cfg, options);
          RunInfo cell_info = info;
          cell_info.command = info.command + " [" + name + "]";
          write_outputs(out_dir / name, result, cell_info);
          if (result.rates && result.rates->energy_fit) {
            fitted = format_double(result.rates->energy_fit->exponent);
          }
          if (result.run) energy = format_double(result.run->energy_residual.value);
          if (result.rates) rates_pass = result.rates->pass() ? "true" : "false";
          pass = result.pass() ? "true" : "false";
          if (!result.pass()) ++outcome.failed;
        } catch (const std::exception& e) {
          ++outcome.errored;
          status = std::string("error: ") + e.what();
          std::cerr << name << ": " << e.what() << '\n';
        }
        summary += csv_field(name) + "," + format_double(r) + "," + format_double(d) + "," +
                   format_double(res) + "," + to_string(dc) + "," + envelope + "," + fitted + "," +
                   energy + "," + rates_pass + "," + pass + "," + csv_field(status) + "\n";
      }
    }
  }
  write_text(out_dir / "summary.csv", summary);
  return outcome;
}

}  // namespace elwave
