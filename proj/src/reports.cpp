#include "elwave/reports.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "elwave/config_io.hpp"

namespace elwave {

using nlohmann::json;

namespace {

const char* family_name(WeightPair::Family f) {
  switch (f) {
    case WeightPair::Family::Quadratic: return "Quadratic";
    case WeightPair::Family::Power: return "Power";
    case WeightPair::Family::Constant: return "Constant";
  }
  return "?";
}

json residual_json(const PoissonResidual& r) {
  return {{"value", r.value}, {"absolute", r.absolute}};
}

json ratio_json(const BoundedRatio& r) {
  return {{"claim", r.claim},           {"t", r.t},
          {"ratio", r.ratio},           {"max_first_half", r.max_first_half},
          {"end_value", r.end_value},   {"tol_factor", r.tol_factor},
          {"pass", r.pass}};
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string series_csv(std::span<const DiagnosticsRecord> records) {
  std::string out = kSeriesHeader;
  out += '\n';
  for (const auto& r : records) {
    const double row[] = {r.t,
                          r.E_u,
                          r.l2_sq,
                          r.dissipation,
                          r.energy_identity_residual,
                          r.support_radius,
                          r.v_identity_residual,
                          r.e_t,
                          r.F_t};
    bool first = true;
    for (double v : row) {
      if (!first) out += ',';
      out += format_double(v);
      first = false;
    }
    out += '\n';
  }
  return out;
}

json to_json(const MultiplierReport& m) {
  json samples = json::array();
  for (const auto& s : m.conditions.samples) {
    samples.push_back({{"t", s.t},
                       {"omega_radius", s.omega_radius},
                       {"min_V", s.min_V},
                       {"cond_i", s.cond_i},
                       {"cond_ii", s.cond_ii},
                       {"c1", s.c1},
                       {"c2", s.c2},
                       {"c3", s.c3},
                       {"holds", s.holds}});
  }
  const MultiplierConstants& c = m.conditions.constants;
  json out = {
      {"weights", {{"family", family_name(m.family)}, {"exponent", m.exponent}}},
      {"conditions",
       {{"samples", samples},
        {"located_t0", optional_json(m.conditions.located_t0)},
        {"certified", m.conditions.certified()},
        {"gating", m.conditions_gating}}},
      {"constants",
       {{"C1", c.C1},
        {"C2", c.C2},
        {"C3", c.C3},
        {"C_t0", c.C_t0},
        {"t0", c.t0},
        {"C_star", c.C_star},
        {"C_star_expected", m.C_star_expected}}},
  };
  if (m.identity) {
    out["identity"] = {{"normalized", m.identity->normalized}, {"max_abs", m.identity->max_abs}};
  } else {
    out["identity"] = nullptr;
  }
  return out;
}

json to_json(const PotentialReport& p) {
  json samples = json::array();
  for (const auto& s : p.growth.samples) {
    samples.push_back({{"t", s.t},
                       {"radius", s.radius},
                       {"ring", s.ring},
                       {"total", s.total},
                       {"envelope", s.envelope},
                       {"pass", s.pass}});
  }
  json out = {
      {"source",
       {{"resolution", p.resolution},
        {"L", p.L},
        {"nodes", p.source_nodes},
        {"l1_norm", p.rho_l1},
        {"linf_norm", p.rho_linf}}},
      {"poisson", residual_json(p.poisson)},
      {"poisson_fine", p.poisson_fine ? residual_json(*p.poisson_fine) : json(nullptr)},
      {"poisson_order", optional_json(p.poisson_order)},
      {"far_field",
       {{"r_inner", p.far_field.r_inner},
        {"r_outer", p.far_field.r_outer},
        {"sup", p.far_field.sup},
        {"bound", p.far_field.bound},
        {"pass", p.far_field.pass}}},
      {"pointwise",
       {{"max_grad", p.growth.max_grad_inner},
        {"bound", p.growth.pointwise_bound},
        {"pass", p.growth.pointwise_pass}}},
      {"I_h",
       {{"value", p.growth.I_h}, {"bound", p.growth.I_h_bound}, {"pass", p.growth.I_h_pass}}},
      {"growth", {{"samples", samples}, {"pass", p.growth.growth_pass}}},
      {"quadrature_slack", kQuadratureSlack},
  };
  return out;
}

json to_json(const RateReport& r) {
  json lemma = json::array();
  for (const auto& c : r.lemma26) {
    lemma.push_back({{"t", c.t},
                     {"epsilon", c.epsilon},
                     {"lhs", c.lhs},
                     {"signed_lhs", c.signed_lhs},
                     {"grad_h_sq", c.grad_h_sq},
                     {"grad_v_sq", c.grad_v_sq},
                     {"rhs", c.rhs},
                     {"pass", c.pass}});
  }
  json out = {
      {"case", to_string(r.damping_case)},
      {"window", {r.window.lo, r.window.hi}},
      {"envelope_exponent", optional_json(r.envelope_exponent)},
      {"primary", ratio_json(r.primary)},
      {"l2_growth", r.l2_growth ? ratio_json(*r.l2_growth) : json(nullptr)},
      {"constants_observed", {{"A", r.constants.A}, {"B", r.constants.B}}},
      {"lemma26", lemma},
      {"gating", r.gating},
      {"pass", r.pass()},
  };
  if (r.energy_fit) {
    out["fitted_exponent"] = {{"value", r.energy_fit->exponent},
                              {"log_corrected", r.energy_fit->log_corrected},
                              {"samples", r.energy_fit->samples}};
  } else {
    out["fitted_exponent"] = nullptr;
  }
  if (r.absorption) {
    out["absorption"] = {{"lhs", r.absorption->lhs},
                         {"rhs", r.absorption->rhs},
                         {"C_star", r.absorption->C_star},
                         {"pass", r.absorption->pass}};
  } else {
    out["absorption"] = nullptr;
  }
  return out;
}

json verdicts_json(const std::vector<Verdict>& verdicts) {
  json arr = json::array();
  for (const auto& v : verdicts) {
    arr.push_back({{"name", v.name}, {"pass", v.pass}, {"gating", v.gating}, {"detail", v.detail}});
  }
  return arr;
}

json manifest_json(const SuiteResult& result, const RunInfo& info) {
  json out = {
      {"artifact", "elwave"},
      {"version", kVersion},
      {"command", info.command},
      {"threads", info.threads},
      {"memory_cap_mb", info.memory_cap_bytes >> 20},
      {"config", to_json(result.config)},
      {"wall_seconds", result.wall_seconds},
      {"verdicts", verdicts_json(result.verdicts)},
      {"pass", result.pass()},
  };
  if (result.run) {
    const RunOutput& r = *result.run;
    out["grid"] = {{"radius", r.grid.radius}, {"spacing", r.grid.spacing}, {"n", r.grid.n}};
    out["dt"] = r.dt;
    out["steps"] = r.steps;
    out["records"] = r.records.size();
    out["energy_identity_residual"] = {{"value", r.energy_residual.value},
                                       {"absolute", r.energy_residual.absolute}};
    out["v_identity_residual"] = r.v_identity_residual;
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

void write_outputs(const std::filesystem::path& out_dir, const SuiteResult& result,
                   const RunInfo& info) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "reports", ec);
  if (ec) throw std::runtime_error("cannot create " + (out_dir / "reports").string() + ": " + ec.message());
  if (result.run) write_text(out_dir / "series.csv", series_csv(result.run->records));
  if (result.multiplier) {
    write_text(out_dir / "reports" / "multiplier.json", to_json(*result.multiplier).dump(2) + "\n");
  }
  if (result.potential) {
    write_text(out_dir / "reports" / "potential.json", to_json(*result.potential).dump(2) + "\n");
  }
  if (result.rates) {
    write_text(out_dir / "reports" / "rate.json", to_json(*result.rates).dump(2) + "\n");
  }
  write_text(out_dir / "manifest.json", manifest_json(result, info).dump(2) + "\n");
}

std::string summary_table(const SuiteResult& result) {
  std::ostringstream s;
  std::size_t width = 8;
  for (const auto& v : result.verdicts) width = std::max(width, v.name.size());
  for (const auto& v : result.verdicts) {
    const char* tag = v.pass ? "pass" : (v.gating ? "FAIL" : "fail (informational)");
    s << std::left << std::setw(static_cast<int>(width) + 2) << v.name << std::setw(22) << tag
      << v.detail << '\n';
  }
  s << (result.pass() ? "overall: pass" : "overall: FAIL") << '\n';
  return s.str();
}

}  // namespace elwave
