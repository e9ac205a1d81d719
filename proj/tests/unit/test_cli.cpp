#include <doctest.h>

#include <sys/wait.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "elwave/reports.hpp"
#include "elwave/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kScratch = fs::temp_directory_path() / "elwave_cli_test";

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ELWAVE_CLI_PATH) + " " + args + " > " +
                          (kScratch / "stdout.txt").string() + " 2> " +
                          (kScratch / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

fs::path write_json(const std::string& name, const json& doc) {
  const fs::path p = kScratch / name;
  std::ofstream(p) << doc.dump(2);
  return p;
}

json small_config() {
  return json::parse(R"({
    "lame": {"a": 0.6, "b": 1.0},
    "damping": {"kind": "Critical", "V0": 4.0},
    "init": {"L": 1.0,
             "u0": [{"center": [0, 0], "radius": 1.0, "amplitude": [1, 0.5]}],
             "u1": [{"center": [0.1, -0.1], "radius": 0.85, "amplitude": [0, 1]}]},
    "T": 8.0,
    "case": "StrongDamping",
    "resolution": 4,
    "output_stride": 2,
    "suites": {"multiplier": true, "potential": false, "rates": true},
    "tolerances": {"energy": 0.05, "v_identity": 0.1, "multiplier": 0.1}
  })");
}

struct Scratch {
  Scratch() {
    fs::remove_all(kScratch);
    fs::create_directories(kScratch);
  }
  ~Scratch() { fs::remove_all(kScratch); }
};

}  // namespace

TEST_CASE("run writes series, reports and manifest") {
  Scratch s;
  const fs::path cfg = write_json("run.json", small_config());
  const fs::path out = kScratch / "out";
  const int code = run_cli("run --config " + cfg.string() + " --out " + out.string() + " --threads 2");
  REQUIRE(code <= 1);

  const auto rows = lines(slurp(out / "series.csv"));
  REQUIRE(rows.size() > 2);
  CHECK(rows[0] == elwave::kSeriesHeader);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream row(rows[i]);
    int fields = 0;
    for (std::string cell; std::getline(row, cell, ',');) {
      ++fields;
      double v = 0.0;
      const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      REQUIRE(r.ec == std::errc());
      REQUIRE(r.ptr == cell.data() + cell.size());
      CHECK(elwave::format_double(v) == cell);  // shortest round-trip form
    }
    CHECK(fields == 9);
  }
  CHECK(rows[1].rfind("0,", 0) == 0);
  CHECK(rows.back().rfind("8,", 0) == 0);

  CHECK(fs::exists(out / "reports" / "multiplier.json"));
  CHECK(fs::exists(out / "reports" / "rate.json"));
  CHECK_FALSE(fs::exists(out / "reports" / "potential.json"));

  const json m = json::parse(slurp(out / "manifest.json"));
  CHECK(m["threads"] == 2);
  CHECK(m["config"]["T"] == 8.0);
  CHECK(m["steps"].get<int>() > 0);
  CHECK(m["records"].get<std::size_t>() == rows.size() - 1);
  CHECK(m["verdicts"].is_array());
  CHECK(m["version"] == elwave::kVersion);
  // The exit status follows the gating verdicts.
  CHECK((code == 0) == m["pass"].get<bool>());
}

TEST_CASE("run is deterministic across thread counts") {
  Scratch s;
  const fs::path cfg = write_json("run.json", small_config());
  run_cli("run --config " + cfg.string() + " --out " + (kScratch / "a").string() + " --threads 1");
  run_cli("run --config " + cfg.string() + " --out " + (kScratch / "b").string() + " --threads 3");
  CHECK(slurp(kScratch / "a" / "series.csv") == slurp(kScratch / "b" / "series.csv"));
}

TEST_CASE("verify-potential exit codes") {
  Scratch s;
  json doc = small_config();
  doc["T"] = 4.0;
  const fs::path ok = write_json("pot.json", doc);
  CHECK(run_cli("verify-potential --config " + ok.string() + " --out " +
                (kScratch / "ok").string()) == 0);
  CHECK(fs::exists(kScratch / "ok" / "reports" / "potential.json"));
  CHECK_FALSE(fs::exists(kScratch / "ok" / "series.csv"));

  // An impossible Poisson tolerance is a verdict failure, not an error.
  doc["tolerances"]["poisson"] = 1e-15;
  const fs::path strict = write_json("strict.json", doc);
  CHECK(run_cli("verify-potential --config " + strict.string() + " --out " +
                (kScratch / "strict").string()) == 1);
  const json m = json::parse(slurp(kScratch / "strict" / "manifest.json"));
  CHECK(m["pass"] == false);
}

TEST_CASE("configuration and IO errors exit with 2") {
  Scratch s;
  const std::string out = " --out " + (kScratch / "out").string();
  CHECK(run_cli("run --config " + (kScratch / "missing.json").string() + out) == 2);

  std::ofstream(kScratch / "broken.json") << "{\"lame\": [";
  CHECK(run_cli("run --config " + (kScratch / "broken.json").string() + out) == 2);
  CHECK(slurp(kScratch / "stderr.txt").find("line") != std::string::npos);

  json doc = small_config();
  doc["extra"] = true;
  CHECK(run_cli("run --config " + write_json("extra.json", doc).string() + out) == 2);
  CHECK(slurp(kScratch / "stderr.txt").find("config.extra") != std::string::npos);

  doc = small_config();
  doc["resolution"] = 400;
  CHECK(run_cli("run --config " + write_json("big.json", doc).string() + out +
                " --memory-cap-mb 1") == 2);
  CHECK(slurp(kScratch / "stderr.txt").find("resource error") != std::string::npos);

  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("run --out x") == 2);
}

TEST_CASE("sweep writes one directory per cell and a summary") {
  Scratch s;
  json base = small_config();
  base.erase("damping");
  base.erase("case");
  write_json("base.json", base);

  const json empty = {{"base_config", "base.json"},
                      {"V0_over_b", json::array()},
                      {"delta", {0.1}},
                      {"resolution", {4}}};
  CHECK(run_cli("sweep --config " + write_json("empty.json", empty).string() + " --out " +
                (kScratch / "empty").string()) == 0);
  const auto header_only = lines(slurp(kScratch / "empty" / "summary.csv"));
  REQUIRE(header_only.size() == 1);
  CHECK(header_only[0] == elwave::kSummaryHeader);

  const json grid = {{"base_config", "base.json"},
                     {"V0_over_b", {1.5, 4.0}},
                     {"delta", {0.1}},
                     {"resolution", {3, 4}}};
  const fs::path out = kScratch / "grid";
  const int code = run_cli("sweep --config " + write_json("grid.json", grid).string() +
                           " --out " + out.string());
  CHECK(code <= 1);
  int dirs = 0;
  for (const auto& e : fs::directory_iterator(out)) {
    if (!e.is_directory()) continue;
    ++dirs;
    CHECK(fs::exists(e.path() / "manifest.json"));
    CHECK(fs::exists(e.path() / "series.csv"));
  }
  CHECK(dirs == 4);
  const auto rows = lines(slurp(out / "summary.csv"));
  REQUIRE(rows.size() == 5);
  CHECK(rows[1].rfind("V0b_1.5__delta_0.1__res_3,1.5,0.1,3,IntermediateDamping,1.4,", 0) == 0);
  CHECK(rows[4].find(",StrongDamping,2,") != std::string::npos);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].substr(rows[i].size() - 3) == ",ok");
}
