// Batch driver: run, sweep and verify-potential.
//
// Exit status: 0 when every gating verdict passes, 1 on a verdict failure,
// 2 on configuration, resource or IO errors.

#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "elwave/config_io.hpp"
#include "elwave/integrator.hpp"
#include "elwave/reports.hpp"
#include "elwave/suite.hpp"
#include "elwave/sweep.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kVerdictFailure = 1;
constexpr int kUsageError = 2;

struct Common {
  std::string config;
  std::string out;
  int threads = 0;
  std::size_t memory_cap_mb = elwave::kDefaultMemoryCapBytes >> 20;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON config (sweep spec for 'sweep')")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "Output directory")->required();
  cmd->add_option("--threads", c.threads, "Worker threads (0 keeps the OpenMP default)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--memory-cap-mb", c.memory_cap_mb, "Reject grids needing more memory")
      ->check(CLI::PositiveNumber);
}

elwave::SuiteOptions suite_options(const Common& c) {
  elwave::SuiteOptions o;
  o.memory_cap_bytes = c.memory_cap_mb << 20;
  return o;
}

elwave::RunInfo run_info(const Common& c, const std::string& command) {
  elwave::RunInfo info;
  info.command = command + " --config " + c.config;
  info.threads = omp_get_max_threads();
  info.memory_cap_bytes = c.memory_cap_mb << 20;
  return info;
}

int finish(const elwave::SuiteResult& result, const Common& c, const std::string& command) {
  elwave::write_outputs(c.out, result, run_info(c, command));
  std::cout << elwave::summary_table(result);
  return result.pass() ? kPass : kVerdictFailure;
}

int cmd_run(const Common& c) {
  const elwave::SimConfig cfg = elwave::load_config(c.config);
  return finish(elwave::run_suite(cfg, suite_options(c)), c, "run");
}

int cmd_verify_potential(const Common& c) {
  const elwave::SimConfig cfg = elwave::load_config(c.config);
  return finish(elwave::verify_potential(cfg, suite_options(c)), c, "verify-potential");
}

int cmd_sweep(const Common& c) {
  const elwave::SweepSpec spec = elwave::load_sweep(c.config);
  const auto outcome = elwave::run_sweep(spec, c.out, suite_options(c), run_info(c, "sweep"));
  std::cout << outcome.cells << " cells, " << outcome.failed << " with failed verdicts, "
            << outcome.errored << " with errors\n";
  if (outcome.errored > 0 || outcome.failed > 0) return kVerdictFailure;
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damped elastic-wave simulator and verification harness"};
  app.set_version_flag("--version", elwave::kVersion);
  app.require_subcommand(1);

  Common run_args, sweep_args, pot_args;
  CLI::App* run = app.add_subcommand("run", "Simulate one config and run its enabled suites");
  add_common(run, run_args);
  CLI::App* sweep = app.add_subcommand("sweep", "Run a grid of V0/b, delta and resolution values");
  add_common(sweep, sweep_args);
  CLI::App* pot = app.add_subcommand("verify-potential", "Potential bounds only, no time stepping");
  add_common(pot, pot_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  const Common& args = run->parsed() ? run_args : sweep->parsed() ? sweep_args : pot_args;
  if (args.threads > 0) omp_set_num_threads(args.threads);

  try {
    if (run->parsed()) return cmd_run(args);
    if (sweep->parsed()) return cmd_sweep(args);
    return cmd_verify_potential(args);
  } catch (const elwave::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const elwave::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
  } catch (const elwave::InstabilityError& e) {
    std::cerr << "instability at step " << e.step() << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kUsageError;
}
