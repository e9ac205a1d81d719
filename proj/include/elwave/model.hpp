#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "elwave/lattice.hpp"

namespace elwave {

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a run would not fit the configured memory budget.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Lame wave speeds: a is the S-wave speed, b the P-wave speed, 0 < a < b.
struct LameParams {
  double a = 0.0;
  double b = 0.0;

  /// Coefficient of the grad-div coupling, b^2 - a^2.
  double coupling() const { return b * b - a * a; }
};

void validate(const LameParams& lame);

enum class DampingKind { Zero, Critical, Tabulated };

/// V(x). Critical samples V0 (1 + |x|^2)^(-1/2); Tabulated carries one value
/// per grid node (row-major, x1 fastest) and is checked against V0 / (1 + |x|).
struct DampingProfile {
  DampingKind kind = DampingKind::Zero;
  double V0 = 0.0;
  std::vector<double> table;

  static DampingProfile zero() { return {}; }
  static DampingProfile critical(double v0) { return {DampingKind::Critical, v0, {}}; }
};

double critical_damping(double V0, double x1, double x2);

struct DampingField {
  Lattice V;
  double V0 = 0.0;
  double linf = 0.0;
};

/// Disk |x| <= L + b t that contains the support of u(t).
struct RegionOmega {
  double t = 0.0;
  double L = 0.0;
  double b = 0.0;

  double radius() const { return L + b * t; }
  bool contains(double x1, double x2) const;
};

/// c_k (1 - |x - x_c|^2 / r^2)^4 inside |x - x_c| <= r, zero outside.
struct Bump {
  std::array<double, 2> center{0.0, 0.0};
  double radius = 0.0;
  std::array<double, 2> amplitude{0.0, 0.0};

  /// Profile value without the amplitude factor.
  double shape(double x1, double x2) const;
};

struct InitialDataSpec {
  double L = 0.0;
  std::vector<Bump> u0;
  std::vector<Bump> u1;
};

void validate(const InitialDataSpec& spec);

struct InitialData {
  VectorField2 u0;
  VectorField2 u1;
  double L = 0.0;
};

enum class DampingCase { StrongDamping, IntermediateDamping, Undamped, WeakDamping };

const char* to_string(DampingCase c);
const char* to_string(DampingKind k);

struct SuiteFlags {
  bool multiplier = true;
  bool potential = true;
  bool rates = true;
};

struct PotentialOptions {
  /// Points per unit length of the source / evaluation lattice.
  double resolution = 20.0;
  /// Kernel cells nearer than near_cells * dx are integrated exactly.
  double near_cells = 2.0;
  /// Duality check epsilon; zero selects a^2 / 4.
  double epsilon = 0.0;
  std::vector<double> lemma26_times;
};

/// Gates applied to a run's identity residuals.
struct Tolerances {
  double energy = 1e-3;
  double v_identity = 1e-2;
  double multiplier = 1e-2;
  double poisson = 0.02;
};

struct SimConfig {
  LameParams lame;
  DampingProfile damping;
  InitialDataSpec init;
  double T = 0.0;
  double cfl_safety = 0.5;
  double t0 = 1.0;
  double delta = 0.1;
  DampingCase damping_case = DampingCase::Undamped;
  int output_stride = 1;
  double grid_margin = 1.0;
  /// Grid points per unit length.
  double resolution = 10.0;
  SuiteFlags suites;
  PotentialOptions potential;
  /// Late-time fitting window; defaults to [T/4, T].
  std::optional<std::array<double, 2>> rate_window;
  double tol_factor = 1.5;
  Tolerances tolerances;
};

/// Checks the case split (V0 against b), delta range and basic positivity.
void validate(const SimConfig& config);

constexpr std::size_t kDefaultMemoryCapBytes = std::size_t{4096} << 20;

/// Bytes a run on `grid` is expected to hold.
std::size_t estimated_run_bytes(const Grid2D& grid);

/// R = L + b T + margin (margin at least 4 dx), rounded up to whole cells.
Grid2D build_grid(const SimConfig& config, std::size_t memory_cap_bytes = kDefaultMemoryCapBytes);

DampingField sample_damping(const DampingProfile& profile, const Grid2D& grid);

InitialData sample_initial_data(const InitialDataSpec& spec, const Grid2D& grid);

}  // namespace elwave
