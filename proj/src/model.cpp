#include "elwave/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace elwave {

namespace {

// Lattices alive during a full run: three displacement levels, v, V, the two
// initial fields, plus scratch for diagnostics and operator output.
constexpr std::size_t kLatticesPerRun = 18;

std::string fmt_node(int i, int j, double x1, double x2) {
  std::ostringstream os;
  os << "node (" << i << ", " << j << ") at x = (" << x1 << ", " << x2 << ")";
  return os.str();
}

void add_bumps(const std::vector<Bump>& bumps, VectorField2& field) {
  const Grid2D& g = field.grid();
  for (const Bump& bump : bumps) {
    for (int j = 0; j < g.n; ++j) {
      const double x2 = g.coord(j);
      if (std::abs(x2 - bump.center[1]) >= bump.radius) continue;
      for (int i = 0; i < g.n; ++i) {
        const double s = bump.shape(g.coord(i), x2);
        if (s == 0.0) continue;
        field.c1(i, j) += bump.amplitude[0] * s;
        field.c2(i, j) += bump.amplitude[1] * s;
      }
    }
  }
}

}  // namespace

void validate(const LameParams& lame) {
  if (!(lame.a > 0.0) || !(lame.b > lame.a) || !std::isfinite(lame.b)) {
    std::ostringstream msg;
    msg << "Lame speeds must satisfy 0 < a < b (got a=" << lame.a << ", b=" << lame.b << ")";
    throw ConfigError(msg.str());
  }
}

double critical_damping(double V0, double x1, double x2) {
  return V0 / std::sqrt(1.0 + x1 * x1 + x2 * x2);
}

bool RegionOmega::contains(double x1, double x2) const {
  const double r = radius();
  return x1 * x1 + x2 * x2 <= r * r;
}

double Bump::shape(double x1, double x2) const {
  const double d1 = x1 - center[0];
  const double d2 = x2 - center[1];
  const double q = (d1 * d1 + d2 * d2) / (radius * radius);
  if (q >= 1.0) return 0.0;
  const double w = 1.0 - q;
  const double w2 = w * w;
  return w2 * w2;
}

void validate(const InitialDataSpec& spec) {
  if (!(spec.L > 0.0)) throw ConfigError("init.L must be positive");
  auto check = [&](const std::vector<Bump>& bumps, const char* name) {
    for (std::size_t k = 0; k < bumps.size(); ++k) {
      const Bump& b = bumps[k];
      if (!(b.radius > 0.0)) {
        std::ostringstream msg;
        msg << "init." << name << "[" << k << "]: radius must be positive";
        throw ConfigError(msg.str());
      }
      const double reach = std::hypot(b.center[0], b.center[1]) + b.radius;
      if (reach > spec.L) {
        std::ostringstream msg;
        msg << "init." << name << "[" << k << "]: bump reaches |x| = " << reach
            << " beyond the support radius L = " << spec.L;
        throw ConfigError(msg.str());
      }
    }
  };
  check(spec.u0, "u0");
  check(spec.u1, "u1");
}

const char* to_string(DampingCase c) {
  switch (c) {
    case DampingCase::StrongDamping: return "StrongDamping";
    case DampingCase::IntermediateDamping: return "IntermediateDamping";
    case DampingCase::Undamped: return "Undamped";
    case DampingCase::WeakDamping: return "WeakDamping";
  }
  return "?";
}

const char* to_string(DampingKind k) {
  switch (k) {
    case DampingKind::Zero: return "Zero";
    case DampingKind::Critical: return "Critical";
    case DampingKind::Tabulated: return "Tabulated";
  }
  return "?";
}

void validate(const SimConfig& config) {
  validate(config.lame);
  validate(config.init);
  if (!(config.T >= 0.0) || !std::isfinite(config.T)) throw ConfigError("T must be >= 0");
  if (!(config.cfl_safety > 0.0 && config.cfl_safety < 1.0)) {
    throw ConfigError("cfl_safety must lie in (0, 1)");
  }
  if (config.output_stride < 1) throw ConfigError("output_stride must be >= 1");
  if (!(config.resolution > 0.0)) throw ConfigError("resolution must be positive");
  if (!(config.grid_margin >= 0.0)) throw ConfigError("grid_margin must be >= 0");
  if (!(config.t0 >= 0.0)) throw ConfigError("t0 must be >= 0");
  if (!(config.tol_factor >= 1.0)) throw ConfigError("tol_factor must be >= 1");

  const double b = config.lame.b;
  const double V0 = config.damping.V0;
  const bool zero = config.damping.kind == DampingKind::Zero;
  if (!zero && !(V0 > 0.0)) throw ConfigError("damping.V0 must be positive");

  std::ostringstream msg;
  switch (config.damping_case) {
    case DampingCase::StrongDamping:
      if (zero || !(V0 > 2.0 * b)) {
        msg << "StrongDamping requires V0 > 2b (V0=" << V0 << ", b=" << b << ")";
        throw ConfigError(msg.str());
      }
      break;
    case DampingCase::IntermediateDamping:
      if (zero || !(V0 > b && V0 <= 2.0 * b)) {
        msg << "IntermediateDamping requires b < V0 <= 2b (V0=" << V0 << ", b=" << b << ")";
        throw ConfigError(msg.str());
      }
      if (!(config.delta > 0.0 && config.delta < V0 / b - 1.0)) {
        msg << "IntermediateDamping requires 0 < delta < V0/b - 1 (delta=" << config.delta << ")";
        throw ConfigError(msg.str());
      }
      break;
    case DampingCase::Undamped:
      if (!zero) throw ConfigError("Undamped case requires damping.kind = Zero");
      break;
    case DampingCase::WeakDamping:
      if (zero || !(V0 <= b)) {
        msg << "WeakDamping requires 0 < V0 <= b (V0=" << V0 << ", b=" << b << ")";
        throw ConfigError(msg.str());
      }
      break;
  }
  if (config.potential.resolution <= 0.0) throw ConfigError("potential.resolution must be positive");
  if (config.potential.near_cells < 0.0) throw ConfigError("potential.near_cells must be >= 0");
  if (config.rate_window) {
    const auto [lo, hi] = *config.rate_window;
    if (!(lo > 0.0) || !(hi >= 2.0 * lo)) {
      throw ConfigError("rate_window must satisfy 0 < t_lo and t_hi >= 2 t_lo");
    }
  }
}

std::size_t estimated_run_bytes(const Grid2D& grid) {
  const auto side = static_cast<std::size_t>(grid.n + 2 * Lattice::kPad);
  return kLatticesPerRun * side * side * sizeof(double);
}

Grid2D build_grid(const SimConfig& config, std::size_t memory_cap_bytes) {
  if (!(config.T > 0.0)) throw ConfigError("build_grid: T must be positive");
  if (!(config.init.L > 0.0)) throw ConfigError("build_grid: L must be positive");
  if (!(config.resolution > 0.0)) throw ConfigError("build_grid: resolution must be positive");

  const double dx = 1.0 / config.resolution;
  const double margin = std::max(config.grid_margin, 4.0 * dx);
  const double reach = config.init.L + config.lame.b * config.T + margin;
  // Guard against 2R * res landing a hair above an integer through roundoff.
  int n = static_cast<int>(std::ceil(2.0 * reach * config.resolution - 1e-9));
  n = std::max(n, 16);
  Grid2D grid = make_grid(n, dx);

  const std::size_t bytes = estimated_run_bytes(grid);
  if (bytes > memory_cap_bytes) {
    std::ostringstream msg;
    msg << "grid of " << n << "^2 nodes needs ~" << (bytes >> 20) << " MiB, over the cap of "
        << (memory_cap_bytes >> 20) << " MiB";
    throw ResourceError(msg.str());
  }
  return grid;
}

DampingField sample_damping(const DampingProfile& profile, const Grid2D& grid) {
  DampingField out{Lattice(grid), profile.V0, 0.0};
  switch (profile.kind) {
    case DampingKind::Zero:
      out.V0 = 0.0;
      return out;
    case DampingKind::Critical:
      for (int j = 0; j < grid.n; ++j) {
        for (int i = 0; i < grid.n; ++i) {
          out.V(i, j) = critical_damping(profile.V0, grid.coord(i), grid.coord(j));
        }
      }
      break;
    case DampingKind::Tabulated:
      if (profile.table.size() != grid.size()) {
        std::ostringstream msg;
        msg << "tabulated damping has " << profile.table.size() << " values, grid needs "
            << grid.size();
        throw ConfigError(msg.str());
      }
      for (int j = 0; j < grid.n; ++j) {
        for (int i = 0; i < grid.n; ++i) {
          out.V(i, j) = profile.table[static_cast<std::size_t>(j) * grid.n + i];
        }
      }
      break;
  }

  for (int j = 0; j < grid.n; ++j) {
    const double x2 = grid.coord(j);
    for (int i = 0; i < grid.n; ++i) {
      const double x1 = grid.coord(i);
      const double v = out.V(i, j);
      const double lower = profile.V0 / (1.0 + std::hypot(x1, x2));
      if (!std::isfinite(v) || !(v >= lower)) {
        std::ostringstream msg;
        msg << "damping violates V0/(1+|x|) <= V(x) at " << fmt_node(i, j, x1, x2) << ": V=" << v
            << " < " << lower;
        throw ConfigError(msg.str());
      }
      out.linf = std::max(out.linf, v);
    }
  }
  return out;
}

InitialData sample_initial_data(const InitialDataSpec& spec, const Grid2D& grid) {
  validate(spec);
  InitialData data{VectorField2(grid), VectorField2(grid), spec.L};
  add_bumps(spec.u0, data.u0);
  add_bumps(spec.u1, data.u1);

  const double L2 = spec.L * spec.L;
  for (int j = 0; j < grid.n; ++j) {
    const double x2 = grid.coord(j);
    for (int i = 0; i < grid.n; ++i) {
      const double x1 = grid.coord(i);
      if (x1 * x1 + x2 * x2 <= L2) continue;
      if (data.u0.c1(i, j) != 0.0 || data.u0.c2(i, j) != 0.0 || data.u1.c1(i, j) != 0.0 ||
          data.u1.c2(i, j) != 0.0) {
        throw ConfigError("initial data nonzero outside |x| <= L at " + fmt_node(i, j, x1, x2));
      }
    }
  }
  return data;
}

}  // namespace elwave
