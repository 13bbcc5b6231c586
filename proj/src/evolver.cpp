#include "chemowave/evolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "chemowave/convolve.hpp"
#include "chemowave/linalg.hpp"

namespace chemowave {

double EvolveConfig::effective_margin() const {
  if (safety_margin >= 0.0) return safety_margin;
  return std::max(20.0, 0.05 * (grid.x_max - grid.x_min));
}

void EvolveConfig::validate() const {
  grid.validate();
  params.validate();
  const double dx = grid.dx();
  if (!(dt > 0.0) || !(t_max > 0.0) || !(snapshot_every > 0.0))
    throw ValidationError("dt, t_max and snapshot_every must be positive");
  if (dt > 0.25 * dx * dx * (1.0 + 1e-12)) throw ValidationError("dt must not exceed dx^2/4");
  const double vmax = 0.5 * std::abs(params.chi) * params.upper_bound_u();
  if (vmax * dt > dx) throw ValidationError("advective Courant number |chi|/2 * dt/dx exceeds 1");
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("front level must lie in (0, 1)");
  if (initial.kind == InitialCondition::Kind::Custom) {
    if (!initial.custom) throw ValidationError("custom initial condition without a field");
    if (!(initial.custom->grid == grid)) throw ValidationError("custom initial field is on a different grid");
    initial.custom->validate();
  }
  if (initial.kind == InitialCondition::Kind::SmoothedStep && !(initial.width > 0.0))
    throw ValidationError("smoothed step width must be positive");
}

namespace {

Field initial_field(const EvolveConfig& cfg) {
  Field u(cfg.grid, 0.0, cfg.left_ext, cfg.right_ext);
  switch (cfg.initial.kind) {
    case InitialCondition::Kind::Step:
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = cfg.grid.x(i) < 0.0 ? 1.0 : 0.0;
      break;
    case InitialCondition::Kind::SmoothedStep:
      for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = 0.5 * (1.0 + std::tanh(-cfg.grid.x(i) / cfg.initial.width));
      break;
    case InitialCondition::Kind::Custom:
      u.values = cfg.initial.custom->values;
      break;
  }
  u[0] = cfg.left_ext;
  u[u.size() - 1] = cfg.right_ext;
  return u;
}

double van_leer(double r) { return (r + std::abs(r)) / (1.0 + std::abs(r)); }

// Face fluxes F_{i+1/2}, i = 0..n-2.
void advective_fluxes(const Field& u, const Field& v, double dt, double dx, AdvectionScheme scheme,
                      std::vector<double>& flux) {
  const std::size_t n = u.size();
  flux.assign(n - 1, 0.0);
  auto at = [&](long k) {
    if (k < 0) return u.left_ext;
    if (k >= static_cast<long>(n)) return u.right_ext;
    return u[static_cast<std::size_t>(k)];
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = 0.5 * (v[i] + v[i + 1]);
    const long li = static_cast<long>(i);
    const double jump = u[i + 1] - u[i];
    double f = a >= 0.0 ? a * u[i] : a * u[i + 1];
    if (scheme == AdvectionScheme::FluxLimited && jump != 0.0) {
      const double upstream = a >= 0.0 ? at(li) - at(li - 1) : at(li + 2) - at(li + 1);
      const double courant = std::abs(a) * dt / dx;
      f += 0.5 * std::abs(a) * (1.0 - courant) * van_leer(upstream / jump) * jump;
    }
    flux[i] = f;
  }
}

}  // namespace

Trajectory evolve(const EvolveConfig& cfg) {
  cfg.validate();
  const Grid1D& g = cfg.grid;
  const std::size_t n = g.n;
  const double dx = g.dx();
  const double dt = cfg.dt;
  const double r = dt / (dx * dx);
  const double bound = cfg.params.upper_bound_u();
  const double margin = cfg.effective_margin();

  std::optional<AdvectionOperator> op;
  if (cfg.params.chi != 0.0) op.emplace(g, cfg.spec, cfg.params);

  Trajectory traj;
  Field u = initial_field(cfg);
  traj.max_u = u.max();
  traj.min_before_clip = u.min();

  const auto steps = static_cast<std::size_t>(std::llround(cfg.t_max / dt));
  const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.snapshot_every / dt)));

  Tridiagonal m(n - 2);
  for (std::size_t k = 0; k < n - 2; ++k) {
    m.lower[k] = -r;
    m.diag[k] = 1.0 + 2.0 * r;
    m.upper[k] = -r;
  }

  auto record = [&](double t) {
    if (cfg.keep_snapshots) traj.snapshots.push_back({t, u});
    if (cfg.on_snapshot) cfg.on_snapshot(t, u);
    if (cfg.right_ext < cfg.level && (u.max() >= cfg.level || u.left_ext >= cfg.level)) {
      const double x = front_position(u, cfg.level);
      traj.front_positions.emplace_back(t, x);
      if (x > g.x_max - margin) {
        traj.aborted = true;
        traj.abort_reason = "front reached the right safety margin";
      }
    }
  };
  record(0.0);

  std::vector<double> rhs(n - 2), flux;
  for (std::size_t step = 1; step <= steps && !traj.aborted; ++step) {
    Field v;
    if (op) {
      v = op->advection(u);
      advective_fluxes(u, v, dt, dx, cfg.scheme, flux);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      double f = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / (dx * dx) + u[i] * (1.0 - u[i]);
      if (op) f -= (flux[i] - flux[i - 1]) / dx;
      rhs[i - 1] = dt * f;
    }
    const auto delta = solve_tridiagonal(m, rhs);
    for (std::size_t i = 1; i + 1 < n; ++i) u[i] += delta[i - 1];

    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (u[i] < 0.0) {
        traj.min_before_clip = std::min(traj.min_before_clip, u[i]);
        traj.clipped_mass += -u[i] * dx;
        u[i] = 0.0;
      }
      if (!std::isfinite(u[i])) {
        traj.aborted = true;
        traj.abort_reason = "non-finite value";
        break;
      }
    }
    traj.max_u = std::max(traj.max_u, u.max());
    traj.steps = step;
    traj.t_end = static_cast<double>(step) * dt;
    if (traj.max_u > 10.0 * bound) {
      traj.aborted = true;
      traj.abort_reason = "blow-up: u exceeded ten times its a priori bound";
    }
    if (step % stride == 0 || step == steps) record(traj.t_end);
  }
  return traj;
}

double front_position(const Field& u, double level) {
  const std::size_t n = u.size();
  for (std::size_t i = n; i-- > 0;) {
    if (u[i] >= level) {
      if (i + 1 == n) return u.grid.x_max;
      const double t = (u[i] - level) / (u[i] - u[i + 1]);
      return u.grid.x(i) + t * u.grid.dx();
    }
  }
  if (u.left_ext >= level) return u.grid.x_min;
  throw ValidationError("front level never attained");
}

SpeedEstimate fit_speed(const std::vector<std::pair<double, double>>& positions, double window_fraction) {
  if (positions.empty()) throw ValidationError("no front positions to fit");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) throw ValidationError("window fraction must be in (0, 1]");
  const double t0 = positions.front().first;
  const double t1 = positions.back().first;
  const double start = t1 - window_fraction * (t1 - t0);
  std::vector<std::pair<double, double>> w;
  for (const auto& p : positions)
    if (p.first >= start - 1e-9 * std::max(1.0, std::abs(t1))) w.push_back(p);
  if (w.size() < 5) throw ValidationError("fewer than 5 snapshots in the fit window");

  double mt = 0.0, mx = 0.0;
  for (const auto& [t, x] : w) {
    mt += t;
    mx += x;
  }
  mt /= static_cast<double>(w.size());
  mx /= static_cast<double>(w.size());
  double stt = 0.0, stx = 0.0;
  for (const auto& [t, x] : w) {
    stt += (t - mt) * (t - mt);
    stx += (t - mt) * (x - mx);
  }
  SpeedEstimate est;
  est.c = stx / stt;
  double ssr = 0.0;
  for (const auto& [t, x] : w) {
    const double e = x - (mx + est.c * (t - mt));
    ssr += e * e;
  }
  est.stderr_c = std::sqrt(ssr / static_cast<double>(w.size() - 2) / stt);
  est.t_start = w.front().first;
  est.t_end = w.back().first;
  est.samples = w.size();
  return est;
}

SpeedEstimate measure_speed(const Trajectory& traj, double level, double window_fraction) {
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("level must lie in (0, 1)");
  std::vector<std::pair<double, double>> pos;
  pos.reserve(traj.snapshots.size());
  for (const auto& s : traj.snapshots) {
    const auto& u = s.u;
    if (u.max() < level && u.left_ext < level) continue;
    pos.emplace_back(s.t, front_position(u, level));
  }
  if (pos.empty()) throw ValidationError("front level never attained");
  return fit_speed(pos, window_fraction);
}

double speed_from_integral(const Field& u) {
  auto ok = [](double e) { return e == 0.0 || e == 1.0; };
  if (!ok(u.left_ext) || !ok(u.right_ext)) throw ValidationError("integral speed needs extensions in {0, 1}");
  const double dx = u.grid.dx();
  double s = 0.0;
  for (double x : u.values) s += x * (1.0 - x);
  return s * dx;
}

}  // namespace chemowave
