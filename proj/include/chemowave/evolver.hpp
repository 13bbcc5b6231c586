#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chemowave/grid.hpp"
#include "chemowave/kernels.hpp"

namespace chemowave {

struct InitialCondition {
  enum class Kind { Step, SmoothedStep, Custom };
  Kind kind = Kind::SmoothedStep;
  double width = 2.0;  // (1 + tanh(-x/width)) / 2
  std::optional<Field> custom;

  static InitialCondition step() { return {Kind::Step, 0.0, std::nullopt}; }
  static InitialCondition smoothed(double width = 2.0) { return {Kind::SmoothedStep, width, std::nullopt}; }
  static InitialCondition from_field(Field f) { return {Kind::Custom, 0.0, std::move(f)}; }
};

/// Numerical flux for (vu)_x. Upwind is plain first order; FluxLimited adds a
/// van Leer limited Lax-Wendroff correction that keeps the scheme TVD.
enum class AdvectionScheme { Upwind, FluxLimited };

struct EvolveConfig {
  Grid1D grid;
  double dt = 0.01;
  double t_max = 10.0;
  double snapshot_every = 1.0;
  ChemoParams params;
  KernelSpec spec = KernelSpec::exponential();
  InitialCondition initial;
  AdvectionScheme scheme = AdvectionScheme::FluxLimited;
  double left_ext = 1.0;
  double right_ext = 0.0;
  double level = 0.5;  // tracked front level; no tracking when right_ext >= level
  /// Abort once the tracked front is this close to x_max. Negative means
  /// max(20, 5% of the domain length).
  double safety_margin = -1.0;
  bool keep_snapshots = true;
  std::function<void(double t, const Field& u)> on_snapshot;

  double effective_margin() const;
  /// Throws ValidationError on dt > dx^2/4, an advective Courant number
  /// above 1, or an inconsistent grid.
  void validate() const;
};

struct Snapshot {
  double t;
  Field u;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<std::pair<double, double>> front_positions;  // (t, x_level)
  double clipped_mass = 0.0;
  double min_before_clip = 0.0;
  double max_u = 0.0;
  double t_end = 0.0;
  std::size_t steps = 0;
  bool aborted = false;
  std::string abort_reason;
};

struct SpeedEstimate {
  enum class Method { LevelSetFit, IntegralIdentity };
  double c = 0.0;
  Method method = Method::LevelSetFit;
  double t_start = 0.0;
  double t_end = 0.0;
  double stderr_c = 0.0;
  std::size_t samples = 0;
};

Trajectory evolve(const EvolveConfig& config);

/// Largest x with u(x) >= level, linearly interpolated to the crossing.
/// Throws ValidationError if u never reaches the level.
double front_position(const Field& u, double level);

/// Least-squares slope of front position against time over the last
/// window_fraction of the trajectory.
SpeedEstimate measure_speed(const Trajectory& traj, double level = 0.5, double window_fraction = 0.4);

/// Same fit on explicit (t, x) samples.
SpeedEstimate fit_speed(const std::vector<std::pair<double, double>>& positions, double window_fraction);

/// int u(1-u) dx by the midpoint rule; extensions must be 0 or 1.
double speed_from_integral(const Field& u);

}  // namespace chemowave
