#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "chemowave/grid.hpp"
#include "chemowave/kernels.hpp"
#include "chemowave/report.hpp"

namespace chemowave {

struct SlabConfig {
  double a = 60.0;
  double theta = 0.005;
  double tau = 1.0;
  double dx = 0.05;  // rounded so that x = 0 is a node
  ChemoParams params;
  KernelSpec spec = KernelSpec::exponential();
  double damping = 1.0;  // first Newton step length tried
  double tol = 1e-9;
  int max_iter = 100;
  double tau_step = 0.1;

  /// min{1/100, (1 - 2|chi|/sigma) / (1 + |chi|/sigma)}
  double theta0() const;
  Grid1D grid() const;
  void validate() const;
};

struct SlabSolution {
  double c = 0.0;
  Field u;   // extensions (1, 0)
  Field v;   // chi K_sigma * u~ (not scaled by tau)
  Field vx;
  double residual = 0.0;
  int iterations = 0;
  double tau = 0.0;
  bool converged = false;
  std::vector<double> tau_path;
  std::vector<double> c_path;
  SlabConfig config;
};

/// Discrete residual of -c u_x + tau (v u)_x = u_xx + u(1-u) at interior
/// nodes, with v computed from u itself. Boundary entries are 0.
std::vector<double> slab_residual(double c, const Field& u, const SlabConfig& config);

/// The linear problem of the fixed-point map: u_bar with
/// -c u_bar_x + tau (v u_bar)_x = u_bar_xx + u_prev(1 - u_prev),
/// u_bar(-a) = 1, u_bar(a) = 0, v = chi K_sigma * u~_prev.
/// Throws SolverError when the system is numerically singular.
Field solve_linear_bvp(double c, const Field& u_prev, const SlabConfig& config);

/// One application of S_tau: (c + theta - max_{x>=0} u, u_bar).
std::pair<double, Field> apply_operator(double c, const Field& u, const SlabConfig& config);

/// max of u over x >= 0 with three-point parabolic refinement at an
/// interior maximiser.
double max_right_half(const Field& u);

/// Solves the slab problem by continuation in tau from 0 to config.tau.
/// With a seed the continuation is skipped and the solve starts from it.
/// Never throws on non-convergence; the result is flagged instead.
SlabSolution fixed_point(const SlabConfig& config, const SlabSolution* seed = nullptr);

/// Solves for each a in turn, seeding each from the previous profile.
/// Throws SolverError if any member fails to converge.
std::vector<SlabSolution> continue_in_a(const SlabConfig& config, const std::vector<double>& a_list);

/// Upper bound, monotonicity on [0, a], u >= theta on [-a, 0], left plateau.
BoundsReport slab_bounds_check(const SlabSolution& sol);

}  // namespace chemowave
