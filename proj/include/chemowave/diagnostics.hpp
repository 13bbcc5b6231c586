#pragma once

#include <cstdint>
#include <vector>

#include "chemowave/grid.hpp"
#include "chemowave/kernels.hpp"
#include "chemowave/report.hpp"
#include "chemowave/slab.hpp"

namespace chemowave {

/// Below this value of u the profile must be nonincreasing:
/// 1/(1 + |chi|/(2 sigma)) for chi <= 0, (1 - 2chi/sigma)/(1 - chi/sigma)^2 otherwise.
double monotonicity_threshold(const ChemoParams& params);

/// Worst forward difference u_{i+1} - u_i over nodes with u_i below the threshold.
BoundsReport monotonicity_check(const Field& u, const ChemoParams& params, double tol = 1e-8);

struct DecayFit {
  double mu = 0.0;  // minus the slope of log u
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Least squares on log u over [x_start, x_max - margin].
/// Throws ValidationError with fewer than 20 points or u <= 0 in the window.
DecayFit decay_fit(const Field& u, double x_start, double margin = 10.0);

/// Constants, Fourier modes, tents and random trigonometric polynomials,
/// all periodic on the grid. Random members are reproducible from `seed`.
std::vector<Field> poincare_test_family(const Grid1D& grid, std::uint64_t seed, std::size_t n_random = 50);

struct PoincareRatios {
  double lhs_vx = 0.0;   // int v_x f^2
  double lhs_abs = 0.0;  // int |v| f^2
  double rhs_core = 0.0; // |chi|(1 + sigma^2)/theta (int u f^2 + int f_x^2)
};

PoincareRatios poincare_terms(const Field& f, const Field& u, const Field& v, const Field& vx,
                              const ChemoParams& params, double theta);

/// Ratios LHS/RHS_core for every f in the family; each must be finite.
/// The check named "empirical_C_K" carries the largest ratio.
BoundsReport poincare_check(const std::vector<Field>& family, const Field& u, const Field& v, const Field& vx,
                            const ChemoParams& params, double theta);

/// int_{-a}^{a} v_x against v(a) - v(-a) (the f = 1 case of the inequality).
BoundsReport poincare_constant_identity(const Field& v, const Field& vx, double tol);

/// M / (|chi| sigma^2) with M = int_0^a x |v| dx; 0 when chi = 0.
double moment_ratio(const Field& v, const ChemoParams& params);
BoundsReport moment_check(const Field& v, const ChemoParams& params);
/// Spread max/min of ratios across a sigma sweep; passes below `factor`.
BoundsReport moment_sweep_check(const std::vector<double>& ratios, double factor = 3.0);

struct FrontGeometry {
  double x1 = 0.0;  // rightmost crossing of 1 - theta/sigma
  double x2 = 0.0;  // rightmost crossing of theta/sigma
  double width = 0.0;
  double reach = 0.0;  // R sigma
  bool narrow = false;
};

FrontGeometry front_geometry(const Field& u, double theta, double sigma, double R);

/// v >= (|chi|/2)(1 - eps/2)^2 on grid points of [x2, x2 + R sigma].
/// Not applicable (flagged) for chi >= 0 or a wide front.
BoundsReport advection_plateau_check(const Field& u, const Field& v, const FrontGeometry& geometry,
                                     const ChemoParams& params, double eps, double tol = 1e-9);

struct FastConstants {
  double eps = 0.0;
  double R = 0.0;
  double theta = 0.0;
  double min_sigma = 0.0;  // max(4 theta/eps, 1/(R eps))
};

/// R = Kbar^{-1}((1 - eps/4)/2)/2 and theta = |chi|/(2R), eps in (0, 1/10].
FastConstants fast_constants(double eps, double chi, const KernelSpec& spec);
/// theta/sigma < eps/4 and eps > 1/(R sigma).
BoundsReport fast_constraints_check(const FastConstants& k, double sigma);

/// Upper bound, monotonicity, left plateau and decay rate for a converged
/// slab profile.
BoundsReport profile_suite(const SlabSolution& sol);

/// |c - int u(1-u)| / c <= tol.
BoundsReport integral_identity_check(double c, const Field& u, double tol = 0.02);

}  // namespace chemowave
