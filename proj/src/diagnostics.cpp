#include "chemowave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "chemowave/evolver.hpp"

namespace chemowave {

namespace {

constexpr double kHuge = std::numeric_limits<double>::max();

// Trapezoid weight of node i.
double trap_weight(const Grid1D& g, std::size_t i) {
  return (i == 0 || i + 1 == g.n) ? 0.5 * g.dx() : g.dx();
}

std::size_t first_nonnegative(const Grid1D& g) {
  std::size_t i = 0;
  while (i < g.n && g.x(i) < -1e-9 * g.dx()) ++i;
  return i;
}

}  // namespace

double monotonicity_threshold(const ChemoParams& p) {
  if (p.chi <= 0.0) return 1.0 / (1.0 + std::abs(p.chi) / (2.0 * p.sigma));
  const double r = p.chi / p.sigma;
  return (1.0 - 2.0 * r) / ((1.0 - r) * (1.0 - r));
}

BoundsReport monotonicity_check(const Field& u, const ChemoParams& params, double tol) {
  const double thr = monotonicity_threshold(params);
  double worst = -kHuge;
  for (std::size_t i = 0; i + 1 < u.size(); ++i)
    if (u[i] < thr) worst = std::max(worst, u[i + 1] - u[i]);
  BoundsReport r;
  if (worst == -kHuge) {
    r.add_not_applicable("monotone_below_threshold", "u nonincreasing where u < threshold",
                         "profile never drops below the threshold");
  } else {
    r.add("monotone_below_threshold", "u nonincreasing where u < threshold", worst, 0.0, tol);
  }
  return r;
}

DecayFit decay_fit(const Field& u, double x_start, double margin) {
  const double x_end = u.grid.x_max - margin;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u.grid.x(i);
    if (x < x_start || x > x_end) continue;
    if (!(u[i] > 0.0)) throw ValidationError("decay fit window contains u <= 0");
    xs.push_back(x);
    ys.push_back(std::log(u[i]));
  }
  if (xs.size() < 20) throw ValidationError("decay fit window has fewer than 20 points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  DecayFit f;
  f.mu = -sxy / sxx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  f.points = xs.size();
  return f;
}

std::vector<Field> poincare_test_family(const Grid1D& grid, std::uint64_t seed, std::size_t n_random) {
  const double a = 0.5 * (grid.x_max - grid.x_min);
  const double mid = 0.5 * (grid.x_max + grid.x_min);
  const double k0 = std::numbers::pi / a;
  std::vector<Field> fam;
  fam.push_back(Field(grid, 1.0));
  for (int k = 1; k <= 4; ++k) {
    fam.push_back(Field::from_function(grid, [=](double x) { return std::cos(k * k0 * (x - mid)); }, 0.0, 0.0));
    fam.push_back(Field::from_function(grid, [=](double x) { return std::sin(k * k0 * (x - mid)); }, 0.0, 0.0));
  }
  // Tents of half-width a/4.
  for (double centre : {-0.5 * a, 0.0, 0.75 * a}) {
    const double c = mid + centre;
    fam.push_back(Field::from_function(
        grid, [=](double x) { return std::max(0.0, a / 4.0 - std::abs(x - c)); }, 0.0, 0.0));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t r = 0; r < n_random; ++r) {
    std::vector<double> ca(7), sa(7);
    for (int k = 0; k < 7; ++k) {
      ca[k] = normal(rng) / (1.0 + k);
      sa[k] = normal(rng) / (1.0 + k);
    }
    fam.push_back(Field::from_function(
        grid,
        [=](double x) {
          double s = ca[0];
          for (int k = 1; k < 7; ++k) s += ca[k] * std::cos(k * k0 * (x - mid)) + sa[k] * std::sin(k * k0 * (x - mid));
          return s;
        },
        0.0, 0.0));
  }
  // Exact wrap.
  for (auto& f : fam) f[f.size() - 1] = f[0];
  return fam;
}

PoincareRatios poincare_terms(const Field& f, const Field& u, const Field& v, const Field& vx,
                              const ChemoParams& params, double theta) {
  if (!(f.grid == u.grid) || !(v.grid == u.grid) || !(vx.grid == u.grid))
    throw ValidationError("poincare: grid mismatch");
  if (!(theta > 0.0)) throw ValidationError("poincare: theta must be positive");
  const std::size_t n = f.size();
  if (std::abs(f[n - 1] - f[0]) > 1e-10 * std::max(1.0, f.sup_norm()))
    throw ValidationError("poincare: test function is not periodic");
  PoincareRatios t;
  double uf2 = 0.0, fx2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = trap_weight(f.grid, i);
    const double f2 = f[i] * f[i];
    t.lhs_vx += w * vx[i] * f2;
    t.lhs_abs += w * std::abs(v[i]) * f2;
    uf2 += w * u[i] * f2;
  }
  const double dx = f.grid.dx();
  for (std::size_t i = 0; i + 1 < n; ++i) fx2 += (f[i + 1] - f[i]) * (f[i + 1] - f[i]) / dx;
  t.rhs_core = std::abs(params.chi) * (1.0 + params.sigma * params.sigma) / theta * (uf2 + fx2);
  return t;
}

BoundsReport poincare_check(const std::vector<Field>& family, const Field& u, const Field& v, const Field& vx,
                            const ChemoParams& params, double theta) {
  double worst = 0.0;
  double non_finite = 0.0;
  for (const auto& f : family) {
    const auto t = poincare_terms(f, u, v, vx, params, theta);
    for (double lhs : {std::abs(t.lhs_vx), t.lhs_abs}) {
      const double ratio = lhs == 0.0 ? 0.0 : lhs / t.rhs_core;
      if (!std::isfinite(ratio)) non_finite += 1.0;
      else worst = std::max(worst, ratio);
    }
  }
  BoundsReport r;
  r.add("poincare_ratios_finite", "int v_x f^2 and int |v| f^2 bounded by C |chi|(1+sigma^2)/theta (int u f^2 + int f_x^2)",
        non_finite, 0.0);
  r.add("empirical_C_K", "largest LHS / RHS_core over the test family", worst, kHuge);
  return r;
}

BoundsReport poincare_constant_identity(const Field& v, const Field& vx, double tol) {
  double s = 0.0;
  for (std::size_t i = 0; i < vx.size(); ++i) s += trap_weight(vx.grid, i) * vx[i];
  BoundsReport r;
  r.add("poincare_f_equals_one", "int v_x = v(a) - v(-a)", std::abs(s - (v[v.size() - 1] - v[0])), tol);
  return r;
}

double moment_ratio(const Field& v, const ChemoParams& params) {
  if (params.chi == 0.0) return 0.0;
  const std::size_t start = first_nonnegative(v.grid);
  double m = 0.0;
  for (std::size_t i = start; i < v.size(); ++i) {
    const double w = (i == start || i + 1 == v.size()) ? 0.5 * v.grid.dx() : v.grid.dx();
    m += w * v.grid.x(i) * std::abs(v[i]);
  }
  return m / (std::abs(params.chi) * params.sigma * params.sigma);
}

BoundsReport moment_check(const Field& v, const ChemoParams& params) {
  BoundsReport r;
  r.add("moment_ratio", "int_0^a x |v| dx <= C |chi| sigma^2", moment_ratio(v, params), kHuge);
  return r;
}

BoundsReport moment_sweep_check(const std::vector<double>& ratios, double factor) {
  BoundsReport r;
  if (ratios.empty()) throw ValidationError("moment sweep needs at least one ratio");
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  const double spread = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  r.add("moment_ratio_spread", "moment ratio bounded across the sigma sweep", spread, factor);
  return r;
}

FrontGeometry front_geometry(const Field& u, double theta, double sigma, double R) {
  const double lo = theta / sigma;
  if (!(lo > 0.0 && lo < 0.5)) throw ValidationError("front levels need 0 < theta/sigma < 1/2");
  FrontGeometry g;
  g.x1 = front_position(u, 1.0 - lo);
  g.x2 = front_position(u, lo);
  g.width = g.x2 - g.x1;
  g.reach = R * sigma;
  g.narrow = g.width <= g.reach;
  return g;
}

BoundsReport advection_plateau_check(const Field& u, const Field& v, const FrontGeometry& geom,
                                     const ChemoParams& params, double eps, double tol) {
  BoundsReport r;
  const std::string claim = "v >= (|chi|/2)(1 - eps/2)^2 on [x2, x2 + R sigma]";
  if (params.chi >= 0.0) {
    r.add_not_applicable("advection_plateau", claim, "needs chi < 0");
    return r;
  }
  if (!geom.narrow) {
    r.add_not_applicable("advection_plateau", claim, "front is wide (width > R sigma)");
    return r;
  }
  if (!(v.grid == u.grid)) throw ValidationError("plateau check: grid mismatch");
  if (geom.x2 + geom.reach > u.grid.x_max) throw ValidationError("plateau window exceeds the grid");
  double vmin = kHuge;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = v.grid.x(i);
    if (x >= geom.x2 && x <= geom.x2 + geom.reach) vmin = std::min(vmin, v[i]);
  }
  const double target = 0.5 * std::abs(params.chi) * (1.0 - eps / 2.0) * (1.0 - eps / 2.0);
  r.add("advection_plateau", claim, target - vmin, 0.0, tol);
  return r;
}

FastConstants fast_constants(double eps, double chi, const KernelSpec& spec) {
  if (!(eps > 0.0 && eps <= 0.1)) throw ValidationError("eps must lie in (0, 1/10]");
  FastConstants k;
  k.eps = eps;
  k.R = 0.5 * spec.kbar_inverse((1.0 - eps / 4.0) / 2.0);
  if (k.R > 1.0) throw ValidationError("R exceeds 1");
  k.theta = std::abs(chi) / (2.0 * k.R);
  k.min_sigma = std::max(4.0 * k.theta / eps, 1.0 / (k.R * eps));
  return k;
}

BoundsReport fast_constraints_check(const FastConstants& k, double sigma) {
  BoundsReport r;
  r.add("theta_over_sigma", "theta/sigma < eps/4", k.theta / sigma, k.eps / 4.0);
  r.add("eps_vs_R_sigma", "1/(R sigma) < eps", 1.0 / (k.R * sigma), k.eps);
  return r;
}

BoundsReport integral_identity_check(double c, const Field& u, double tol) {
  BoundsReport r;
  const double s = speed_from_integral(u);
  r.add("integral_identity", "c = int u(1 - u) dx", std::abs(c - s) / std::abs(c), tol);
  return r;
}

BoundsReport profile_suite(const SlabSolution& sol) {
  BoundsReport r;
  const auto bounds = slab_bounds_check(sol);
  for (const char* name : {"upper_bound", "left_plateau"})
    if (const Check* c = bounds.find(name)) r.checks.push_back(*c);
  r.append(monotonicity_check(sol.u, sol.config.params, std::max(sol.config.tol, 1e-8)));
  const std::string claim = "u decays exponentially: fitted rate mu > 0";
  try {
    const auto fit = decay_fit(sol.u, 5.0, 10.0);
    r.add("decay_rate_positive", claim, -fit.mu, 0.0).note = "mu = " + std::to_string(fit.mu);
  } catch (const ValidationError& e) {
    r.add("decay_rate_positive", claim, std::nan(""), 0.0).note = e.what();
  }
  return r;
}

}  // namespace chemowave
