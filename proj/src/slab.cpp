#include "chemowave/slab.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>

#include "chemowave/convolve.hpp"
#include "chemowave/linalg.hpp"

namespace chemowave {

double SlabConfig::theta0() const {
  const double r = std::abs(params.chi) / params.sigma;
  return std::min(0.01, (1.0 - 2.0 * r) / (1.0 + r));
}

Grid1D SlabConfig::grid() const {
  const auto half = static_cast<std::size_t>(std::llround(a / dx));
  return Grid1D::make(-a, a, 2 * half + 1);
}

void SlabConfig::validate() const {
  params.validate();
  if (!(a >= 20.0) || !std::isfinite(a)) throw ValidationError("slab half-length a must be >= 20");
  if (!(dx > 0.0) || dx > a / 8.0) throw ValidationError("slab dx must be positive and well below a");
  if (!(theta > 0.0)) throw ValidationError("theta must be positive");
  if (!(theta < theta0()))
    throw ValidationError("theta must be below min{1/100, (1 - 2|chi|/sigma)/(1 + |chi|/sigma)} = " +
                          std::to_string(theta0()));
  if (!(tau >= 0.0 && tau <= 1.0)) throw ValidationError("tau must lie in [0, 1]");
  if (!(damping > 0.0 && damping <= 1.0)) throw ValidationError("damping must lie in (0, 1]");
  if (!(tol > 0.0)) throw ValidationError("tol must be positive");
  if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
  if (!(tau_step > 0.0 && tau_step <= 1.0)) throw ValidationError("tau_step must lie in (0, 1]");
  if (params.chi != 0.0 && grid().dx() > params.sigma / 4.0)
    throw ValidationError("slab dx must not exceed sigma/4");
}

namespace {

// Bernoulli function z / (e^z - 1) and its derivative.
double bern(double z) {
  if (std::abs(z) < 1e-3) {
    const double z2 = z * z;
    return 1.0 - 0.5 * z + z2 / 12.0 - z2 * z2 / 720.0;
  }
  return z / std::expm1(z);
}

double bern_prime(double z) {
  if (std::abs(z) < 1e-2) return -0.5 + z / 6.0 - z * z * z / 180.0;
  if (z > 40.0) return (1.0 - z) * std::exp(-z);
  const double em = std::expm1(z);
  return (em - z * std::exp(z)) / (em * em);
}

// Everything that depends only on the configuration.
struct Slab {
  SlabConfig cfg;
  Grid1D grid;
  double dx;
  std::size_t n;
  std::size_t center;
  std::optional<AdvectionOperator> op;

  explicit Slab(const SlabConfig& c) : cfg(c), grid(c.grid()), dx(grid.dx()), n(grid.n), center(grid.n / 2) {
    if (cfg.params.chi != 0.0) op.emplace(grid, cfg.spec, cfg.params);
  }

  Field v_of(const Field& u) const {
    Field uu = u;
    uu.left_ext = 1.0;
    uu.right_ext = 0.0;
    return op ? op->advection(uu) : Field(grid, 0.0, 0.0, 0.0);
  }

  Field vx_of(const Field& u) const {
    Field uu = u;
    uu.left_ext = 1.0;
    uu.right_ext = 0.0;
    return op ? op->gradient(uu) : Field(grid, 0.0, 0.0, 0.0);
  }

  // Face data for faces i+1/2, i = 0..n-2. P = (tau v_face - c) dx.
  struct Faces {
    std::vector<double> bm, bp, dbm, dbp;
  };

  Faces faces(double c, const Field& v, double tau) const {
    Faces f;
    f.bm.resize(n - 1);
    f.bp.resize(n - 1);
    f.dbm.resize(n - 1);
    f.dbp.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double b = tau * 0.5 * (v[i] + v[i + 1]) - c;
      const double p = b * dx;
      f.bm[i] = bern(-p);
      f.bp[i] = bern(p);
      f.dbm[i] = bern_prime(-p);
      f.dbp[i] = bern_prime(p);
    }
    return f;
  }

  // F_i = -(J_{i+1/2} - J_{i-1/2})/dx + g_i with J = (B(-P) u_i - B(P) u_{i+1}) / dx.
  std::vector<double> residual(const Faces& f, const Field& u, const std::vector<double>& g) const {
    std::vector<double> r(n, 0.0);
    const double h2 = dx * dx;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double jr = f.bm[i] * u[i] - f.bp[i] * u[i + 1];
      const double jl = f.bm[i - 1] * u[i - 1] - f.bp[i - 1] * u[i];
      r[i] = -(jr - jl) / h2 + g[i];
    }
    return r;
  }

  // Interior operator on u_1..u_{n-2}: d/du of -(J_{i+1/2} - J_{i-1/2})/dx.
  Tridiagonal transport_matrix(const Faces& f) const {
    Tridiagonal m(n - 2);
    const double h2 = dx * dx;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const std::size_t k = i - 1;
      m.lower[k] = f.bm[i - 1] / h2;
      m.diag[k] = -(f.bm[i] + f.bp[i - 1]) / h2;
      m.upper[k] = f.bp[i] / h2;
    }
    return m;
  }

  std::size_t pin_index(const Field& u) const {
    std::size_t p = center;
    for (std::size_t i = center; i < n; ++i)
      if (u[i] > u[p]) p = i;
    return std::min(p, n - 2);
  }

  std::vector<double> full_residual_vector(double c, const Field& u, double tau) const {
    const Field v = tau != 0.0 ? v_of(u) : Field(grid, 0.0, 0.0, 0.0);
    const auto f = faces(c, v, tau);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = u[i] * (1.0 - u[i]);
    return residual(f, u, g);
  }

  double sup_residual(const std::vector<double>& r, const Field& u) const {
    double m = std::abs(max_right_half(u) - cfg.theta);
    for (double x : r) m = std::max(m, std::abs(x));
    return std::isfinite(m) ? m : HUGE_VAL;
  }

  double full_residual(double c, const Field& u, double tau) const {
    return sup_residual(full_residual_vector(c, u, tau), u);
  }

  struct Outcome {
    double c;
    Field u;
    double residual;
    int iterations;
    bool converged;
  };

  // Newton on (u interior, c) with the pin row max_{x>=0} u = theta.
  // v is frozen at the current iterate inside each linearisation. Step
  // control is the natural monotonicity test (simplified correction with the
  // old Jacobian must shrink).
  Outcome newton(double c, Field u, double tau) const {
    auto r = full_residual_vector(c, u, tau);
    double res = sup_residual(r, u);
    int it = 0;
    for (; it < cfg.max_iter && res >= cfg.tol; ++it) {
      const Field v = tau != 0.0 ? v_of(u) : Field(grid, 0.0, 0.0, 0.0);
      const auto f = faces(c, v, tau);

      Tridiagonal jac = transport_matrix(f);
      std::vector<double> minus_f(n - 2), fc(n - 2);
      for (std::size_t i = 1; i + 1 < n; ++i) {
        jac.diag[i - 1] += 1.0 - 2.0 * u[i];
        minus_f[i - 1] = -r[i];
        const double djr = f.dbm[i] * u[i] + f.dbp[i] * u[i + 1];
        const double djl = f.dbm[i - 1] * u[i - 1] + f.dbp[i - 1] * u[i];
        fc[i - 1] = -(djr - djl) / dx;
      }
      const auto y = solve_tridiagonal(jac, minus_f);
      const auto z = solve_tridiagonal(jac, fc);
      const std::size_t p = pin_index(u);
      const double zp = z[p - 1];
      if (zp == 0.0 || !std::isfinite(zp)) break;
      const double dc = (y[p - 1] + max_right_half(u) - cfg.theta) / zp;
      double dnorm = std::abs(dc);
      for (std::size_t k = 0; k < n - 2; ++k) dnorm = std::max(dnorm, std::abs(y[k] - dc * z[k]));

      double step = cfg.damping;
      bool accepted = false;
      Field trial = u;
      double trial_c = c, trial_res = res;
      std::vector<double> trial_r;
      for (int ls = 0; ls < 30; ++ls) {
        trial_c = c + step * dc;
        for (std::size_t i = 1; i + 1 < n; ++i) trial[i] = u[i] + step * (y[i - 1] - dc * z[i - 1]);
        trial_r = full_residual_vector(trial_c, trial, tau);
        trial_res = sup_residual(trial_r, trial);
        if (trial_res < cfg.tol) {
          accepted = true;
          break;
        }
        if (std::isfinite(trial_res)) {
          for (std::size_t i = 1; i + 1 < n; ++i) minus_f[i - 1] = -trial_r[i];
          const auto ys = solve_tridiagonal(jac, minus_f);
          const double dcs = (ys[p - 1] + max_right_half(trial) - cfg.theta) / zp;
          double snorm = std::abs(dcs);
          for (std::size_t k = 0; k < n - 2; ++k) snorm = std::max(snorm, std::abs(ys[k] - dcs * z[k]));
          if (snorm <= (1.0 - 0.25 * step) * dnorm) {
            accepted = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!accepted) break;
      c = trial_c;
      u = trial;
      r = std::move(trial_r);
      res = trial_res;
    }
    return {c, std::move(u), res, it, res < cfg.tol};
  }
};

Field initial_guess(const Grid1D& grid, double theta) {
  const double x0 = -std::log(1.0 / theta - 1.0);
  Field u = Field::from_function(grid, [x0](double x) { return 1.0 / (1.0 + std::exp(x - x0)); }, 1.0, 0.0);
  u[0] = 1.0;
  u[u.size() - 1] = 0.0;
  return u;
}

Field resample(const Field& src, const Grid1D& grid) {
  Field out(grid, 0.0, 1.0, 0.0);
  const double dx = src.grid.dx();
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    if (x <= src.grid.x_min) {
      out[i] = 1.0;
    } else if (x >= src.grid.x_max) {
      out[i] = 0.0;
    } else {
      const double s = (x - src.grid.x_min) / dx;
      const auto k = std::min(static_cast<std::size_t>(s), src.size() - 2);
      const double t = s - static_cast<double>(k);
      out[i] = (1.0 - t) * src[k] + t * src[k + 1];
    }
  }
  out[0] = 1.0;
  out[grid.n - 1] = 0.0;
  return out;
}

}  // namespace

double max_right_half(const Field& u) {
  const std::size_t n = u.size();
  const double dx = u.grid.dx();
  std::size_t start = 0;
  while (start < n && u.grid.x(start) < -1e-9 * dx) ++start;
  if (start >= n) throw ValidationError("grid has no points with x >= 0");
  std::size_t k = start;
  for (std::size_t i = start; i < n; ++i)
    if (u[i] > u[k]) k = i;
  if (k > start && k + 1 < n) {
    const double curv = u[k + 1] - 2.0 * u[k] + u[k - 1];
    if (curv < 0.0) {
      const double d = u[k + 1] - u[k - 1];
      return u[k] - d * d / (8.0 * curv);
    }
  }
  return u[k];
}

std::vector<double> slab_residual(double c, const Field& u, const SlabConfig& config) {
  Slab s(config);
  if (!(u.grid == s.grid)) throw ValidationError("slab_residual: field is not on the slab grid");
  const Field v = config.tau != 0.0 ? s.v_of(u) : Field(s.grid, 0.0, 0.0, 0.0);
  const auto f = s.faces(c, v, config.tau);
  std::vector<double> g(s.n);
  for (std::size_t i = 0; i < s.n; ++i) g[i] = u[i] * (1.0 - u[i]);
  return s.residual(f, u, g);
}

Field solve_linear_bvp(double c, const Field& u_prev, const SlabConfig& config) {
  config.validate();
  if (!std::isfinite(c)) throw ValidationError("speed must be finite");
  Slab s(config);
  if (!(u_prev.grid == s.grid)) throw ValidationError("solve_linear_bvp: field is not on the slab grid");
  if (u_prev.left_ext != 1.0 || u_prev.right_ext != 0.0)
    throw ValidationError("solve_linear_bvp: previous iterate must have extensions (1, 0)");
  const Field v = config.tau != 0.0 ? s.v_of(u_prev) : Field(s.grid, 0.0, 0.0, 0.0);
  const auto f = s.faces(c, v, config.tau);
  const Tridiagonal m = s.transport_matrix(f);
  const double h2 = s.dx * s.dx;
  std::vector<double> rhs(s.n - 2);
  for (std::size_t i = 1; i + 1 < s.n; ++i) rhs[i - 1] = -u_prev[i] * (1.0 - u_prev[i]);
  rhs[0] -= f.bm[0] / h2 * 1.0;  // u_bar(-a) = 1; u_bar(a) = 0 adds nothing
  SolveInfo info;
  std::vector<double> sol;
  try {
    sol = solve_tridiagonal(m, rhs, &info);
  } catch (const SolverError& e) {
    throw SolverError(std::string("linear slab problem is singular: ") + e.what());
  }
  if (info.pivot_ratio < 1e-14)
    throw SolverError("linear slab problem is ill-conditioned (pivot ratio " + std::to_string(info.pivot_ratio) + ")");
  Field out(s.grid, 0.0, 1.0, 0.0);
  out[0] = 1.0;
  out[s.n - 1] = 0.0;
  for (std::size_t i = 1; i + 1 < s.n; ++i) out[i] = sol[i - 1];
  return out;
}

std::pair<double, Field> apply_operator(double c, const Field& u, const SlabConfig& config) {
  return {c + config.theta - max_right_half(u), solve_linear_bvp(c, u, config)};
}

SlabSolution fixed_point(const SlabConfig& config, const SlabSolution* seed) {
  config.validate();
  Slab s(config);

  double c = 2.0;
  Field u = initial_guess(s.grid, config.theta);
  std::vector<double> taus;
  if (seed) {
    c = seed->c;
    u = resample(seed->u, s.grid);
    taus.push_back(config.tau);
  } else {
    for (double t = 0.0; t < config.tau - 1e-12; t += config.tau_step) taus.push_back(t);
    taus.push_back(config.tau);
  }

  SlabSolution sol;
  sol.config = config;
  for (double tau : taus) {
    auto out = s.newton(c, u, tau);
    sol.iterations += out.iterations;
    sol.tau_path.push_back(tau);
    sol.c_path.push_back(out.c);
    c = out.c;
    u = std::move(out.u);
    sol.residual = out.residual;
    sol.tau = tau;
    sol.converged = out.converged;
    if (!out.converged) break;
  }
  sol.c = c;
  sol.u = u;
  sol.v = s.v_of(u);
  sol.vx = s.vx_of(u);
  return sol;
}

std::vector<SlabSolution> continue_in_a(const SlabConfig& config, const std::vector<double>& a_list) {
  if (a_list.empty()) throw ValidationError("a_list is empty");
  for (std::size_t i = 1; i < a_list.size(); ++i)
    if (!(a_list[i] > a_list[i - 1])) throw ValidationError("a_list must be increasing");
  std::vector<SlabSolution> out;
  for (double a : a_list) {
    SlabConfig cfg = config;
    cfg.a = a;
    out.push_back(out.empty() ? fixed_point(cfg) : fixed_point(cfg, &out.back()));
    if (!out.back().converged) throw SolverError("slab solve did not converge at a = " + std::to_string(a));
  }
  return out;
}

BoundsReport slab_bounds_check(const SlabSolution& sol) {
  BoundsReport r;
  const Field& u = sol.u;
  const double tol = std::max(sol.config.tol, 1e-8);
  const std::size_t n = u.size();
  std::size_t start = 0;
  while (start < n && u.grid.x(start) < -1e-9 * u.grid.dx()) ++start;

  r.add("upper_bound", "max u <= max{1, (1 - chi/sigma)^-1}", u.max(), sol.config.params.upper_bound_u(), tol);

  double rise = -HUGE_VAL;
  for (std::size_t i = start; i + 1 < n; ++i) rise = std::max(rise, u[i + 1] - u[i]);
  r.add("monotone_right", "u_x <= 0 on [0, a]", rise, 0.0, tol);

  double low = HUGE_VAL;
  for (std::size_t i = 0; i <= std::min(start, n - 1); ++i) low = std::min(low, u[i]);
  r.add("left_above_theta", "u >= theta on [-a, 0]", sol.config.theta - low, 0.0, tol);

  double sum = 0.0;
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < n && u.grid.x(i) <= u.grid.x_min + 5.0; ++i) {
    sum += u[i];
    ++cnt;
  }
  r.add("left_plateau", "mean of u on [-a, -a+5] within 0.05 of 1", std::abs(sum / static_cast<double>(cnt) - 1.0),
        0.05);
  return r;
}

}  // namespace chemowave
