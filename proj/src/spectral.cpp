#include "chemowave/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Dense>

#include "chemowave/linalg.hpp"

namespace chemowave {

namespace {

void require_same_grid(const Field& a, const Field& b, const char* what) {
  if (!(a.grid == b.grid)) throw ValidationError(std::string("grid mismatch: ") + what);
}

// -phi'' - V phi on the m = n - 1 periodic nodes, shifted by -s.
Tridiagonal periodic_operator(const Potential& V, double s) {
  const std::size_t m = V.grid.n - 1;
  const double h2 = V.grid.dx() * V.grid.dx();
  Tridiagonal t(m);
  for (std::size_t i = 0; i < m; ++i) {
    t.lower[i] = -1.0 / h2;
    t.upper[i] = -1.0 / h2;
    t.diag[i] = 2.0 / h2 - V.values[i] - s;
  }
  return t;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

Potential assemble_potential(const Field& u, double c, const Field& v, const Field& vx) {
  require_same_grid(u, v, "u and v");
  require_same_grid(u, vx, "u and v_x");
  if (!std::isfinite(c)) throw ValidationError("speed must be finite");
  Potential p;
  p.grid = u.grid;
  p.c = c;
  p.epsilon = c - 2.0;
  const double e = p.epsilon;
  p.values.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double expanded = -u[i] - e * (1.0 + e / 4.0) + v[i] * (c / 2.0 - v[i] / 4.0) + vx[i] / 2.0;
    const double d = c - v[i];
    const double compact = 1.0 - (u[i] + d * d / 4.0 - vx[i] / 2.0);
    p.identity_residual = std::max(p.identity_residual, std::abs(expanded - compact));
    p.values[i] = expanded;
  }
  return p;
}

Potential constant_potential(const Grid1D& grid, double value) {
  Potential p;
  p.grid = grid;
  p.values.assign(grid.n, value);
  return p;
}

double dense_principal_eigenvalue(const Potential& V) {
  const Eigen::Index m = static_cast<Eigen::Index>(V.grid.n - 1);
  const double h2 = V.grid.dx() * V.grid.dx();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    a(i, i) = 2.0 / h2 - V.values[static_cast<std::size_t>(i)];
    a(i, (i + 1) % m) += -1.0 / h2;
    a((i + 1) % m, i) += -1.0 / h2;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("dense eigensolve failed");
  return es.eigenvalues()(0);
}

EigenPair principal_eigenpair(const Potential& V, const EigenOptions& opts) {
  V.grid.validate();
  if (V.values.size() != V.grid.n) throw ValidationError("potential length does not match its grid");
  for (double x : V.values)
    if (!std::isfinite(x)) throw ValidationError("potential is not finite");
  const std::size_t m = V.grid.n - 1;

  double vmax = -HUGE_VAL;
  for (std::size_t i = 0; i < m; ++i) vmax = std::max(vmax, V.values[i]);
  const double shift = -vmax - 1.0;  // min(-V) - 1
  const Tridiagonal shifted = periodic_operator(V, shift);
  const Tridiagonal h = periodic_operator(V, 0.0);

  std::vector<double> x(m, 1.0);
  double lambda = 0.0;
  int it = 0;
  bool done = false;
  for (; it < opts.max_iter; ++it) {
    auto y = solve_cyclic_tridiagonal(shifted, x);
    const double norm = std::sqrt(dot(y, y));
    for (auto& e : y) e /= norm;
    x = std::move(y);
    const auto hx = h.multiply(x, true);
    lambda = dot(x, hx);
    double r2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) r2 += (hx[i] - lambda * x[i]) * (hx[i] - lambda * x[i]);
    if (std::sqrt(r2) < opts.tol * std::max(1.0, std::abs(lambda))) {
      done = true;
      ++it;
      break;
    }
  }
  if (!done) throw SolverError("inverse iteration stagnated");

  if (x[0] < 0.0)
    for (auto& e : x) e = -e;
  const double lowest = *std::min_element(x.begin(), x.end());
  if (!(lowest > 0.0)) throw SolverError("principal eigenvector changes sign; refine the grid");

  EigenPair out;
  out.lambda = lambda;
  out.iterations = it;
  out.phi = Field(V.grid, 0.0, 1.0, 1.0);
  for (std::size_t i = 0; i < m; ++i) out.phi[i] = x[i] / x[0];
  out.phi[m] = 1.0;
  out.rayleigh_residual = std::abs(rayleigh_quotient(out.phi, V) - lambda);

  if (opts.dense_check && V.grid.n <= opts.dense_max_n) {
    out.dense_lambda = dense_principal_eigenvalue(V);
    if (std::abs(out.dense_lambda - lambda) > 1e-8 * std::max(1.0, std::abs(lambda)))
      throw SolverError("inverse iteration disagrees with the dense eigensolve");
  }
  return out;
}

double rayleigh_quotient(const Field& psi, const Potential& V) {
  if (!(psi.grid == V.grid)) throw ValidationError("grid mismatch: psi and V");
  const std::size_t m = psi.size() - 1;
  const double scale = std::max(1.0, psi.sup_norm());
  if (std::abs(psi[m] - psi[0]) > 1e-10 * scale) throw ValidationError("test function is not periodic");
  const double dx = psi.grid.dx();
  double grad = 0.0, pot = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = (psi[(i + 1) % m] - psi[i]) / dx;
    grad += d * d;
    pot += V.values[i] * psi[i] * psi[i];
    mass += psi[i] * psi[i];
  }
  if (mass * dx < 1e-14) throw ValidationError("test function has (numerically) zero L2 norm");
  return (grad - pot) / mass;
}

Field tent_function(const Grid1D& grid) {
  const double a = grid.x_max;
  const double slope = std::sqrt(96.0 / (a * a * a));
  return Field::from_function(
      grid, [=](double x) { return std::max(0.0, slope * (a / 4.0 - std::abs(x - 0.75 * a))); }, 0.0, 0.0);
}

double integral_of_square(const Field& f) {
  const double dx = f.grid.dx();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) s += f[i] * f[i] + f[i] * f[i + 1] + f[i + 1] * f[i + 1];
  return s * dx / 3.0;
}

double integral_of_square_derivative(const Field& f) {
  const double dx = f.grid.dx();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) s += (f[i + 1] - f[i]) * (f[i + 1] - f[i]);
  return s / dx;
}

TransformedProfile transform_to_w(const SlabSolution& sol, const Field& v) {
  const Field& u = sol.u;
  require_same_grid(u, v, "u and v");
  const std::size_t n = u.size();
  const double dx = u.grid.dx();
  const double c = sol.c;
  std::size_t center = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(u.grid.x(i)) < std::abs(u.grid.x(center))) center = i;

  // Cumulative trapezoid of v from the node at x = 0.
  std::vector<double> iv(n, 0.0);
  for (std::size_t i = center + 1; i < n; ++i) iv[i] = iv[i - 1] + 0.5 * dx * (v[i] + v[i - 1]);
  for (std::size_t i = center; i-- > 0;) iv[i] = iv[i + 1] - 0.5 * dx * (v[i] + v[i + 1]);

  TransformedProfile t;
  t.log_w.resize(n);
  t.w = Field(u.grid, 0.0, 0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double lu = u[i] > 0.0 ? std::log(u[i]) : -HUGE_VAL;
    t.log_w[i] = lu + 0.5 * c * u.grid.x(i) - 0.5 * iv[i];
    if (t.log_w[i] > 709.0) throw SolverError("w overflows even in log space");
    t.w[i] = u[i] > 0.0 ? std::exp(t.log_w[i]) : 0.0;
  }
  t.w0 = t.w[center];

  const Field& vx = sol.vx;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double scale = std::max({t.w[i - 1], t.w[i], t.w[i + 1]});
    if (!(scale > 0.0)) continue;
    const double d = c - v[i];
    const double vw = 1.0 - u[i] - d * d / 4.0 - vx[i] / 2.0;
    const double wxx = (t.w[i - 1] - 2.0 * t.w[i] + t.w[i + 1]) / (dx * dx);
    t.residual = std::max(t.residual, std::abs(-wxx - vw * t.w[i]) / scale);
  }
  return t;
}

bool CertificateReport::pass() const {
  if (!applicable) return false;
  return std::all_of(entries.begin(), entries.end(), [](const CertificateEntry& e) { return e.pass; });
}

BoundsReport CertificateReport::to_report() const {
  BoundsReport r;
  if (!applicable) {
    r.add_not_applicable("certificate", "lambda >= 0 and phi(0) <= e^{a/2} for c >= 2", reason);
    return r;
  }
  for (const auto& e : entries) {
    char tag[32];
    std::snprintf(tag, sizeof tag, "%.2f", e.c_test);
    r.add(std::string("lambda_nonneg@c=") + tag, "principal eigenvalue lambda >= 0", -e.lambda, 0.0, 1e-8);
    r.add(std::string("phi0_bound@c=") + tag, "log phi(0) <= a/2", e.log_phi0, e.log_bound);
  }
  return r;
}

CertificateReport slow_regime_certificate(const SlabSolution& sol, const EigenOptions& opts) {
  CertificateReport rep;
  const auto& cfg = sol.config;
  rep.in_hypothesis = cfg.params.slow_predicate() <= 0.05;
  if (cfg.params.chi < 0.0 && cfg.params.fast_predicate() >= 10.0) {
    rep.reason = "out of hypothesis: fast regime";
    return rep;
  }
  if (!sol.converged) {
    rep.reason = "slab solution did not converge";
    return rep;
  }
  if (sol.tau != 1.0) {
    rep.reason = "certificate needs tau = 1";
    return rep;
  }
  if (cfg.a < 60.0) {
    rep.reason = "certificate needs a >= 60";
    return rep;
  }
  rep.applicable = true;
  if (!rep.in_hypothesis) rep.reason = "outside |chi|(1/sigma + sigma^2) <= 0.05, evaluated anyway";
  const Grid1D& g = sol.u.grid;
  std::size_t center = 0;
  for (std::size_t i = 0; i < g.n; ++i)
    if (std::abs(g.x(i)) < std::abs(g.x(center))) center = i;
  for (double ct : {2.0, 2.01, 2.05}) {
    const Potential V = assemble_potential(sol.u, ct, sol.v, sol.vx);
    const EigenPair ep = principal_eigenpair(V, opts);
    CertificateEntry e;
    e.c_test = ct;
    e.lambda = ep.lambda;
    e.log_phi0 = std::log(ep.phi[center]);
    e.log_bound = cfg.a / 2.0;
    e.pass = e.lambda >= -1e-8 && e.log_phi0 <= e.log_bound;
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace chemowave
