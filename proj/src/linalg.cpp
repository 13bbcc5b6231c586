#include "chemowave/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chemowave/grid.hpp"

namespace chemowave {

std::vector<double> Tridiagonal::multiply(const std::vector<double>& x, bool cyclic) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += lower[i] * x[i - 1];
    else if (cyclic) s += lower[0] * x[n - 1];
    if (i + 1 < n) s += upper[i] * x[i + 1];
    else if (cyclic) s += upper[n - 1] * x[0];
    y[i] = s;
  }
  return y;
}

std::vector<double> solve_tridiagonal(const Tridiagonal& m, std::vector<double> rhs, SolveInfo* info) {
  const std::size_t n = m.size();
  if (rhs.size() != n || n == 0) throw ValidationError("tridiagonal solve: size mismatch");
  double diag_scale = 0.0;
  for (double d : m.diag) diag_scale = std::max(diag_scale, std::abs(d));
  std::vector<double> c(n);
  double pivot = m.diag[0];
  double min_pivot = std::abs(pivot);
  if (pivot == 0.0) throw SolverError("tridiagonal solve: zero pivot");
  c[0] = m.upper[0] / pivot;
  rhs[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = m.diag[i] - m.lower[i] * c[i - 1];
    min_pivot = std::min(min_pivot, std::abs(pivot));
    if (pivot == 0.0 || !std::isfinite(pivot)) throw SolverError("tridiagonal solve: zero pivot");
    c[i] = (i + 1 < n) ? m.upper[i] / pivot : 0.0;
    rhs[i] = (rhs[i] - m.lower[i] * rhs[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
  if (info) info->pivot_ratio = diag_scale > 0.0 ? min_pivot / diag_scale : 0.0;
  return rhs;
}

std::vector<double> solve_cyclic_tridiagonal(const Tridiagonal& m, const std::vector<double>& rhs,
                                             SolveInfo* info) {
  const std::size_t n = m.size();
  if (n < 3) throw ValidationError("cyclic tridiagonal solve needs n >= 3");
  const double alpha = m.upper[n - 1];  // A(n-1, 0)
  const double beta = m.lower[0];       // A(0, n-1)
  const double gamma = -m.diag[0];
  Tridiagonal t = m;
  t.diag[0] -= gamma;
  t.diag[n - 1] -= alpha * beta / gamma;
  // A = T + u v^T with u = (gamma, 0, ..., alpha), v = (1, 0, ..., beta/gamma).
  std::vector<double> uvec(n, 0.0);
  uvec[0] = gamma;
  uvec[n - 1] = alpha;
  SolveInfo i1, i2;
  const auto x = solve_tridiagonal(t, rhs, &i1);
  const auto z = solve_tridiagonal(t, uvec, &i2);
  const double vx = x[0] + beta / gamma * x[n - 1];
  const double vz = z[0] + beta / gamma * z[n - 1];
  const double denom = 1.0 + vz;
  if (denom == 0.0 || !std::isfinite(denom)) throw SolverError("cyclic solve: singular rank-one correction");
  std::vector<double> out(n);
  const double f = vx / denom;
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - f * z[i];
  if (info) info->pivot_ratio = std::min(i1.pivot_ratio, std::abs(denom));
  return out;
}

}  // namespace chemowave
