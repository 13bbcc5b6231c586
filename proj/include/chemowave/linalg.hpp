#pragma once

#include <vector>

namespace chemowave {

/// Row i reads lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1].
/// For the cyclic variant lower[0] couples to x[n-1] and upper[n-1] to x[0];
/// otherwise those two entries are ignored.
struct Tridiagonal {
  std::vector<double> lower, diag, upper;

  explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
  std::size_t size() const noexcept { return diag.size(); }
  std::vector<double> multiply(const std::vector<double>& x, bool cyclic = false) const;
};

struct SolveInfo {
  double pivot_ratio = 1.0;  // min |pivot| / max |diag|; a cheap condition indicator
};

/// Thomas algorithm without pivoting. Throws SolverError on a vanishing pivot.
std::vector<double> solve_tridiagonal(const Tridiagonal& m, std::vector<double> rhs, SolveInfo* info = nullptr);

/// Periodic tridiagonal system via a Sherman-Morrison rank-one correction.
std::vector<double> solve_cyclic_tridiagonal(const Tridiagonal& m, const std::vector<double>& rhs,
                                             SolveInfo* info = nullptr);

}  // namespace chemowave
