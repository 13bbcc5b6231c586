#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "chemowave/grid.hpp"
#include "chemowave/kernels.hpp"
#include "chemowave/report.hpp"

namespace chemowave {

/// v = chi K_sigma * u~ and its derivative on one grid, where u~ is u
/// continued by its extension values.
///
/// u is read as piecewise constant on cells [x_i - dx/2, x_i + dx/2], so
/// both outputs are exact integrals of the kernel against that step
/// function; cell offsets put every sample of K at half-integer multiples of
/// dx, never at the jump. v_x uses the jump atom -chi/sigma u(x) plus the
/// cell increments of K_sigma, which also covers the TopHat edge atoms.
///
/// Weight tables and kernel spectra are built once; apply calls are const
/// and may run concurrently.
class AdvectionOperator {
 public:
  enum class Path { Auto, Direct, Spectral };

  /// Throws ValidationError when dx > sigma/4.
  AdvectionOperator(const Grid1D& grid, const KernelSpec& spec, const ChemoParams& params);
  ~AdvectionOperator();
  AdvectionOperator(AdvectionOperator&&) noexcept;
  AdvectionOperator& operator=(AdvectionOperator&&) noexcept;

  Field advection(const Field& u, Path path = Path::Auto) const;
  Field gradient(const Field& u, Path path = Path::Auto) const;

  /// Spectral path is taken automatically from this many points.
  static constexpr std::size_t kSpectralThreshold = 256;

  const Grid1D& grid() const noexcept { return grid_; }
  const ChemoParams& params() const noexcept { return params_; }
  bool spectral_by_default() const noexcept { return grid_.n >= kSpectralThreshold; }

 private:
  struct Fft;

  // Full-line kernel for offsets -(n-1)..(n-1), stored at index m + n - 1.
  std::vector<double> conv_weights_;
  std::vector<double> grad_weights_;
  std::vector<double> kbar_tail_;  // Kbar((k + 1/2) dx / sigma)
  std::vector<double> k_tail_;     // K_sigma((k + 1/2) dx)
  double atom_ = 0.0;              // 2 K_sigma(0+)

  Grid1D grid_;
  ChemoParams params_;
  std::unique_ptr<Fft> fft_;

  std::vector<double> correlate(const std::vector<double>& u, const std::vector<double>& w, Path path,
                                bool conv_kernel) const;
};

Field advection(const Field& u, const KernelSpec& spec, const ChemoParams& params);
Field advection_gradient(const Field& u, const KernelSpec& spec, const ChemoParams& params);

/// ||v||_inf <= |chi|/2 ||u||_inf and ||v_x||_inf <= |chi|/sigma ||u||_inf,
/// each with the given additive slack (scaled by ||u||_inf).
BoundsReport advection_bounds_check(const Field& u, const Field& v, const Field& vx, const ChemoParams& params,
                                    double slack_factor = 0.0);

/// Largest |a_i - b_i| over max|b_i|.
double relative_sup_difference(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace chemowave
