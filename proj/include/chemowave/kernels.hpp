#pragma once

#include <string>
#include <string_view>

#include "chemowave/report.hpp"

namespace chemowave {

enum class KernelFamily { Exponential, TopHat, PowerLaw, StretchedExp };

/// An odd interaction kernel K with ||K||_1 = 1 and K(0+) = -1/2.
///
/// All families share the form K(x) = -sign(x) * m(|x|) with m decreasing:
///   Exponential   m(r) = e^{-r} / 2
///   TopHat        m(r) = 1/2 on [0, 1], 0 beyond
///   PowerLaw      m(r) = (1 + r/(k-1))^{-k} / 2,   k > 2
///   StretchedExp  m(r) = exp(-r^alpha / D_alpha) / 2,  0 < alpha < 1
///
/// Specs are immutable once built. D_alpha is computed by quadrature in the
/// factory, so concurrent use needs no synchronisation.
class KernelSpec {
 public:
  static KernelSpec exponential();
  static KernelSpec top_hat();
  static KernelSpec power_law(double k);
  static KernelSpec stretched_exp(double alpha);

  /// Parses the CLI form: exp | tophat | powerlaw:<k> | stretched:<alpha>.
  static KernelSpec parse(std::string_view text);

  KernelFamily family() const noexcept { return family_; }
  double shape() const noexcept { return shape_; }
  double d_alpha() const noexcept { return d_alpha_; }
  double amplitude() const noexcept { return amplitude_; }

  /// Dimensionless radius beyond which Kbar < 1e-14; quadratures stop there
  /// and add the analytic tail.
  double tail_cutoff() const noexcept { return tail_cutoff_; }

  /// Inverse of parse().
  std::string name() const;

  /// Copy with K multiplied by `factor`. Only useful for exercising the
  /// validation path with a kernel that is deliberately not normalised.
  KernelSpec with_amplitude(double factor) const;

  /// K(x). Throws std::domain_error at x == 0, where K jumps.
  double eval(double x) const;

  /// K(0+), the right limit at the jump.
  double right_limit_at_zero() const noexcept { return -0.5 * amplitude_; }

  /// K_sigma(x) = K(x / sigma) / sigma.
  double scaled(double sigma, double x) const;

  /// Kbar(x) = -int_x^inf K(y) dy for x >= 0; Kbar(0) = 1/2.
  double kbar(double x) const;

  /// Unique x >= 0 with Kbar(x) = w, for w in (0, Kbar(0)].
  double kbar_inverse(double w) const;

 private:
  KernelSpec(KernelFamily family, double shape);

  double magnitude(double r) const;  // |K(r)| for r > 0

  KernelFamily family_;
  double shape_ = 0.0;
  double d_alpha_ = 1.0;
  double amplitude_ = 1.0;
  double tail_cutoff_ = 0.0;
};

/// int_0^{cutoff*sigma} |K_sigma| by composite Gauss-Legendre on geometric
/// panels, doubled for both half-lines, plus the analytic tail 2*Kbar(cutoff).
double l1_norm(const KernelSpec& spec, double sigma = 1.0);

/// int_0^inf (1 + x) Kbar(x) dx: quadrature to the cutoff plus an analytic
/// tail bound. Returns +inf when the tail diverges.
double kbar_first_moment(const KernelSpec& spec);

/// Normalisation, jump, oddness, monotonicity, sign, and moment checks.
BoundsReport validate_kernel(const KernelSpec& spec);

}  // namespace chemowave
