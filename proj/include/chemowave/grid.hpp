#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chemowave {

/// Bad input: parameters outside their admissible range. CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A solver gave up (stagnation, blow-up, singular system). CLI exit code 3.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform grid x_i = x_min + i*dx, i = 0..n-1.
struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n = 16;

  static Grid1D make(double x_min, double x_max, std::size_t n);
  /// n chosen so the spacing is as close to dx as the interval allows.
  static Grid1D with_spacing(double x_min, double x_max, double dx);

  double dx() const noexcept { return (x_max - x_min) / static_cast<double>(n - 1); }
  double x(std::size_t i) const noexcept { return x_min + static_cast<double>(i) * dx(); }
  std::vector<double> nodes() const;
  void validate() const;

  bool operator==(const Grid1D&) const = default;
};

/// Samples on a grid plus the constant values assumed beyond each end.
struct Field {
  Grid1D grid;
  std::vector<double> values;
  double left_ext = 0.0;
  double right_ext = 0.0;

  Field() = default;
  Field(Grid1D g, double fill, double left = 0.0, double right = 0.0);
  Field(Grid1D g, std::vector<double> v, double left = 0.0, double right = 0.0);
  static Field from_function(const Grid1D& g, const std::function<double(double)>& f, double left,
                             double right);

  std::size_t size() const noexcept { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  double max() const;
  double min() const;
  double sup_norm() const;  // includes the extensions
  bool all_finite() const;
  void validate() const;
};

/// Chemotactic strength chi and kernel length scale sigma.
struct ChemoParams {
  double chi = 0.0;
  double sigma = 1.0;

  /// Throws ValidationError unless sigma > 0, chi < 1/2 and chi/sigma < 1/2.
  void validate() const;
  /// max{1, (1 - chi/sigma)^-1}
  double upper_bound_u() const;
  /// |chi| (1/sigma + sigma^2)
  double slow_predicate() const;
  /// min(sigma, sigma/|chi|); +inf at chi = 0.
  double fast_predicate() const;
};

}  // namespace chemowave
