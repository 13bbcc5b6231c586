#include "chemowave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chemowave {

Grid1D Grid1D::make(double x_min, double x_max, std::size_t n) {
  Grid1D g{x_min, x_max, n};
  g.validate();
  return g;
}

Grid1D Grid1D::with_spacing(double x_min, double x_max, double dx) {
  if (!(dx > 0.0) || !(x_max > x_min)) throw ValidationError("grid needs x_max > x_min and dx > 0");
  const double cells = std::round((x_max - x_min) / dx);
  if (cells > 1e9) throw ValidationError("grid too fine");
  return make(x_min, x_max, static_cast<std::size_t>(cells) + 1);
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = x(i);
  return xs;
}

void Grid1D::validate() const {
  if (!std::isfinite(x_min) || !std::isfinite(x_max)) throw ValidationError("grid bounds must be finite");
  if (n < 16) throw ValidationError("grid needs at least 16 points");
  if (!(x_max > x_min)) throw ValidationError("grid needs x_max > x_min");
}

Field::Field(Grid1D g, double fill, double left, double right)
    : grid(g), values(g.n, fill), left_ext(left), right_ext(right) {}

Field::Field(Grid1D g, std::vector<double> v, double left, double right)
    : grid(g), values(std::move(v)), left_ext(left), right_ext(right) {
  if (values.size() != grid.n) throw ValidationError("field length does not match its grid");
}

Field Field::from_function(const Grid1D& g, const std::function<double(double)>& f, double left, double right) {
  Field out(g, 0.0, left, right);
  for (std::size_t i = 0; i < g.n; ++i) out.values[i] = f(g.x(i));
  return out;
}

double Field::max() const { return *std::max_element(values.begin(), values.end()); }
double Field::min() const { return *std::min_element(values.begin(), values.end()); }

double Field::sup_norm() const {
  double m = std::max(std::abs(left_ext), std::abs(right_ext));
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

bool Field::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); }) &&
         std::isfinite(left_ext) && std::isfinite(right_ext);
}

void Field::validate() const {
  grid.validate();
  if (values.size() != grid.n) throw ValidationError("field length does not match its grid");
  if (!all_finite()) throw ValidationError("field has non-finite values");
}

void ChemoParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be positive and finite");
  if (!std::isfinite(chi)) throw ValidationError("chi must be finite");
  if (!(chi < 0.5)) throw ValidationError("standing assumption violated: chi must be < 1/2");
  if (!(chi / sigma < 0.5)) throw ValidationError("standing assumption violated: chi/sigma must be < 1/2");
}

double ChemoParams::upper_bound_u() const { return std::max(1.0, 1.0 / (1.0 - chi / sigma)); }

double ChemoParams::slow_predicate() const { return std::abs(chi) * (1.0 / sigma + sigma * sigma); }

double ChemoParams::fast_predicate() const {
  if (chi == 0.0) return std::numeric_limits<double>::infinity();
  return std::min(sigma, sigma / std::abs(chi));
}

}  // namespace chemowave
