#include <doctest.h>

#include <cmath>
#include <random>

#include "chemowave/convolve.hpp"

using namespace chemowave;
using Path = AdvectionOperator::Path;

namespace {
Field random_field(const Grid1D& g, std::mt19937_64& rng, double left, double right) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Field f(g, 0.0, left, right);
  for (auto& x : f.values) x = U(rng);
  return f;
}

double sup_diff(const Field& a, const Field& b, std::size_t skip = 0) {
  double d = 0.0;
  for (std::size_t i = skip; i + skip < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}
}  // namespace

TEST_CASE("constants are annihilated") {
  const auto g = Grid1D::make(-20.0, 20.0, 801);
  for (const auto& spec : {KernelSpec::exponential(), KernelSpec::top_hat(), KernelSpec::power_law(4.0)}) {
    AdvectionOperator op(g, spec, {-1.0, 1.0});
    const Field u(g, 0.7, 0.7, 0.7);
    for (Path p : {Path::Direct, Path::Spectral}) {
      CHECK(op.advection(u, p).sup_norm() < 1e-14);
      CHECK(op.gradient(u, p).sup_norm() < 1e-13);
    }
  }
}

TEST_CASE("step profile against the closed form") {
  // x = 0 falls between nodes, so the cell-wise step is the exact step.
  const auto g = Grid1D::make(-10.005, 9.995, 2001);
  const Field u = Field::from_function(g, [](double x) { return x < 0.0 ? 1.0 : 0.0; }, 1.0, 0.0);
  const ChemoParams p{-1.0, 1.0};
  AdvectionOperator op(g, KernelSpec::exponential(), p);
  for (Path path : {Path::Direct, Path::Spectral}) {
    const Field v = op.advection(u, path);
    const Field vx = op.gradient(u, path);
    double ev = 0.0, evx = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
      const double x = g.x(i);
      ev = std::max(ev, std::abs(v[i] - 0.5 * std::exp(-std::abs(x))));
      evx = std::max(evx, std::abs(vx[i] - (x > 0 ? -0.5 : 0.5) * std::exp(-std::abs(x))));
    }
    CHECK(ev < 1e-12);
    CHECK(evx < 1e-12);
    // Nearest nodes to x = 0 and x = 1.
    CHECK(v[1000] == doctest::Approx(0.5 * std::exp(-0.005)).epsilon(1e-12));
    CHECK(v[1100] == doctest::Approx(0.5 * std::exp(-0.995)).epsilon(1e-12));
    CHECK(vx[1100] == doctest::Approx(-0.5 * std::exp(-0.995)).epsilon(1e-12));
    const auto rep = advection_bounds_check(u, v, vx, p);
    CHECK(rep.all_pass());
    CHECK(v.max() <= 0.5);
    CHECK(v.max() > 0.497);
  }
}

TEST_CASE("spectral path matches the direct sum") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {512u, 4096u}) {
    const auto g = Grid1D::make(-25.0, 25.0, n);
    for (const auto& spec : {KernelSpec::exponential(), KernelSpec::top_hat(), KernelSpec::power_law(3.0),
                             KernelSpec::stretched_exp(0.5)}) {
      AdvectionOperator op(g, spec, {-0.7, 2.0});
      for (int r = 0; r < 5; ++r) {
        const Field u = random_field(g, rng, 1.0, 0.0);
        CHECK(relative_sup_difference(op.advection(u, Path::Spectral).values, op.advection(u, Path::Direct).values) <
              1e-10);
        CHECK(relative_sup_difference(op.gradient(u, Path::Spectral).values, op.gradient(u, Path::Direct).values) <
              1e-10);
      }
    }
  }
}

TEST_CASE("linearity") {
  std::mt19937_64 rng(3);
  const auto g = Grid1D::make(-10.0, 10.0, 512);
  AdvectionOperator op(g, KernelSpec::exponential(), {0.3, 1.0});
  const Field a = random_field(g, rng, 1.0, 0.0);
  const Field b = random_field(g, rng, 0.5, 0.25);
  const double alpha = 0.6, beta = -1.7;
  Field mix(g, 0.0, alpha * a.left_ext + beta * b.left_ext, alpha * a.right_ext + beta * b.right_ext);
  for (std::size_t i = 0; i < g.n; ++i) mix[i] = alpha * a[i] + beta * b[i];
  const Field va = op.advection(a), vb = op.advection(b), vm = op.advection(mix);
  const Field ga = op.gradient(a), gb = op.gradient(b), gm = op.gradient(mix);
  for (std::size_t i = 0; i < g.n; ++i) {
    CHECK(std::abs(vm[i] - (alpha * va[i] + beta * vb[i])) < 1e-12);
    CHECK(std::abs(gm[i] - (alpha * ga[i] + beta * gb[i])) < 1e-12);
  }
}

TEST_CASE("translation equivariance") {
  const auto g = Grid1D::make(-40.0, 40.0, 801);
  const auto spec = KernelSpec::exponential();
  AdvectionOperator op(g, spec, {-0.5, 1.0});
  const Field u = Field::from_function(g, [](double x) { return 0.5 * (1.0 + std::tanh(-x)); }, 1.0, 0.0);
  const std::size_t m = 37;
  Field s(g, 0.0, 1.0, 0.0);
  for (std::size_t i = 0; i < g.n; ++i) s[i] = i < m ? 1.0 : u[i - m];
  const Field vu = op.advection(u), vs = op.advection(s);
  const std::size_t edge = static_cast<std::size_t>(std::ceil(spec.tail_cutoff() * 1.0 / g.dx()));
  double d = 0.0;
  for (std::size_t i = m; i < g.n; ++i)
    if (i >= edge && i + edge < g.n) d = std::max(d, std::abs(vs[i] - vu[i - m]));
  CHECK(d < 1e-12);
}

TEST_CASE("repulsion pushes right on nonincreasing data") {
  const auto g = Grid1D::make(-30.0, 30.0, 601);
  const Field u = Field::from_function(g, [](double x) { return 1.0 / (1.0 + std::exp(x)); }, 1.0, 0.0);
  for (const auto& spec : {KernelSpec::exponential(), KernelSpec::top_hat(), KernelSpec::power_law(3.0)}) {
    const Field v = advection(u, spec, {-2.0, 3.0});
    CHECK(v.min() >= 0.0);
  }
}

TEST_CASE("young bounds on random fields") {
  std::mt19937_64 rng(5);
  const auto g = Grid1D::make(-8.0, 8.0, 512);
  for (double sigma : {0.5, 2.0, 50.0}) {
    const ChemoParams p{-3.0, sigma};
    for (int r = 0; r < 10; ++r) {
      const Field u = random_field(g, rng, 1.0, 0.0);
      const Field v = advection(u, KernelSpec::exponential(), p);
      const Field vx = advection_gradient(u, KernelSpec::exponential(), p);
      CHECK(advection_bounds_check(u, v, vx, p, 2.0 * g.dx()).all_pass());
    }
  }
}

TEST_CASE("coarse grids are rejected") {
  const auto g = Grid1D::make(-10.0, 10.0, 41);
  CHECK_THROWS_AS(AdvectionOperator(g, KernelSpec::exponential(), {-1.0, 1.0}), ValidationError);
  CHECK_NOTHROW(AdvectionOperator(g, KernelSpec::exponential(), {-1.0, 2.0}));
}
