#include <doctest.h>

#include <cmath>

#include "chemowave/slab.hpp"

using namespace chemowave;

namespace {
SlabConfig small(double chi, double sigma, double tau = 1.0) {
  SlabConfig c;
  c.a = 30.0;
  c.dx = 0.1;
  c.params = {chi, sigma};
  c.tau = tau;
  return c;
}

Field logistic(const SlabConfig& c) {
  const double x0 = -std::log(1.0 / c.theta - 1.0);
  return Field::from_function(c.grid(), [x0](double x) { return 1.0 / (1.0 + std::exp(x - x0)); }, 1.0, 0.0);
}
}  // namespace

TEST_CASE("config validation") {
  SlabConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.grid().n == 2401);
  CHECK(c.grid().x(1200) == doctest::Approx(0.0).epsilon(1e-12));
  c.theta = 0.02;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.theta = 0.005;
  c.params = {0.6, 1.0};
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.params = {-0.4, 1.0};
  CHECK(c.theta0() == doctest::Approx(0.01));
  c.params = {-0.495, 1.0};
  CHECK(c.theta0() == doctest::Approx(0.01 / 1.495));
}

TEST_CASE("max over the right half refines a parabolic peak") {
  const auto g = Grid1D::make(-10.0, 10.0, 201);
  const Field u = Field::from_function(g, [](double x) { return 0.3 - (x - 2.037) * (x - 2.037); }, 1.0, 0.0);
  CHECK(max_right_half(u) == doctest::Approx(0.3).epsilon(1e-12));
  const Field d = Field::from_function(g, [](double x) { return std::exp(-x); }, 1.0, 0.0);
  CHECK(max_right_half(d) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("linear problem without forcing is nodally exact") {
  auto cfg = small(0.0, 1.0, 0.0);
  cfg.a = 20.0;
  const Field zero(cfg.grid(), 0.0, 1.0, 0.0);
  const double c = 2.0, a = cfg.a;
  const Field ub = solve_linear_bvp(c, zero, cfg);
  CHECK(ub[0] == 1.0);
  CHECK(ub[ub.size() - 1] == 0.0);
  double err = 0.0;
  for (std::size_t i = 0; i < ub.size(); ++i) {
    const double x = ub.grid.x(i);
    const double exact = (std::exp(-c * x) - std::exp(-c * a)) / (std::exp(c * a) - std::exp(-c * a));
    err = std::max(err, std::abs(ub[i] - exact));
    CHECK(ub[i] >= 0.0);
    CHECK(ub[i] <= 1.0);
  }
  CHECK(err < 1e-12);
}

TEST_CASE("linear problem solves its own discrete equation") {
  for (double tau : {0.0, 1.0}) {
    auto cfg = small(-0.3, 1.0, tau);
    const Field prev = logistic(cfg);
    const double c = 2.0;
    const Field ub = solve_linear_bvp(c, prev, cfg);
    CHECK(ub[0] == 1.0);
    CHECK(ub[ub.size() - 1] == 0.0);
    if (tau == 0.0) {
      // Residual of ub with forcing from ub itself differs only by g(ub) - g(prev).
      const auto r = slab_residual(c, ub, cfg);
      double err = 0.0;
      for (std::size_t i = 1; i + 1 < ub.size(); ++i)
        err = std::max(err, std::abs(r[i] - (ub[i] * (1 - ub[i]) - prev[i] * (1 - prev[i]))));
      CHECK(err < 1e-10);
    }
  }
}

TEST_CASE("fkpp slab speed near two") {
  SlabConfig cfg;
  cfg.tau = 0.0;
  cfg.params = {-0.3, 1.0};
  const auto sol = fixed_point(cfg);
  REQUIRE(sol.converged);
  CHECK(sol.c >= 1.95);
  CHECK(sol.c <= 2.05);
  CHECK(std::abs(max_right_half(sol.u) - cfg.theta) < cfg.tol);
}

TEST_CASE("chemotactic slab: bounds, normalisation and fixed-point consistency") {
  SlabConfig cfg;
  cfg.params = {-0.05, 1.0};
  const auto sol = fixed_point(cfg);
  REQUIRE(sol.converged);
  CHECK(sol.tau == 1.0);
  const double chi = std::abs(cfg.params.chi);
  CHECK(sol.c >= 2.0 - 0.05);
  CHECK(sol.c <= 2.0 + chi / cfg.params.sigma + chi / 2.0);
  CHECK(std::abs(max_right_half(sol.u) - cfg.theta) < cfg.tol);
  // Monotone profile: the maximiser over x >= 0 is x = 0.
  CHECK(sol.u[cfg.grid().n / 2] == doctest::Approx(cfg.theta).epsilon(1e-8));
  CHECK(slab_bounds_check(sol).all_pass());

  const auto [c2, u2] = apply_operator(sol.c, sol.u, cfg);
  double du = 0.0;
  for (std::size_t i = 0; i < u2.size(); ++i) du = std::max(du, std::abs(u2[i] - sol.u[i]));
  CHECK(std::abs(c2 - sol.c) < cfg.tol);
  CHECK(du < cfg.tol);

  REQUIRE(sol.tau_path.size() == sol.c_path.size());
  for (std::size_t k = 1; k < sol.c_path.size(); ++k) CHECK(std::abs(sol.c_path[k] - sol.c_path[k - 1]) <= 0.5);
}

TEST_CASE("chi = 0 slab passes the shape checks") {
  SlabConfig cfg;
  const auto sol = fixed_point(cfg);
  REQUIRE(sol.converged);
  const auto rep = slab_bounds_check(sol);
  CHECK(rep.all_pass());
  CHECK(rep.find("left_plateau")->lhs < 1e-6);
}

TEST_CASE("unconverged iterate fails monotonicity") {
  SlabConfig cfg;
  auto sol = fixed_point(cfg);
  for (std::size_t i = sol.u.size() / 2 + 10; i + 1 < sol.u.size(); i += 7) sol.u[i] += 1e-4;
  sol.converged = false;
  const auto rep = slab_bounds_check(sol);
  CHECK_FALSE(rep.find("monotone_right")->pass());
}

TEST_CASE("continuation in a") {
  SlabConfig cfg;
  const auto fk = continue_in_a(cfg, {40.0, 60.0, 80.0});
  REQUIRE(fk.size() == 3);
  CHECK(std::abs(fk[2].c - fk[0].c) < 0.02);

  cfg.params = {-0.025, 1.0};  // |chi|(1/sigma + sigma^2) = 0.05
  const auto sl = continue_in_a(cfg, {40.0, 60.0, 80.0});
  for (const auto& s : sl) {
    CHECK(s.converged);
    CHECK(s.c >= 2.0 - 0.05);
  }
  CHECK(sl.back().c >= 1.95);
  CHECK(sl.back().c <= 2.02);
  CHECK_THROWS_AS(continue_in_a(cfg, {60.0, 40.0}), ValidationError);
}
