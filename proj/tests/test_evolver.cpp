#include <doctest.h>

#include <cmath>

#include "chemowave/evolver.hpp"

using namespace chemowave;

namespace {
EvolveConfig fkpp(double dx, double dt, double t_max) {
  EvolveConfig c;
  c.grid = Grid1D::with_spacing(-20.0, 120.0, dx);
  c.dt = dt;
  c.t_max = t_max;
  c.snapshot_every = 0.5;
  return c;
}
}  // namespace

TEST_CASE("constant state u = 1 is preserved exactly") {
  EvolveConfig c;
  c.grid = Grid1D::make(-10.0, 10.0, 201);
  c.dt = 0.002;
  c.t_max = 1.0;
  c.right_ext = 1.0;
  c.initial = InitialCondition::from_field(Field(c.grid, 1.0, 1.0, 1.0));
  const auto traj = evolve(c);
  CHECK_FALSE(traj.aborted);
  REQUIRE_FALSE(traj.snapshots.empty());
  for (const auto& s : traj.snapshots)
    for (double x : s.u.values) CHECK(x == 1.0);
}

TEST_CASE("synthetic translating profile") {
  const auto g = Grid1D::make(-10.0, 100.0, 2201);
  Trajectory traj;
  for (int k = 0; k <= 20; ++k) {
    const double t = 0.5 * k;
    traj.snapshots.push_back(
        {t, Field::from_function(g, [t](double x) { return 1.0 / (1.0 + std::exp(x - 3.0 * t - 1.0)); }, 1.0, 0.0)});
  }
  const auto est = measure_speed(traj, 0.5, 0.4);
  CHECK(est.c == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(est.samples >= 5);
  CHECK(fit_speed({{0, 1}, {1, 4}, {2, 7}, {3, 10}, {4, 13}}, 1.0).c == doctest::Approx(3.0));
  CHECK_THROWS_AS(fit_speed({{0, 1}, {1, 4}}, 1.0), ValidationError);
}

TEST_CASE("front position interpolates the rightmost crossing") {
  const auto g = Grid1D::make(0.0, 20.0, 21);
  Field u(g, 0.0, 1.0, 0.0);
  for (std::size_t i = 0; i < g.n; ++i) u[i] = i <= 4 ? 1.0 : 0.0;
  u[2] = 0.2;
  u[12] = 0.1;
  CHECK(front_position(u, 0.5) == doctest::Approx(4.5));
  CHECK_THROWS_AS(front_position(Field(g, 0.0, 0.0, 0.0), 0.5), ValidationError);
}

TEST_CASE("integral identity on the sigmoid") {
  const auto g = Grid1D::make(-40.0, 40.0, 8001);
  const Field u = Field::from_function(g, [](double x) { return 1.0 / (1.0 + std::exp(x)); }, 1.0, 0.0);
  CHECK(std::abs(speed_from_integral(u) - 1.0) < 1e-8);
  CHECK(speed_from_integral(Field(g, 0.0, 0.0, 0.0)) == 0.0);
  CHECK_THROWS_AS(speed_from_integral(Field(g, 0.0, 0.5, 0.0)), ValidationError);
}

TEST_CASE("time step limits are enforced") {
  auto c = fkpp(0.1, 0.01, 1.0);
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.dt = 0.002;
  CHECK_NOTHROW(c.validate());
  c.params = {-20.0, 400.0};
  c.dt = 0.0025;
  c.grid = Grid1D::with_spacing(-20.0, 120.0, 0.01);
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("fkpp speed and grid refinement") {
  const auto coarse = evolve(fkpp(0.2, 0.01, 40.0));
  const auto fine = evolve(fkpp(0.1, 0.0025, 40.0));
  REQUIRE_FALSE(coarse.aborted);
  REQUIRE_FALSE(fine.aborted);
  const double cc = measure_speed(coarse).c;
  const double cf = measure_speed(fine).c;
  CHECK(cf > 1.85);
  CHECK(cf < 2.02);
  CHECK(std::abs(cc - cf) / cf < 0.01);
  CHECK(fine.clipped_mass < 1e-8);
  CHECK(fine.max_u <= 1.0 + 1e-3);
}

TEST_CASE("chi = 0 ignores the kernel") {
  auto a = fkpp(0.2, 0.01, 5.0);
  auto b = a;
  b.spec = KernelSpec::top_hat();
  b.params.sigma = 7.0;
  const auto ta = evolve(a), tb = evolve(b);
  REQUIRE(ta.snapshots.size() == tb.snapshots.size());
  CHECK(ta.snapshots.back().u.values == tb.snapshots.back().u.values);
}

TEST_CASE("upper bound and positivity with chemotaxis") {
  for (const ChemoParams p : {ChemoParams{0.3, 1.0}, ChemoParams{-1.0, 2.0}}) {
    EvolveConfig c;
    c.grid = Grid1D::with_spacing(-20.0, 80.0, 0.1);
    c.dt = 0.002;
    c.t_max = 10.0;
    c.params = p;
    c.initial = InitialCondition::step();
    const auto traj = evolve(c);
    REQUIRE_FALSE(traj.aborted);
    CHECK(traj.max_u <= p.upper_bound_u() + 1e-3);
    CHECK(traj.min_before_clip >= -1e-10);
    CHECK(traj.clipped_mass < 1e-8);
  }
}

TEST_CASE("front reaching the right boundary aborts the run") {
  auto c = fkpp(0.2, 0.01, 80.0);
  c.grid = Grid1D::with_spacing(-20.0, 60.0, 0.2);
  const auto traj = evolve(c);
  CHECK(traj.aborted);
  CHECK_FALSE(traj.abort_reason.empty());
  CHECK(traj.t_end < 80.0);
}
