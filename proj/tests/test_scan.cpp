#include <doctest.h>

#include <cmath>

#include "chemowave/scan.hpp"

using namespace chemowave;

namespace {
ScanConfig slab_scan(std::vector<double> chis, std::vector<double> sigmas) {
  ScanConfig sc;
  sc.chi_values = std::move(chis);
  sc.sigma_values = std::move(sigmas);
  sc.slab.a = 40.0;
  sc.slab.dx = 0.1;
  sc.certificate = false;
  return sc;
}
}  // namespace

TEST_CASE("mode names") {
  CHECK(parse_scan_mode("both") == ScanMode::Both);
  CHECK(std::string(to_string(ScanMode::Evolve)) == "evolve");
  CHECK(std::string(to_string(Regime::Intermediate)) == "intermediate");
  CHECK_THROWS_AS(parse_scan_mode("all"), ValidationError);
}

TEST_CASE("one cell matches a single slab run") {
  auto sc = slab_scan({-0.05}, {1.0});
  const auto recs = run_scan(sc);
  REQUIRE(recs.size() == 1);
  SlabConfig cfg = sc.slab;
  cfg.params = {-0.05, 1.0};
  const auto sol = fixed_point(cfg);
  CHECK(recs[0].c_slab == sol.c);
  CHECK(recs[0].slow_pred == doctest::Approx(0.1));
  CHECK(recs[0].fast_pred == doctest::Approx(1.0));
  CHECK(recs[0].kernel == "exp");
}

TEST_CASE("weak chemotaxis is classified slow") {
  auto sc = slab_scan({-0.02, -0.05}, {0.5, 1.0});
  sc.workers = 4;
  const auto recs = run_scan(sc);
  REQUIRE(recs.size() == 4);
  CHECK(recs[1].chi == -0.02);
  CHECK(recs[1].sigma == 1.0);
  CHECK(recs[2].chi == -0.05);
  for (const auto& r : recs) CHECK(r.classification == Regime::Slow);
}

TEST_CASE("inadmissible cells are skipped, not dropped") {
  const auto recs = run_scan(slab_scan({0.6, 0.0}, {1.0}));
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].classification == Regime::Skipped);
  REQUIRE_FALSE(recs[0].flags.empty());
  CHECK(recs[1].classification == Regime::Slow);
  const auto csv = scan_csv(recs);
  CHECK(csv.find("skipped") != std::string::npos);
}

TEST_CASE("strong repulsion is classified fast and speeds grow with sigma") {
  ScanConfig sc;
  sc.chi_values = {-20.0};
  sc.sigma_values = {200.0, 400.0, 800.0};
  sc.mode = ScanMode::Evolve;
  sc.workers = 3;
  sc.evolve.grid = Grid1D::with_spacing(-1000.0, 3000.0, 1.0);
  sc.evolve.dt = 0.05;
  sc.evolve.t_max = 150.0;
  const auto recs = run_scan(sc);
  REQUIRE(recs.size() == 3);
  for (const auto& r : recs) {
    CHECK(r.classification == Regime::Fast);
    CHECK(r.c_measured() >= 7.5);
  }
  CHECK(recs[0].c_evolve <= recs[1].c_evolve);
  CHECK(recs[1].c_evolve <= recs[2].c_evolve);
}

TEST_CASE("scan output is deterministic and independent of scheduling") {
  auto sc = slab_scan({-0.02, 0.03}, {0.5, 2.0});
  sc.certificate = true;
  sc.slab.a = 60.0;
  sc.slab.dx = 0.05;
  sc.workers = 1;
  const auto a = scan_csv(run_scan(sc));
  const auto b = scan_csv(run_scan(sc));
  sc.workers = 6;
  const auto c = scan_csv(run_scan(sc));
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("cell seeds") {
  CHECK(cell_seed(-0.02, 1.0) == cell_seed(-0.02, 1.0));
  CHECK(cell_seed(-0.02, 1.0) != cell_seed(1.0, -0.02));
  CHECK(cell_seed(-0.02, 1.0) != cell_seed(-0.02, 0.5));
}

TEST_CASE("speed sandwich") {
  RegimeRecord fast;
  fast.chi = -20.0;
  fast.sigma = 400.0;
  fast.fast_pred = 20.0;
  fast.c_evolve = 11.4;
  RegimeRecord fkpp;
  fkpp.sigma = 1.0;
  fkpp.c_slab = 1.998;
  RegimeRecord slow = fkpp;
  slow.c_slab = 1.9;
  const auto rows = sandwich_table({fast, fkpp, slow});
  CHECK(rows[0].upper == doctest::Approx(2.0 * std::sqrt(1.05) + 10.0));
  CHECK(rows[0].upper == doctest::Approx(12.0494).epsilon(1e-5));
  CHECK(rows[0].pass);
  CHECK(rows[1].lower == 2.0);
  CHECK(rows[1].upper == 2.0);
  CHECK(rows[1].pass);
  CHECK_FALSE(rows[2].pass);
  CHECK(sandwich_csv(rows).rfind("chi,sigma,lower,c,upper,pass\n", 0) == 0);
  CHECK_THROWS_AS(sandwich_table({}), ValidationError);
}
