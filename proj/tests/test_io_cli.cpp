#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "chemowave/cli.hpp"
#include "chemowave/io.hpp"

using namespace chemowave;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("chemowave_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = parse_and_dispatch(args, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}
}  // namespace

TEST_CASE("number formatting round-trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = U(rng) * std::pow(10.0, (i % 40) - 20);
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("profile CSV and sidecar") {
  const auto dir = scratch("profile");
  const Grid1D g{0.0, 1.0, 3};
  const Field u(g, std::vector<double>{1.0, 0.1 + 0.2, 1.0 / 3.0}, 1.0, 0.0);
  const Field v(g, std::vector<double>{0.0, -1e-300, 2.5}, 0.0, 0.0);
  const Field vx(g, std::vector<double>{std::exp(1.0), 0.0, -7.0}, 0.0, 0.0);
  const auto path = (dir / "p.csv").string();
  write_profile(path, u, v, vx, {{"command", "test"}});
  CHECK(line_count(path) == 4);
  const Profile p = read_csv(path);
  REQUIRE(p.columns == std::vector<std::string>{"x", "u", "v", "v_x"});
  CHECK(p.column("u") == u.values);
  CHECK(p.column("v") == v.values);
  CHECK(p.column("v_x") == vx.values);
  const auto meta = read_json(path + ".meta.json");
  CHECK(meta["n"] == 3);
  CHECK(meta["command"] == "test");
  CHECK(meta["columns"].size() == 4);
  CHECK(meta["version"] == version());
  CHECK_THROWS_AS(p.column("w"), ValidationError);
}

TEST_CASE("malformed CSV is rejected") {
  const auto dir = scratch("bad");
  write_text((dir / "a.csv").string(), "x,u\n0,1\n1,abc\n");
  CHECK_THROWS_AS(read_csv((dir / "a.csv").string()), ValidationError);
  write_text((dir / "b.csv").string(), "x,u\n0,1,2\n");
  CHECK_THROWS_AS(read_csv((dir / "b.csv").string()), ValidationError);
  CHECK_THROWS_AS(read_csv((dir / "missing.csv").string()), ValidationError);
}

TEST_CASE("cli exit codes") {
  const auto dir = scratch("codes");
  const auto out = (dir / "s.csv").string();
  CHECK(run({"slab", "--chi", "0.6", "--sigma", "1", "--out", out}) == kExitValidation);
  CHECK(run({"slab", "--chi", "0", "--theta", "0.5", "--out", out}) == kExitValidation);
  CHECK(run({"slab", "--kernel", "gauss", "--out", out}) == kExitValidation);
  CHECK(run({"evolve", "--dt", "1", "--out", out}) == kExitValidation);
  CHECK(run({"bogus"}) == kExitValidation);
  CHECK(run({"check", "--input", (dir / "nope.csv").string()}) == kExitValidation);
  CHECK(run({"slab", "--a", "30", "--dx", "0.1", "--max-iter", "1", "--out", out}) == kExitNoConvergence);
  CHECK(run({"--help"}) == kExitOk);
}

TEST_CASE("slab, eigen and check end to end") {
  const auto dir = scratch("e2e");
  const auto slab = (dir / "slab.csv").string();
  std::string text;
  REQUIRE(run({"slab", "--chi", "-0.05", "--sigma", "1", "--kernel", "exp", "--a", "60", "--theta", "0.005", "--out",
               slab},
              &text) == kExitOk);
  CHECK(text.find("c=") != std::string::npos);
  const auto meta = read_json(slab + ".meta.json");
  CHECK(meta["converged"] == true);
  CHECK(meta["config"]["chi"] == -0.05);
  const double c = meta["c"].get<double>();
  CHECK(c > 1.95);
  CHECK(c < 2.05);

  const auto chk = (dir / "check.json").string();
  REQUIRE(run({"check", "--input", slab, "--chi", "-0.05", "--sigma", "1", "--out", chk}) == kExitOk);
  const auto report = read_json(chk);
  CHECK(report["failures"] == 0);
  for (const auto& rec : report["checks"]) {
    CHECK(rec.contains("paper_ref"));
    CHECK(rec.contains("lhs"));
    CHECK(rec.contains("pass"));
  }

  const auto eig = (dir / "eigen.csv").string();
  REQUIRE(run({"eigen", "--input", slab, "--chi", "-0.05", "--sigma", "1", "--c-test", "2", "--out", eig}) ==
          kExitOk);
  CHECK(read_json(eig + ".meta.json")["lambda"].get<double>() >= -1e-8);
}

TEST_CASE("config file, flag precedence and output root") {
  const auto dir = scratch("config");
  const auto cfg = (dir / "c.json").string();
  write_json(cfg, {{"chi", 0.6}, {"sigma", 1.0}, {"a", 30}, {"dx", 0.1}});
  CHECK(run({"slab", "--config", cfg, "--out", (dir / "x.csv").string()}) == kExitValidation);
  CHECK(run({"slab", "--config", cfg, "--chi", "-0.05", "--out", (dir / "x.csv").string()}) == kExitOk);
  CHECK(read_json((dir / "x.csv.meta.json").string())["config"]["a"] == 30.0);

  ::setenv("FKPP_OUT_DIR", dir.c_str(), 1);
  CHECK(run({"slab", "--a", "30", "--dx", "0.1", "--out", "rel.csv"}) == kExitOk);
  ::unsetenv("FKPP_OUT_DIR");
  CHECK(fs::exists(dir / "rel.csv"));
}

TEST_CASE("scan subcommand writes identical CSV twice") {
  const auto dir = scratch("scan");
  const std::vector<std::string> base = {"scan", "--chi-list", "-0.02,0", "--sigma-list", "1,2", "--a", "30",
                                         "--dx", "0.1", "--workers", "2"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", (dir / "a.csv").string()});
  b.insert(b.end(), {"--out", (dir / "b.csv").string()});
  REQUIRE(run(a) == kExitOk);
  REQUIRE(run(b) == kExitOk);
  std::ifstream fa(dir / "a.csv"), fb(dir / "b.csv");
  const std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
  CHECK(sa == sb);
  CHECK(line_count(dir / "a.csv") == 5);
  CHECK(fs::exists(dir / "a.csv.sandwich.csv"));
}
