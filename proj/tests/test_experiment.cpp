#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ghostfem/error.hpp"
#include "ghostfem/experiment.hpp"

using namespace ghostfem;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("convergence csv") {
  ExperimentConfig c;
  c.Ns = {20, 40};
  c.cond = CondMode::None;
  std::ostringstream diag;
  const ExperimentOutput a = run_convergence(c, diag);
  const ExperimentOutput b = run_convergence(c, diag);
  CHECK_FALSE(a.failed);
  CHECK(a.csv == b.csv);
  const auto rows = lines(a.csv);
  REQUIRE(rows.size() >= 3);
  CHECK(rows.front() == kCsvHeader);
  const auto f = fields(rows[1]);
  CHECK(f.size() == 13);
  CHECK(f[0] == "convergence");
  CHECK(f[1] == "circle");
  CHECK(f[3] == "20");
}

TEST_CASE("random circle centres") {
  const auto o = circle_offsets(42, 10);
  CHECK(o.size() == 10);
  CHECK(o == circle_offsets(42, 10));
  CHECK(o != circle_offsets(43, 10));
  for (auto [e1, e2] : o) {
    CHECK(e1 >= 0.0);
    CHECK(e1 < 1.0);
    CHECK(e2 >= 0.0);
    CHECK(e2 < 1.0);
  }
  const Vec2 c = circle_centre({0.5, 0.25}, 20);
  CHECK(c.x == doctest::Approx(0.525));
  CHECK(c.y == doctest::Approx(0.5125));
  const auto t = default_theta1_grid();
  CHECK(t.front() == doctest::Approx(0.001));
  CHECK(t[1] == doctest::Approx(0.0015));
  CHECK(t.back() == doctest::Approx(0.99));
}

TEST_CASE("solve output") {
  ExperimentConfig c;
  c.command = "solve";
  c.domain = "interval";
  c.bc = BoundaryKind::Dirichlet;
  c.Ns = {20};
  c.theta1 = {0.5};
  std::ostringstream diag;
  const auto one = lines(run_solve(c, diag).csv);
  CHECK(one.size() == 22);
  double worst = 0.0;
  for (std::size_t k = 1; k < one.size(); ++k) {
    const auto f = fields(one[k]);
    if (f[4] == "inactive") continue;
    const double x = std::stod(f[1]);
    worst = std::max(worst, std::abs(std::stod(f[3]) - manufactured1d::u(x)));
  }
  CHECK(worst < 0.05);

  c.domain = "circle";
  c.Ns = {40};
  const auto two = lines(run_solve(c, diag).csv);
  CHECK(two.size() == 1682);
  for (std::size_t k = 1; k < two.size(); ++k) {
    const auto f = fields(two[k]);
    if (f[4] == "inactive") REQUIRE(std::stod(f[3]) == 0.0);
  }
}

TEST_CASE("sweep rows") {
  ExperimentConfig c;
  c.command = "sweep1d";
  c.domain = "interval";
  c.bc = BoundaryKind::Mixed;
  c.Ns = {20, 40};
  c.theta1 = {0.1, 0.5};
  std::ostringstream diag;
  const ExperimentOutput out = run_sweep1d(c, diag);
  CHECK_FALSE(out.failed);
  CHECK(lines(out.csv).size() >= 5);
}

TEST_CASE("configuration validation") {
  ExperimentConfig c;
  c.domain = "square";
  CHECK_THROWS_AS(validate(c), Error);
  c.domain = "circle";
  c.Ns = {};
  CHECK_THROWS_AS(validate(c), Error);
  c.Ns = {20};
  c.samples = 0;
  CHECK_THROWS_AS(validate(c), Error);
}

#ifdef GHOSTFEM_CLI
TEST_CASE("command line exit codes") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ghostfem_cli_test";
  fs::create_directories(dir);
  const fs::path bad = dir / "bad.csv";
  fs::remove(bad);
  const std::string cli = GHOSTFEM_CLI;
  int rc = std::system((cli + " convergence --domain square --out " + bad.string() + " 2>/dev/null").c_str());
  CHECK(WEXITSTATUS(rc) == 2);
  CHECK_FALSE(fs::exists(bad));

  const fs::path good = dir / "good.csv";
  rc = std::system((cli + " convergence --n 20,40 --cond none --out " + good.string()).c_str());
  CHECK(WEXITSTATUS(rc) == 0);
  std::ifstream in(good);
  std::string header;
  std::getline(in, header);
  CHECK(header == kCsvHeader);
  fs::remove_all(dir);
}
#endif
