#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ghostfem/analysis.hpp"
#include "ghostfem/assembly1d.hpp"
#include "ghostfem/error.hpp"
#include "ghostfem/experiment.hpp"
#include "oracles.hpp"

using namespace ghostfem;

namespace {

double hat(int i, double h, double x) { return std::max(0.0, 1.0 - std::abs(x - i * h) / h); }

double hat_slope(int i, double h, double x) {
  const double d = x - i * h;
  if (d <= -h || d >= h) return 0.0;
  return d < 0.0 ? 1.0 / h : -1.0 / h;
}

struct Oracle1D {
  std::vector<std::vector<double>> S, M, S_Ta, S_Tb, D_a, D_b, P_a, P_b;
};

// Piecewise Simpson over each covered cell and analytic traces.
Oracle1D blocks_by_quadrature(const Interval1DSetup& s) {
  const int n = s.N + 1;
  const double h = s.h;
  const auto zero = std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0));
  Oracle1D o{zero, zero, zero, zero, zero, zero, zero, zero};
  const double ea = s.a + 1e-9 * h, eb = s.b - 1e-9 * h;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < s.N; ++k) {
        const double lo = std::max(s.a, k * h), hi = std::min(s.b, (k + 1) * h);
        if (!(hi > lo)) continue;
        const double xm = 0.5 * (lo + hi);
        o.S[i][j] += (hi - lo) * hat_slope(i, h, xm) * hat_slope(j, h, xm);
        o.M[i][j] += oracle::simpson([&](double x) { return hat(i, h, x) * hat(j, h, x); }, lo, hi, 8);
      }
      const double va_i = hat(i, h, s.a), va_j = hat(j, h, s.a);
      const double vb_i = hat(i, h, s.b), vb_j = hat(j, h, s.b);
      const double da_i = hat_slope(i, h, ea), da_j = hat_slope(j, h, ea);
      const double db_i = hat_slope(i, h, eb), db_j = hat_slope(j, h, eb);
      o.S_Ta[i][j] = da_j * va_i + va_j * da_i;
      o.S_Tb[i][j] = -(db_j * vb_i + vb_j * db_i);
      o.D_a[i][j] = va_j * da_i;
      o.D_b[i][j] = -vb_j * db_i;
      o.P_a[i][j] = va_j * va_i;
      o.P_b[i][j] = vb_j * vb_i;
    }
  }
  return o;
}

void compare(const Tridiagonal& t, const std::vector<std::vector<double>>& ref, double scale) {
  for (std::size_t i = 0; i < ref.size(); ++i)
    for (std::size_t j = 0; j < ref.size(); ++j) {
      const double v = (i + 1 >= j && j + 1 >= i) ? t.at(i, j) : 0.0;
      CHECK(std::abs(v - ref[i][j]) <= 1e-10 * scale);
    }
}

}  // namespace

TEST_CASE("stiffness entries near a cut end") {
  const Interval1DSetup s = Interval1DSetup::from_theta(10, 0.4, 1.0, 1.0);
  CHECK(s.a == doctest::Approx(0.06));
  const Blocks1D B = build_blocks_1d(s);
  CHECK(B.S.at(0, 0) == doctest::Approx(4.0));
  CHECK(B.S.at(1, 1) == doctest::Approx(14.0));
  CHECK(B.S.at(0, 1) == doctest::Approx(-4.0));
  CHECK(B.S.at(2, 2) == doctest::Approx(20.0));
  CHECK(B.M.at(1, 1) == doctest::Approx(0.1 * ((1 + std::pow(0.4, 3)) / 3 + 0.4 - 0.16)));
  CHECK(B.M.at(0, 0) == doctest::Approx(0.1 * std::pow(0.4, 3) / 3));
  CHECK(B.P_a.at(1, 1) == doctest::Approx(0.36));
  CHECK(B.P_a.at(0, 0) == doctest::Approx(0.16));
}

TEST_CASE("blocks against quadrature") {
  for (auto [t1, t2] : {std::pair{0.4, 0.7}, std::pair{1.0, 1.0}, std::pair{0.0, 0.3}, std::pair{1e-3, 0.999},
                        std::pair{0.5, 0.0}}) {
    CAPTURE(t1);
    CAPTURE(t2);
    const Interval1DSetup s = Interval1DSetup::from_theta(8, t1, t2, 64.0);
    const Blocks1D B = build_blocks_1d(s);
    const Oracle1D o = blocks_by_quadrature(s);
    compare(B.S, o.S, 1.0 / s.h);
    compare(B.M, o.M, s.h);
    compare(B.S_Ta, o.S_Ta, 1.0 / s.h);
    compare(B.S_Tb, o.S_Tb, 1.0 / s.h);
    compare(B.D_a, o.D_a, 1.0 / s.h);
    compare(B.D_b, o.D_b, 1.0 / s.h);
    compare(B.P_a, o.P_a, 1.0);
    compare(B.P_b, o.P_b, 1.0);
    compare(B.N_b, o.P_b, 1.0);
  }
}

TEST_CASE("whole interval when both parameters are one") {
  const Interval1DSetup s = Interval1DSetup::from_theta(5, 1.0, 1.0, 25.0);
  CHECK(s.a == 0.0);
  CHECK(s.b == 1.0);
  const Blocks1D B = build_blocks_1d(s);
  CHECK(B.S.at(0, 0) == doctest::Approx(5.0));
  CHECK(B.S.at(2, 2) == doctest::Approx(10.0));
  CHECK(B.M.at(2, 2) == doctest::Approx(2.0 * 0.2 / 3.0));
  CHECK(B.M.at(2, 3) == doctest::Approx(0.2 / 6.0));
  const std::vector<bool> active = active_nodes_1d(s);
  CHECK(std::all_of(active.begin(), active.end(), [](bool b) { return b; }));
}

TEST_CASE("dirichlet and mixed systems are symmetric with inactive identity rows") {
  const Interval1DSetup s = Interval1DSetup::from_theta(10, 0.0, 0.3, 100.0);
  const std::vector<double> f(11, 1.0);
  for (const System1D& sys : {assemble_dirichlet_1d(s, f, 0.5, 0.2), assemble_mixed_1d(s, f, 0.5, 0.2)}) {
    CHECK(sys.A.to_csr().symmetry_defect() < 1e-14);
    CHECK_FALSE(sys.active[0]);
    CHECK(sys.A.diag[0] == 1.0);
    CHECK(sys.A.upper[0] == 0.0);
    CHECK(sys.A.lower[1] == 0.0);
    CHECK(sys.rhs[0] == 0.0);
    CHECK(sys.active[1]);
  }
}

TEST_CASE("linear solutions are reproduced") {
  const auto u = [](double x) { return 2.0 * x + 1.0; };
  for (double t1 : {0.0, 0.37, 1.0}) {
    const Interval1DSetup s = Interval1DSetup::from_theta(12, t1, 0.61, 144.0);
    const std::vector<double> f(13, 0.0);
    const System1D d = assemble_dirichlet_1d(s, f, u(s.a), u(s.b));
    const System1D m = assemble_mixed_1d(s, f, u(s.a), 2.0);
    const std::vector<double> ud = solve_1d(d), um = solve_1d(m);
    for (int i = 0; i <= 12; ++i) {
      if (!d.active[i]) {
        CHECK(ud[i] == 0.0);
        continue;
      }
      CHECK(ud[i] == doctest::Approx(u(i * s.h)).epsilon(1e-10));
      CHECK(um[i] == doctest::Approx(u(i * s.h)).epsilon(1e-10));
    }
  }
  const Interval1DSetup s = Interval1DSetup::from_theta(12, 0.3, 0.3, 144.0);
  const System1D z = assemble_dirichlet_1d(s, std::vector<double>(13, 0.0), 0.0, 0.0);
  for (double v : solve_1d(z)) CHECK(v == 0.0);
}

TEST_CASE("setup validation and snapping") {
  CHECK_THROWS_WITH_AS(Interval1DSetup::from_theta(10, 1.2, 0.5, 1.0), doctest::Contains("InvalidTheta"), Error);
  CHECK_THROWS_WITH_AS(Interval1DSetup::from_endpoints(10, 0.2, 1.0, 1.0), doctest::Contains("InvalidTheta"), Error);
  CHECK_THROWS_AS(Interval1DSetup::from_theta(1, 0.5, 0.5, 1.0), Error);
  CHECK_THROWS_AS(Interval1DSetup::from_theta(10, 0.5, 0.5, 0.0), Error);
  const Interval1DSetup e = Interval1DSetup::from_endpoints(10, 0.03, 0.98, 1.0);
  CHECK(e.theta1 == doctest::Approx(0.7));
  CHECK(e.theta2 == doctest::Approx(0.8));

  const Interval1DSetup s = Interval1DSetup::from_theta(10, 0.05, 0.5, 100.0);
  const Interval1DSetup snapped = snap_interval(s, 2.0);
  CHECK(snapped.theta1 == 0.0);
  CHECK(snapped.a == doctest::Approx(0.1));
  CHECK(snapped.theta2 == 0.5);
  CHECK(snap_interval(Interval1DSetup::from_theta(10, 0.2, 0.5, 100.0), 2.0).theta1 == 0.2);
}

TEST_CASE("one dimensional convergence") {
  Run1DSettings a;
  a.bc = BoundaryKind::Dirichlet;
  a.theta1 = 0.37;
  a.theta2 = 0.02;
  a.N = 320;
  Run1DSettings b = a;
  b.N = 640;
  const double e1 = run_1d(a).errors.error, e2 = run_1d(b).errors.error;
  CHECK(e1 / e2 >= 3.4);
  a.N = 20;
  a.compute_cond = true;
  const Run1DResult r = run_1d(a);
  CHECK(r.cond > 1.0);
  CHECK(r.symmetry_defect < 1e-14);
  CHECK(r.errors.error < 0.05);
}
