#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "ghostfem/error.hpp"
#include "ghostfem/quadrature.hpp"
#include "oracles.hpp"
#include "random_cells.hpp"

using namespace ghostfem;

namespace {

const std::vector<Vec2> kUnit = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};

}  // namespace

TEST_CASE("edge rule") {
  double sum = 0.0;
  for (double w : EdgeRule::weights) sum += w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(EdgeRule::weights[0] == doctest::Approx(5.0 / 18.0));
  CHECK(EdgeRule::weights[1] == doctest::Approx(4.0 / 9.0));
  CHECK(EdgeRule::nodes[0] == doctest::Approx((1.0 - std::sqrt(0.6)) / 2.0));
  for (int d = 0; d <= 5; ++d) {
    double q = 0.0;
    for (int s = 0; s < 3; ++s) q += EdgeRule::weights[s] * std::pow(EdgeRule::nodes[s], d);
    CHECK(q == doctest::Approx(1.0 / (d + 1)).epsilon(1e-14));
  }
}

TEST_CASE("segment integrals of F dy") {
  const auto one = BivariatePolynomial::constant(1.0);
  CHECK(gauss3_segment(one, {0, 0}, {0, 1}) == doctest::Approx(1.0));
  CHECK(gauss3_segment(one, {0, 0.3}, {1, 0.3}) == 0.0);
  CHECK(gauss3_segment(BivariatePolynomial::monomial(1, 0), {1, 0}, {1, 1}) == doctest::Approx(1.0));
  CHECK(gauss3_segment(one, {0.2, 0.1}, {0.7, 0.6}) == doctest::Approx(0.5));
}

TEST_CASE("polygon integrals of simple shapes") {
  const auto one = BivariatePolynomial::constant(1.0);
  CHECK(polygon_integral(one, kUnit) == doctest::Approx(1.0));
  const std::vector<Vec2> tri = {{0, 0}, {1, 0}, {0, 1}};
  CHECK(polygon_integral(one, tri) == doctest::Approx(0.5));
  CHECK(polygon_integral(BivariatePolynomial::monomial(1, 0), kUnit) == doctest::Approx(0.5));
  CHECK(polygon_integral(BivariatePolynomial::monomial(2, 2), kUnit) == doctest::Approx(1.0 / 9.0));
  const std::vector<Vec2> cw = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  CHECK(polygon_integral(one, cw) == doctest::Approx(-1.0));
  CHECK_THROWS_WITH_AS(polygon_integral(BivariatePolynomial::monomial(3, 2), kUnit),
                       doctest::Contains("DegreeTooHigh"), Error);
}

TEST_CASE("polynomial arithmetic") {
  const auto x = BivariatePolynomial::monomial(1, 0);
  const auto y = BivariatePolynomial::monomial(0, 1);
  const auto p = (x + 2.0 * y) * (x - y);
  CHECK(p.eval(0.3, 0.7) == doctest::Approx((0.3 + 1.4) * (0.3 - 0.7)));
  CHECK(p.total_degree() == 2);
  CHECK(p.primitive_x().eval(2.0, 1.0) == doctest::Approx(8.0 / 3.0 + 2.0 - 4.0));
  CHECK(p.derivative_y().eval(0.3, 0.7) == doctest::Approx(0.3 - 4 * 0.7));
  CHECK(BivariatePolynomial().degree_x() == -1);
  CHECK_THROWS_AS((void)BivariatePolynomial::monomial(5, 0).primitive_x(), Error);
  CHECK_THROWS_AS(BivariatePolynomial::monomial(3, 0) * BivariatePolynomial::monomial(3, 0), Error);
  CHECK_THROWS_AS(BivariatePolynomial::monomial(6, 0), Error);
}

TEST_CASE("full-cell matrices are the bilinear ones") {
  const double h = 0.1;
  const LocalMatrices m = local_matrices(kUnit, h);
  for (int i = 0; i < 4; ++i) {
    const int edge1 = (i + 1) % 4, edge2 = (i + 3) % 4, diag = (i + 2) % 4;
    CHECK(m.mass[i][i] == doctest::Approx(h * h / 9.0));
    CHECK(m.mass[i][edge1] == doctest::Approx(h * h / 18.0));
    CHECK(m.mass[i][edge2] == doctest::Approx(h * h / 18.0));
    CHECK(m.mass[i][diag] == doctest::Approx(h * h / 36.0));
    CHECK(m.stiffness[i][i] == doctest::Approx(2.0 / 3.0));
    CHECK(m.stiffness[i][edge1] == doctest::Approx(-1.0 / 6.0));
    CHECK(m.stiffness[i][diag] == doctest::Approx(-1.0 / 3.0));
    double row = 0.0;
    for (int j = 0; j < 4; ++j) row += m.stiffness[i][j];
    CHECK(std::abs(row) < 1e-15);
    CHECK(local_mass(kUnit, i, diag, h) == m.mass[i][diag]);
    CHECK(local_stiffness(kUnit, i, edge1, h) == m.stiffness[i][edge1]);
  }
  CHECK_THROWS_AS(local_mass(kUnit, 4, 0, h), Error);
}

TEST_CASE("boundary products on the left edge") {
  const double h = 0.1;
  const BoundaryProducts ll = boundary_products({0, 0}, {0, 1}, {-1, 0}, 0, 0, h);
  CHECK(ll.mass == doctest::Approx(h / 3.0));
  const BoundaryProducts lr = boundary_products({0, 0}, {0, 1}, {-1, 0}, 0, 1, h);
  CHECK(lr.flux == doctest::Approx(-1.0 / 3.0));
  CHECK(lr.mass == 0.0);
  const BoundaryProducts rl = boundary_products({0, 0}, {0, 1}, {-1, 0}, 1, 0, h);
  CHECK(rl.symflux == doctest::Approx(lr.flux));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const BoundaryProducts a = boundary_products({0.2, 0.0}, {0.9, 0.6}, {0.6, -0.8}, i, j, h);
      const BoundaryProducts b = boundary_products({0.2, 0.0}, {0.9, 0.6}, {0.6, -0.8}, j, i, h);
      CHECK(a.mass == doctest::Approx(b.mass));
      CHECK(a.flux == doctest::Approx(b.symflux));
    }
  }
  CHECK_THROWS_WITH_AS(boundary_matrices({0.5, 0.5}, {0.5, 0.5}, {1, 0}, h), doctest::Contains("ZeroLengthSegment"),
                       Error);
}

TEST_CASE("boundary load matches the products for polynomial data") {
  const double h = 0.2;
  const Vec2 a{0.1, 0.0}, b{1.0, 0.7};
  const Vec2 n{0.7 / std::hypot(0.9, 0.7), -0.9 / std::hypot(0.9, 0.7)};
  const auto pts = edge_points(a, b);
  // g equals the hat of vertex 2 along the segment
  std::array<double, 3> g{};
  for (int s = 0; s < 3; ++s) g[s] = pts[s].x * pts[s].y;
  const BoundaryLoad load = boundary_load(a, b, n, h, g);
  const BoundaryMatrices bm = boundary_matrices(a, b, n, h);
  for (int i = 0; i < 4; ++i) {
    CHECK(load.value[i] == doctest::Approx(bm.mass[i][2]).epsilon(1e-13));
    CHECK(load.flux[i] == doctest::Approx(bm.flux[2][i]).epsilon(1e-13));
  }
}

TEST_CASE("cut-cell integrals against fan triangulation") {
  std::mt19937_64 rng(7);
  int tested = 0;
  while (tested < 60) {
    const auto cell = testing_support::draw_cut_cell(rng, 0.1);
    if (!cell) continue;
    ++tested;
    const CutPolygon& p = cell->polygon;
    const double h = cell->h;
    const Vec2 o = cell->origin;
    const LocalMatrices m = local_matrices(to_reference(p.vertices, o, h), h);
    const Vec2 ra{(p.a.x - o.x) / h, (p.a.y - o.y) / h};
    const Vec2 rb{(p.b.x - o.x) / h, (p.b.y - o.y) / h};
    const BoundaryMatrices bm = boundary_matrices(ra, rb, p.normal, h);
    Eigen::Matrix4d mass;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        mass(i, j) = m.mass[i][j];
        const double rm = oracle::polygon(
            [&](Vec2 q) { return oracle::hat(i, o, h, q) * oracle::hat(j, o, h, q); }, p.vertices);
        const double rs = oracle::polygon(
            [&](Vec2 q) { return dot(oracle::hat_gradient(i, o, h, q), oracle::hat_gradient(j, o, h, q)); },
            p.vertices);
        const double rbm =
            oracle::segment([&](Vec2 q) { return oracle::hat(i, o, h, q) * oracle::hat(j, o, h, q); }, p.a, p.b);
        const double rbf = oracle::segment(
            [&](Vec2 q) { return dot(p.normal, oracle::hat_gradient(j, o, h, q)) * oracle::hat(i, o, h, q); }, p.a,
            p.b);
        CHECK(m.mass[i][j] == doctest::Approx(rm).epsilon(1e-12).scale(h * h * 1e-3));
        CHECK(m.stiffness[i][j] == doctest::Approx(rs).epsilon(1e-12).scale(1e-3));
        CHECK(bm.mass[i][j] == doctest::Approx(rbm).epsilon(1e-12).scale(h * 1e-3));
        CHECK(bm.flux[i][j] == doctest::Approx(rbf).epsilon(1e-12).scale(1e-3));
      }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(mass);
    CHECK(es.eigenvalues().minCoeff() >= -1e-14 * h * h);
  }
}
