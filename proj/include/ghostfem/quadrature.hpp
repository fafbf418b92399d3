#pragma once

#include <array>
#include <span>

#include "ghostfem/vec2.hpp"

namespace ghostfem {

/// Polynomial sum c[p][q] x^p y^q with at most degree 5 in each variable.
///
/// Arithmetic that would exceed the cap throws DegreeTooHigh instead of
/// truncating.
class BivariatePolynomial {
 public:
  static constexpr int kMaxDegree = 5;
  static constexpr int kStride = kMaxDegree + 1;

  BivariatePolynomial() { coeffs_.fill(0.0); }

  static BivariatePolynomial constant(double c);
  static BivariatePolynomial monomial(int px, int py, double c = 1.0);

  [[nodiscard]] double coeff(int px, int py) const { return coeffs_[index(px, py)]; }
  void set_coeff(int px, int py, double value) { coeffs_[index(px, py)] = value; }

  [[nodiscard]] double eval(double x, double y) const noexcept;
  [[nodiscard]] double eval(Vec2 p) const noexcept { return eval(p.x, p.y); }

  /// -1 for the zero polynomial.
  [[nodiscard]] int degree_x() const noexcept;
  [[nodiscard]] int degree_y() const noexcept;
  [[nodiscard]] int total_degree() const noexcept;

  /// Primitive in x vanishing on x = 0.
  [[nodiscard]] BivariatePolynomial primitive_x() const;
  [[nodiscard]] BivariatePolynomial derivative_x() const;
  [[nodiscard]] BivariatePolynomial derivative_y() const;

  BivariatePolynomial& operator+=(const BivariatePolynomial& o) noexcept;
  BivariatePolynomial& operator-=(const BivariatePolynomial& o) noexcept;
  BivariatePolynomial& operator*=(double s) noexcept;

  friend BivariatePolynomial operator+(BivariatePolynomial a, const BivariatePolynomial& b) noexcept {
    return a += b;
  }
  friend BivariatePolynomial operator-(BivariatePolynomial a, const BivariatePolynomial& b) noexcept {
    return a -= b;
  }
  friend BivariatePolynomial operator*(BivariatePolynomial a, double s) noexcept { return a *= s; }
  friend BivariatePolynomial operator*(double s, BivariatePolynomial a) noexcept { return a *= s; }
  friend BivariatePolynomial operator*(const BivariatePolynomial& a, const BivariatePolynomial& b);

 private:
  static int index(int px, int py);
  std::array<double, kStride * kStride> coeffs_;
};

/// Three-point Gauss-Legendre rule on [0, 1]; exact through degree 5.
struct EdgeRule {
  static const std::array<double, 3> nodes;
  static const std::array<double, 3> weights;
};

/// Integral of F dy along the straight segment p0 -> p1.
double gauss3_segment(const BivariatePolynomial& F, Vec2 p0, Vec2 p1);

/// Integral of f over a simple polygon (vertices in order, either orientation
/// gives the signed result) via the divergence theorem with the x-primitive.
double polygon_integral(const BivariatePolynomial& f, std::span<const Vec2> vertices);

/// Bilinear hat of local vertex k (0 ll, 1 lr, 2 ur, 3 ul) on the unit reference cell.
const BivariatePolynomial& reference_basis(int k);

/// 4x4 local matrices of a (possibly cut) cell.
///
/// Vertices are in reference coordinates of the unit cell, counterclockwise.
/// Mass is scaled to physical size h; stiffness is scale free in 2D.
struct LocalMatrices {
  std::array<std::array<double, 4>, 4> mass{};
  std::array<std::array<double, 4>, 4> stiffness{};
};
LocalMatrices local_matrices(std::span<const Vec2> reference_vertices, double h);

double local_mass(std::span<const Vec2> reference_vertices, int i, int j, double h);
double local_stiffness(std::span<const Vec2> reference_vertices, int i, int j, double h);

struct BoundaryProducts {
  double mass = 0.0;      ///< int phi_i phi_j dl
  double flux = 0.0;      ///< int (n . grad phi_j) phi_i dl
  double symflux = 0.0;   ///< int (n . grad phi_i) phi_j dl
};

/// Products of bilinear hats along the segment a -> b (reference coordinates)
/// with arc-length measure in physical units; `normal` is the physical unit normal.
BoundaryProducts boundary_products(Vec2 a, Vec2 b, Vec2 normal, int i, int j, double h);

/// All 16 products at once, indexed [i][j].
struct BoundaryMatrices {
  std::array<std::array<double, 4>, 4> mass{};
  std::array<std::array<double, 4>, 4> flux{};
};
BoundaryMatrices boundary_matrices(Vec2 a, Vec2 b, Vec2 normal, double h);

/// Reference points of the edge rule on the segment a -> b.
std::array<Vec2, 3> edge_points(Vec2 a, Vec2 b);

/// Loads int g phi_i dl and int g (n . grad phi_i) dl for data g sampled at edge_points(a, b).
struct BoundaryLoad {
  std::array<double, 4> value{};
  std::array<double, 4> flux{};
};
BoundaryLoad boundary_load(Vec2 a, Vec2 b, Vec2 normal, double h, std::span<const double, 3> g);

}  // namespace ghostfem
