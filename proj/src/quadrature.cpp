#include "ghostfem/quadrature.hpp"

#include <cmath>
#include <string>

#include "ghostfem/error.hpp"

namespace ghostfem {

int BivariatePolynomial::index(int px, int py) {
  if (px < 0 || py < 0 || px > kMaxDegree || py > kMaxDegree) {
    throw Error(ErrorCode::DegreeTooHigh,
                "monomial x^" + std::to_string(px) + " y^" + std::to_string(py) + " exceeds the degree cap");
  }
  return px * kStride + py;
}

BivariatePolynomial BivariatePolynomial::constant(double c) { return monomial(0, 0, c); }

BivariatePolynomial BivariatePolynomial::monomial(int px, int py, double c) {
  BivariatePolynomial p;
  p.set_coeff(px, py, c);
  return p;
}

double BivariatePolynomial::eval(double x, double y) const noexcept {
  // Horner in x over Horner-in-y rows
  double result = 0.0;
  for (int px = kMaxDegree; px >= 0; --px) {
    double row = 0.0;
    for (int py = kMaxDegree; py >= 0; --py) row = row * y + coeffs_[px * kStride + py];
    result = result * x + row;
  }
  return result;
}

int BivariatePolynomial::degree_x() const noexcept {
  for (int px = kMaxDegree; px >= 0; --px)
    for (int py = 0; py <= kMaxDegree; ++py)
      if (coeffs_[px * kStride + py] != 0.0) return px;
  return -1;
}

int BivariatePolynomial::degree_y() const noexcept {
  for (int py = kMaxDegree; py >= 0; --py)
    for (int px = 0; px <= kMaxDegree; ++px)
      if (coeffs_[px * kStride + py] != 0.0) return py;
  return -1;
}

int BivariatePolynomial::total_degree() const noexcept {
  int d = -1;
  for (int px = 0; px <= kMaxDegree; ++px)
    for (int py = 0; py <= kMaxDegree; ++py)
      if (coeffs_[px * kStride + py] != 0.0 && px + py > d) d = px + py;
  return d;
}

BivariatePolynomial BivariatePolynomial::primitive_x() const {
  if (degree_x() >= kMaxDegree) {
    throw Error(ErrorCode::DegreeTooHigh, "x-primitive would exceed degree 5 in x");
  }
  BivariatePolynomial out;
  for (int px = 0; px < kMaxDegree; ++px)
    for (int py = 0; py <= kMaxDegree; ++py)
      out.coeffs_[(px + 1) * kStride + py] = coeffs_[px * kStride + py] / (px + 1);
  return out;
}

BivariatePolynomial BivariatePolynomial::derivative_x() const {
  BivariatePolynomial out;
  for (int px = 1; px <= kMaxDegree; ++px)
    for (int py = 0; py <= kMaxDegree; ++py)
      out.coeffs_[(px - 1) * kStride + py] = px * coeffs_[px * kStride + py];
  return out;
}

BivariatePolynomial BivariatePolynomial::derivative_y() const {
  BivariatePolynomial out;
  for (int px = 0; px <= kMaxDegree; ++px)
    for (int py = 1; py <= kMaxDegree; ++py)
      out.coeffs_[px * kStride + py - 1] = py * coeffs_[px * kStride + py];
  return out;
}

BivariatePolynomial& BivariatePolynomial::operator+=(const BivariatePolynomial& o) noexcept {
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

BivariatePolynomial& BivariatePolynomial::operator-=(const BivariatePolynomial& o) noexcept {
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

BivariatePolynomial& BivariatePolynomial::operator*=(double s) noexcept {
  for (double& c : coeffs_) c *= s;
  return *this;
}

BivariatePolynomial operator*(const BivariatePolynomial& a, const BivariatePolynomial& b) {
  const int ax = a.degree_x();
  const int bx = b.degree_x();
  if (ax < 0 || bx < 0) return {};
  if (ax + bx > BivariatePolynomial::kMaxDegree || a.degree_y() + b.degree_y() > BivariatePolynomial::kMaxDegree) {
    throw Error(ErrorCode::DegreeTooHigh, "product exceeds degree 5 in a variable");
  }
  BivariatePolynomial out;
  constexpr int S = BivariatePolynomial::kStride;
  for (int i = 0; i <= ax; ++i)
    for (int j = 0; j <= BivariatePolynomial::kMaxDegree; ++j) {
      const double ca = a.coeffs_[i * S + j];
      if (ca == 0.0) continue;
      for (int k = 0; k <= bx; ++k)
        for (int l = 0; l + j <= BivariatePolynomial::kMaxDegree; ++l)
          out.coeffs_[(i + k) * S + j + l] += ca * b.coeffs_[k * S + l];
    }
  return out;
}

const std::array<double, 3> EdgeRule::nodes = {
    (1.0 - std::sqrt(3.0 / 5.0)) / 2.0,
    0.5,
    (1.0 + std::sqrt(3.0 / 5.0)) / 2.0,
};
const std::array<double, 3> EdgeRule::weights = {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0};

double gauss3_segment(const BivariatePolynomial& F, Vec2 p0, Vec2 p1) {
  const Vec2 d = p1 - p0;
  if (d.y == 0.0) return 0.0;
  double sum = 0.0;
  for (int s = 0; s < 3; ++s) sum += EdgeRule::weights[s] * F.eval(p0 + EdgeRule::nodes[s] * d);
  return sum * d.y;
}

double polygon_integral(const BivariatePolynomial& f, std::span<const Vec2> vertices) {
  if (f.total_degree() > 4) {
    throw Error(ErrorCode::DegreeTooHigh, "integrand total degree exceeds 4; the edge rule is exact through 5");
  }
  const BivariatePolynomial F = f.primitive_x();
  double sum = 0.0;
  const std::size_t m = vertices.size();
  for (std::size_t r = 0; r < m; ++r) sum += gauss3_segment(F, vertices[r], vertices[(r + 1) % m]);
  return sum;
}

namespace {

struct ReferenceTables {
  std::array<BivariatePolynomial, 4> basis;
  std::array<std::array<double, 2>, 4> grad_x;  // d/dx phi_k = grad_x[k][0] + grad_x[k][1] * y
  std::array<std::array<double, 2>, 4> grad_y;  // d/dy phi_k = grad_y[k][0] + grad_y[k][1] * x
  // x-primitives of phi_i phi_j and grad phi_i . grad phi_j, upper triangle
  std::array<std::array<BivariatePolynomial, 4>, 4> mass_primitive;
  std::array<std::array<BivariatePolynomial, 4>, 4> stiff_primitive;

  ReferenceTables() {
    using P = BivariatePolynomial;
    const P one = P::constant(1.0);
    const P x = P::monomial(1, 0);
    const P y = P::monomial(0, 1);
    basis = {(one - x) * (one - y), x * (one - y), x * y, (one - x) * y};
    grad_x = {{{-1.0, 1.0}, {1.0, -1.0}, {0.0, 1.0}, {0.0, -1.0}}};
    grad_y = {{{-1.0, 1.0}, {0.0, -1.0}, {0.0, 1.0}, {1.0, -1.0}}};
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) {
        mass_primitive[i][j] = (basis[i] * basis[j]).primitive_x();
        const P g = basis[i].derivative_x() * basis[j].derivative_x() +
                    basis[i].derivative_y() * basis[j].derivative_y();
        stiff_primitive[i][j] = g.primitive_x();
      }
    }
  }
};

const ReferenceTables& tables() {
  static const ReferenceTables t;
  return t;
}

void check_index(int i) {
  if (i < 0 || i > 3) throw Error(ErrorCode::OutOfRange, "local basis index " + std::to_string(i));
}

}  // namespace

const BivariatePolynomial& reference_basis(int k) {
  check_index(k);
  return tables().basis[k];
}

LocalMatrices local_matrices(std::span<const Vec2> reference_vertices, double h) {
  const ReferenceTables& t = tables();
  LocalMatrices out;
  const std::size_t m = reference_vertices.size();
  for (std::size_t r = 0; r < m; ++r) {
    const Vec2 p0 = reference_vertices[r];
    const Vec2 p1 = reference_vertices[(r + 1) % m];
    const Vec2 d = p1 - p0;
    if (d.y == 0.0) continue;
    for (int s = 0; s < 3; ++s) {
      const Vec2 q = p0 + EdgeRule::nodes[s] * d;
      const double w = EdgeRule::weights[s] * d.y;
      for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
          out.mass[i][j] += w * t.mass_primitive[i][j].eval(q);
          out.stiffness[i][j] += w * t.stiff_primitive[i][j].eval(q);
        }
      }
    }
  }
  const double area_scale = h * h;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      out.mass[i][j] *= area_scale;
      out.mass[j][i] = out.mass[i][j];
      out.stiffness[j][i] = out.stiffness[i][j];
    }
  }
  return out;
}

double local_mass(std::span<const Vec2> reference_vertices, int i, int j, double h) {
  check_index(i);
  check_index(j);
  return h * h * polygon_integral(tables().basis[i] * tables().basis[j], reference_vertices);
}

double local_stiffness(std::span<const Vec2> reference_vertices, int i, int j, double /*h*/) {
  check_index(i);
  check_index(j);
  const auto& b = tables().basis;
  const BivariatePolynomial g =
      b[i].derivative_x() * b[j].derivative_x() + b[i].derivative_y() * b[j].derivative_y();
  return polygon_integral(g, reference_vertices);
}

BoundaryMatrices boundary_matrices(Vec2 a, Vec2 b, Vec2 normal, double h) {
  const Vec2 d = b - a;
  const double ref_length = norm(d);
  if (ref_length < 1e-14) {
    throw Error(ErrorCode::ZeroLengthSegment, "boundary segment shorter than 1e-14 h");
  }
  const ReferenceTables& t = tables();
  const double length = h * ref_length;
  BoundaryMatrices out;
  for (int s = 0; s < 3; ++s) {
    const Vec2 q = a + EdgeRule::nodes[s] * d;
    const double w = EdgeRule::weights[s] * length;
    std::array<double, 4> value{};
    std::array<double, 4> dn{};
    for (int k = 0; k < 4; ++k) {
      value[k] = t.basis[k].eval(q);
      const double gx = t.grad_x[k][0] + t.grad_x[k][1] * q.y;
      const double gy = t.grad_y[k][0] + t.grad_y[k][1] * q.x;
      dn[k] = (normal.x * gx + normal.y * gy) / h;
    }
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        out.mass[i][j] += w * value[i] * value[j];
        out.flux[i][j] += w * dn[j] * value[i];
      }
    }
  }
  return out;
}

std::array<Vec2, 3> edge_points(Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  return {a + EdgeRule::nodes[0] * d, a + EdgeRule::nodes[1] * d, a + EdgeRule::nodes[2] * d};
}

BoundaryLoad boundary_load(Vec2 a, Vec2 b, Vec2 normal, double h, std::span<const double, 3> g) {
  const double ref_length = norm(b - a);
  if (ref_length < 1e-14) {
    throw Error(ErrorCode::ZeroLengthSegment, "boundary segment shorter than 1e-14 h");
  }
  const ReferenceTables& t = tables();
  const double length = h * ref_length;
  const std::array<Vec2, 3> q = edge_points(a, b);
  BoundaryLoad out;
  for (int s = 0; s < 3; ++s) {
    const double w = EdgeRule::weights[s] * length * g[s];
    for (int k = 0; k < 4; ++k) {
      const double gx = t.grad_x[k][0] + t.grad_x[k][1] * q[s].y;
      const double gy = t.grad_y[k][0] + t.grad_y[k][1] * q[s].x;
      out.value[k] += w * t.basis[k].eval(q[s]);
      out.flux[k] += w * (normal.x * gx + normal.y * gy) / h;
    }
  }
  return out;
}

BoundaryProducts boundary_products(Vec2 a, Vec2 b, Vec2 normal, int i, int j, double h) {
  check_index(i);
  check_index(j);
  const BoundaryMatrices m = boundary_matrices(a, b, normal, h);
  return {m.mass[i][j], m.flux[i][j], m.flux[j][i]};
}

}  // namespace ghostfem
