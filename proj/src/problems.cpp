#include "ghostfem/problems.hpp"

#include <cmath>
#include <numbers>

#include "ghostfem/error.hpp"

namespace ghostfem {

namespace {

Rect unit_square() { return {{0.0, 0.0}, {1.0, 1.0}}; }
Rect centred_square() { return {{-1.0, -1.0}, {1.0, 1.0}}; }

Region left_of(double x0) {
  return [x0](Vec2 p) { return p.x <= x0; };
}

}  // namespace

bool is_domain_name(std::string_view name) {
  return name == "circle" || name == "flower" || name == "leaf" || name == "hourglass";
}

Domain2D make_domain(std::string_view name, std::optional<Vec2> circle_centre) {
  if (name == "circle") {
    const Vec2 c = circle_centre.value_or(Vec2{0.5, 0.5});
    return {"circle", LevelSetField::circle(c.x, c.y, kCircleRadius), unit_square(), left_of(0.5)};
  }
  if (name == "flower") return {"flower", LevelSetField::flower(), centred_square(), left_of(0.0)};
  if (name == "leaf") return {"leaf", LevelSetField::leaf(), unit_square(), left_of(0.5)};
  if (name == "hourglass") return {"hourglass", LevelSetField::hourglass(), centred_square(), left_of(0.0)};
  throw Error(ErrorCode::InvalidArgument, "unknown domain '" + std::string(name) + "'");
}

BoundaryKind parse_boundary_kind(std::string_view name) {
  if (name == "dirichlet") return BoundaryKind::Dirichlet;
  if (name == "neumann") return BoundaryKind::Neumann;
  if (name == "mixed") return BoundaryKind::Mixed;
  throw Error(ErrorCode::InvalidArgument, "unknown boundary condition '" + std::string(name) + "'");
}

std::string_view to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::Dirichlet: return "dirichlet";
    case BoundaryKind::Neumann: return "neumann";
    case BoundaryKind::Mixed: return "mixed";
  }
  return "unknown";
}

namespace manufactured2d {

constexpr double k = 2.0 * std::numbers::pi;

double u(Vec2 p) { return std::cos(k * p.x) * std::cos(k * p.y); }

Vec2 grad(Vec2 p) {
  return {-k * std::sin(k * p.x) * std::cos(k * p.y), -k * std::cos(k * p.x) * std::sin(k * p.y)};
}

double f(Vec2 p) { return 2.0 * k * k * u(p); }

}  // namespace manufactured2d

namespace manufactured1d {

double u(double x) { return std::sin(5.0 * x + 1.0); }
double du(double x) { return 5.0 * std::cos(5.0 * x + 1.0); }
double f(double x) { return 25.0 * std::sin(5.0 * x + 1.0); }

}  // namespace manufactured1d

BVPSpec manufactured_problem(BoundaryKind kind, const Domain2D& domain) {
  BVPSpec spec;
  spec.bc = kind;
  spec.f = manufactured2d::f;
  spec.g_D = manufactured2d::u;
  spec.g_N = [](Vec2 p, Vec2 n) { return dot(manufactured2d::grad(p), n); };
  spec.dirichlet_region = domain.dirichlet_region;
  return spec;
}

}  // namespace ghostfem
