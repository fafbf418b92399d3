#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "ghostfem/analysis.hpp"
#include "ghostfem/assembly2d.hpp"
#include "ghostfem/levelset.hpp"

namespace ghostfem {

/// Built-in 2D test domain with its bounding square and mixed-boundary split.
struct Domain2D {
  std::string name;
  LevelSetField field;
  Rect region;
  /// Points of the boundary that carry Dirichlet data in mixed problems.
  Region dirichlet_region;
};

inline constexpr double kCircleRadius = 0.4;

/// "circle", "flower", "leaf" or "hourglass"; the circle centre defaults to (0.5, 0.5).
/// Throws InvalidArgument for other names.
Domain2D make_domain(std::string_view name, std::optional<Vec2> circle_centre = std::nullopt);

bool is_domain_name(std::string_view name);

BoundaryKind parse_boundary_kind(std::string_view name);
std::string_view to_string(BoundaryKind kind);

/// u = cos(2 pi x) cos(2 pi y), f = -laplace u.
namespace manufactured2d {
double u(Vec2 p);
Vec2 grad(Vec2 p);
double f(Vec2 p);
}  // namespace manufactured2d

/// u = sin(5 x + 1), f = -u''.
namespace manufactured1d {
double u(double x);
double du(double x);
double f(double x);
}  // namespace manufactured1d

/// Poisson problem on `domain` with the 2D manufactured solution as data.
BVPSpec manufactured_problem(BoundaryKind kind, const Domain2D& domain);

}  // namespace ghostfem
