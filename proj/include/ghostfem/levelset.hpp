#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ghostfem/grid.hpp"
#include "ghostfem/vec2.hpp"

namespace ghostfem {

/// Expression tree over x, y used for custom level sets.
class Expr {
 public:
  enum class Op { Const, X, Y, Add, Sub, Mul, Div, Neg, Sqrt, Max, Min, Pow };

  static Expr constant(double value);
  static Expr x();
  static Expr y();

  Expr(double value) : Expr(constant(value)) {}  // NOLINT(google-explicit-constructor)

  [[nodiscard]] double eval(Vec2 p) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr sqrt(const Expr& a);
  friend Expr max(const Expr& a, const Expr& b);
  friend Expr min(const Expr& a, const Expr& b);
  friend Expr pow(const Expr& a, double exponent);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Op op, double value, std::vector<Expr> args);

  std::shared_ptr<const Node> node_;
};

/// Implicit geometry; negative strictly inside the domain, positive outside.
class LevelSetField {
 public:
  struct Interval1D {
    double a;
    double b;
  };
  struct Circle {
    double xc;
    double yc;
    double r;
  };
  struct Flower {};
  struct Leaf {};
  struct Hourglass {};
  struct Custom {
    Expr expr;
  };
  using Kind = std::variant<Interval1D, Circle, Flower, Leaf, Hourglass, Custom>;

  explicit LevelSetField(Kind kind) : kind_(std::move(kind)) {}

  static LevelSetField interval(double a, double b) { return LevelSetField(Interval1D{a, b}); }
  static LevelSetField circle(double xc, double yc, double r) { return LevelSetField(Circle{xc, yc, r}); }
  static LevelSetField flower() { return LevelSetField(Flower{}); }
  static LevelSetField leaf() { return LevelSetField(Leaf{}); }
  static LevelSetField hourglass() { return LevelSetField(Hourglass{}); }
  static LevelSetField custom(Expr expr) { return LevelSetField(Custom{std::move(expr)}); }

  /// Interval1D ignores the y coordinate.
  [[nodiscard]] double eval(Vec2 p) const;
  [[nodiscard]] const Kind& kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct NodeValues {
  std::vector<double> values;
  bool snapped = false;
  double alpha_snap = 0.0;
};

enum class NodeLabel { Interior, Ghost, Inactive };
enum class CellLabel { Interior, Cut, Exterior };

std::string to_string(NodeLabel label);

/// phi < 0 is inside; an exact zero counts as outside.
constexpr bool is_inside(double phi) noexcept { return phi < 0.0; }

NodeValues sample_nodes(const LevelSetField& field, const GridTopology& grid);

/// Every node with -h^alpha_snap < phi < 0 is moved to +machine epsilon.
NodeValues snap_to_grid(NodeValues values, double h, double alpha_snap);

std::vector<NodeLabel> classify_nodes(const NodeValues& values, const GridTopology& grid);
std::vector<CellLabel> classify_cells(const NodeValues& values, const GridTopology& grid);

}  // namespace ghostfem
