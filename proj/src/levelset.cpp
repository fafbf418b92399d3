#include "ghostfem/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ghostfem/error.hpp"

namespace ghostfem {

struct Expr::Node {
  Op op;
  double value;
  std::vector<Expr> args;
};

Expr Expr::make(Op op, double value, std::vector<Expr> args) {
  return Expr(std::make_shared<const Node>(Node{op, value, std::move(args)}));
}

Expr Expr::constant(double value) { return make(Op::Const, value, {}); }
Expr Expr::x() { return make(Op::X, 0.0, {}); }
Expr Expr::y() { return make(Op::Y, 0.0, {}); }

Expr operator+(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Add, 0.0, {a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Sub, 0.0, {a, b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Mul, 0.0, {a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Div, 0.0, {a, b}); }
Expr operator-(const Expr& a) { return Expr::make(Expr::Op::Neg, 0.0, {a}); }
Expr sqrt(const Expr& a) { return Expr::make(Expr::Op::Sqrt, 0.0, {a}); }
Expr max(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Max, 0.0, {a, b}); }
Expr min(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Min, 0.0, {a, b}); }
Expr pow(const Expr& a, double exponent) { return Expr::make(Expr::Op::Pow, exponent, {a}); }

double Expr::eval(Vec2 p) const {
  const Node& n = *node_;
  auto arg = [&](std::size_t k) { return n.args[k].eval(p); };
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::X: return p.x;
    case Op::Y: return p.y;
    case Op::Add: return arg(0) + arg(1);
    case Op::Sub: return arg(0) - arg(1);
    case Op::Mul: return arg(0) * arg(1);
    case Op::Div: return arg(0) / arg(1);
    case Op::Neg: return -arg(0);
    case Op::Sqrt: return std::sqrt(arg(0));
    case Op::Max: return std::max(arg(0), arg(1));
    case Op::Min: return std::min(arg(0), arg(1));
    case Op::Pow: {
      const double base = arg(0);
      const double e = n.value;
      // small integer powers by multiplication so negative bases stay real
      if (e == std::floor(e) && std::abs(e) <= 16.0) {
        double r = 1.0;
        for (int k = 0; k < static_cast<int>(std::abs(e)); ++k) r *= base;
        return e < 0 ? 1.0 / r : r;
      }
      return std::pow(base, e);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

// Shift of the flower and hourglass centres away from the grid lines.
const double kShiftX = 0.03 * std::sqrt(3.0);
const double kShiftY = 0.04 * std::sqrt(2.0);

double flower_value(Vec2 p) {
  const double x = p.x - kShiftX;
  const double y = p.y - kShiftY;
  const double r = std::hypot(x, y);
  const double x2 = x * x;
  const double y2 = y * y;
  const double numerator = r - 0.52 - (y2 * y2 * y + 5.0 * x2 * x2 * y - 10.0 * x2 * y2 * y);
  const double r5 = r * r * r * r * r;
  if (r5 == 0.0) {
    // the centre is inside; keep the value finite
    return -std::numeric_limits<double>::max();
  }
  return numerator / (5.0 * r5);
}

double hourglass_value(Vec2 p) {
  const double x = p.x - kShiftX;
  const double y = p.y - kShiftY;
  const double x2 = x * x;
  const double y2 = y * y;
  return 256.0 * y2 * y2 - 16.0 * x2 * x2 - 128.0 * y2 + 36.0 * x2;
}

double leaf_value(Vec2 p) {
  constexpr double r0 = 0.4;
  const double phi1 = std::hypot(p.x - 0.4, p.y - 0.5) - r0;
  const double phi2 = std::hypot(p.x - 0.6, p.y - 0.5) - r0;
  return std::max(phi1, phi2);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double LevelSetField::eval(Vec2 p) const {
  return std::visit(
      Overloaded{
          [&](const Interval1D& s) { return std::max(s.a - p.x, p.x - s.b); },
          [&](const Circle& s) { return std::hypot(p.x - s.xc, p.y - s.yc) - s.r; },
          [&](const Flower&) { return flower_value(p); },
          [&](const Leaf&) { return leaf_value(p); },
          [&](const Hourglass&) { return hourglass_value(p); },
          [&](const Custom& s) { return s.expr.eval(p); },
      },
      kind_);
}

std::string to_string(NodeLabel label) {
  switch (label) {
    case NodeLabel::Interior: return "interior";
    case NodeLabel::Ghost: return "ghost";
    case NodeLabel::Inactive: return "inactive";
  }
  return "unknown";
}

NodeValues sample_nodes(const LevelSetField& field, const GridTopology& grid) {
  NodeValues out;
  out.values.resize(grid.node_count());
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    out.values[k] = field.eval(grid.node_coord(k));
  }
  return out;
}

NodeValues snap_to_grid(NodeValues values, double h, double alpha_snap) {
  if (!(h > 0.0) || !(alpha_snap > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "snapping needs h > 0 and alpha_snap > 0");
  }
  const double threshold = std::pow(h, alpha_snap);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (double& v : values.values) {
    if (v < 0.0 && std::abs(v) < threshold) v = eps;
  }
  values.snapped = true;
  values.alpha_snap = alpha_snap;
  return values;
}

std::vector<NodeLabel> classify_nodes(const NodeValues& values, const GridTopology& grid) {
  if (values.values.size() != grid.node_count()) {
    throw Error(ErrorCode::InvalidArgument, "node value count does not match the grid");
  }
  const int n = grid.subdivisions();
  std::vector<NodeLabel> labels(grid.node_count(), NodeLabel::Inactive);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const std::size_t id = grid.node_id(i, j);
      if (is_inside(values.values[id])) {
        labels[id] = NodeLabel::Interior;
        continue;
      }
      bool touches_interior = false;
      for (int dj = -1; dj <= 1 && !touches_interior; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const int ii = i + di;
          const int jj = j + dj;
          if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii > n || jj > n) continue;
          if (is_inside(values.values[grid.node_id(ii, jj)])) {
            touches_interior = true;
            break;
          }
        }
      }
      if (touches_interior) labels[id] = NodeLabel::Ghost;
    }
  }
  return labels;
}

std::vector<CellLabel> classify_cells(const NodeValues& values, const GridTopology& grid) {
  if (values.values.size() != grid.node_count()) {
    throw Error(ErrorCode::InvalidArgument, "node value count does not match the grid");
  }
  std::vector<CellLabel> labels(grid.cell_count());
  for (std::size_t c = 0; c < labels.size(); ++c) {
    int inside = 0;
    for (std::size_t v : grid.cell_vertices(c)) inside += is_inside(values.values[v]) ? 1 : 0;
    labels[c] = inside == 4 ? CellLabel::Interior : (inside == 0 ? CellLabel::Exterior : CellLabel::Cut);
  }
  return labels;
}

}  // namespace ghostfem
