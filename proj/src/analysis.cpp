#include "ghostfem/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string>

#include "ghostfem/error.hpp"

namespace ghostfem {

namespace {

struct LocalPoint {
  std::size_t cell;
  double s;
  double t;
};

LocalPoint localize(const GridTopology& grid, Vec2 p) {
  const std::size_t c = grid.locate_cell(p);
  const Vec2 o = grid.cell_origin(c);
  const double h = grid.spacing();
  return {c, (p.x - o.x) / h, (p.y - o.y) / h};
}

}  // namespace

double interpolate(std::span<const double> u, const GridTopology& grid, Vec2 p) {
  const LocalPoint q = localize(grid, p);
  const auto v = grid.cell_vertices(q.cell);
  const double s = q.s;
  const double t = q.t;
  return u[v[0]] * (1 - s) * (1 - t) + u[v[1]] * s * (1 - t) + u[v[2]] * s * t + u[v[3]] * (1 - s) * t;
}

Vec2 interpolate_gradient(std::span<const double> u, const GridTopology& grid, Vec2 p) {
  const LocalPoint q = localize(grid, p);
  const auto v = grid.cell_vertices(q.cell);
  const double h = grid.spacing();
  const double gs = (u[v[1]] - u[v[0]]) * (1 - q.t) + (u[v[2]] - u[v[3]]) * q.t;
  const double gt = (u[v[3]] - u[v[0]]) * (1 - q.s) + (u[v[2]] - u[v[1]]) * q.s;
  return {gs / h, gt / h};
}

bool inside_domain(const GridTopology& grid, const DomainGeometry& geometry, Vec2 p) {
  const std::size_t c = grid.locate_cell(p);
  switch (geometry.cell_labels[c]) {
    case CellLabel::Interior: return true;
    case CellLabel::Exterior: return false;
    case CellLabel::Cut: {
      return geometry.cuts[static_cast<std::size_t>(geometry.cut_index[c])].contains(p);
    }
  }
  return false;
}

ErrorPair l2_errors(std::span<const double> u_h, const Field& exact, const GradientField& exact_gradient,
                    const GridTopology& grid, const DomainGeometry& geometry, const SampleOptions& options) {
  if (u_h.size() != grid.node_count()) throw Error(ErrorCode::InvalidArgument, "one coefficient per node expected");
  const int m = options.per_axis > 0 ? options.per_axis : 3 * grid.subdivisions() + 1;
  const Rect& r = grid.region();
  const double dx = r.width() / m;
  const double dy = r.height() / m;

  struct Sample {
    double e;
    Vec2 ge;
    double u;
    Vec2 gu;
  };
  std::vector<Sample> samples;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const Vec2 p{r.lower.x + (i + 0.5) * dx, r.lower.y + (j + 0.5) * dy};
      if (!inside_domain(grid, geometry, p)) continue;
      const double u = exact(p);
      const Vec2 gu = exact_gradient(p);
      samples.push_back({interpolate(u_h, grid, p) - u, interpolate_gradient(u_h, grid, p) - gu, u, gu});
    }
  }
  if (samples.empty()) throw Error(ErrorCode::EmptySampleSet, "no sample point falls inside the domain");

  double shift = 0.0;
  double exact_mean = 0.0;
  if (options.remove_mean) {
    for (const Sample& s : samples) {
      shift += s.e;
      exact_mean += s.u;
    }
    shift /= static_cast<double>(samples.size());
    exact_mean /= static_cast<double>(samples.size());
  }
  double e2 = 0.0, u2 = 0.0, g2 = 0.0, gu2 = 0.0;
  for (const Sample& s : samples) {
    const double e = s.e - shift;
    const double u = s.u - exact_mean;
    e2 += e * e;
    u2 += u * u;
    g2 += dot(s.ge, s.ge);
    gu2 += dot(s.gu, s.gu);
  }
  const double w = dx * dy;
  ErrorPair out;
  out.samples = samples.size();
  out.error = u2 > 0.0 ? std::sqrt(e2 / u2) : std::sqrt(w * e2);
  out.grad_error = gu2 > 0.0 ? std::sqrt(g2 / gu2) : std::sqrt(w * g2);
  return out;
}

ErrorPair l2_errors_1d(std::span<const double> u_h, const std::function<double(double)>& exact,
                       const std::function<double(double)>& exact_derivative, const Interval1DSetup& setup) {
  if (u_h.size() != static_cast<std::size_t>(setup.N) + 1) {
    throw Error(ErrorCode::InvalidArgument, "one coefficient per node expected");
  }
  static const std::array<double, 5> nodes = {
      -std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0, -std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0, 0.0,
      std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0, std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0};
  static const std::array<double, 5> weights = {
      (322.0 - 13.0 * std::sqrt(70.0)) / 900.0, (322.0 + 13.0 * std::sqrt(70.0)) / 900.0, 128.0 / 225.0,
      (322.0 + 13.0 * std::sqrt(70.0)) / 900.0, (322.0 - 13.0 * std::sqrt(70.0)) / 900.0};
  const double h = setup.h;
  double e2 = 0.0, u2 = 0.0, g2 = 0.0, gu2 = 0.0;
  std::size_t count = 0;
  for (int k = 0; k < setup.N; ++k) {
    const double x0 = k * h;
    const double lo = std::max(x0, setup.a);
    const double hi = std::min(x0 + h, setup.b);
    if (!(hi > lo)) continue;
    const double slope = (u_h[k + 1] - u_h[k]) / h;
    for (int q = 0; q < 5; ++q) {
      const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes[q];
      const double w = 0.5 * (hi - lo) * weights[q];
      const double uh = u_h[k] + slope * (x - x0);
      const double u = exact(x);
      const double du = exact_derivative(x);
      e2 += w * (uh - u) * (uh - u);
      u2 += w * u * u;
      g2 += w * (slope - du) * (slope - du);
      gu2 += w * du * du;
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorCode::EmptySampleSet, "empty interval");
  ErrorPair out;
  out.samples = count;
  out.error = u2 > 0.0 ? std::sqrt(e2 / u2) : std::sqrt(e2);
  out.grad_error = gu2 > 0.0 ? std::sqrt(g2 / gu2) : std::sqrt(g2);
  return out;
}

double fit_order(std::span<const double> h, std::span<const double> values) {
  if (h.size() != values.size()) throw Error(ErrorCode::InvalidArgument, "h and values differ in length");
  std::set<double> distinct;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (!(h[k] > 0.0) || !(values[k] > 0.0) || !std::isfinite(values[k])) {
      throw Error(ErrorCode::InsufficientData, "orders need positive finite h and values");
    }
    distinct.insert(h[k]);
  }
  if (distinct.size() < 2) {
    throw Error(ErrorCode::InsufficientData,
                "a slope needs at least two distinct h, got " + std::to_string(distinct.size()));
  }
  const auto n = static_cast<double>(h.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    sx += std::log(h[k]);
    sy += std::log(values[k]);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double dx = std::log(h[k]) - mx;
    sxy += dx * (std::log(values[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double fit_order(std::span<const ErrorReport> reports, ReportQuantity quantity) {
  std::vector<double> h, v;
  for (const ErrorReport& r : reports) {
    h.push_back(r.h);
    switch (quantity) {
      case ReportQuantity::Error: v.push_back(r.error); break;
      case ReportQuantity::GradError: v.push_back(r.grad_error); break;
      case ReportQuantity::Cond: v.push_back(r.cond); break;
    }
  }
  return fit_order(h, v);
}

}  // namespace ghostfem
