#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ghostfem/assembly1d.hpp"
#include "ghostfem/geometry.hpp"
#include "ghostfem/grid.hpp"

namespace ghostfem {

using Field = std::function<double(Vec2)>;
using GradientField = std::function<Vec2(Vec2)>;

struct ErrorReport {
  int N = 0;
  double h = 0.0;
  double error = 0.0;
  double grad_error = 0.0;
  double cond = 0.0;
  std::size_t iterations = 0;
  double seconds = 0.0;
};

struct ErrorPair {
  double error = 0.0;
  double grad_error = 0.0;
  std::size_t samples = 0;
};

struct SampleOptions {
  /// Midpoint cells per axis over the grid region; 0 selects 3N + 1.
  int per_axis = 0;
  /// Compare up to a constant (pure Neumann problems).
  bool remove_mean = false;
};

/// Relative L2 norms of u_h - u and grad u_h - grad u by the midpoint rule on
/// the samples lying in Omega_h (interior cells, and the cut polygon inside cut
/// cells). A vanishing exact norm leaves the absolute value.
ErrorPair l2_errors(std::span<const double> u_h, const Field& exact, const GradientField& exact_gradient,
                    const GridTopology& grid, const DomainGeometry& geometry, const SampleOptions& options = {});

/// Bilinear interpolant of nodal values and its gradient at p.
double interpolate(std::span<const double> u, const GridTopology& grid, Vec2 p);
Vec2 interpolate_gradient(std::span<const double> u, const GridTopology& grid, Vec2 p);

/// Point test against the cut polygon of its cell (closed on the boundary segment).
bool inside_domain(const GridTopology& grid, const DomainGeometry& geometry, Vec2 p);

/// 1D counterpart on [a, b] of the setup, with five-point Gauss rules per cell.
ErrorPair l2_errors_1d(std::span<const double> u_h, const std::function<double(double)>& exact,
                       const std::function<double(double)>& exact_derivative, const Interval1DSetup& setup);

/// Least-squares slope of log(value) against log(h). Needs two distinct h and
/// positive values; throws InsufficientData otherwise.
double fit_order(std::span<const double> h, std::span<const double> values);

enum class ReportQuantity { Error, GradError, Cond };
double fit_order(std::span<const ErrorReport> reports, ReportQuantity quantity = ReportQuantity::Error);

}  // namespace ghostfem
