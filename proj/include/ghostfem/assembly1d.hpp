#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ghostfem/linalg.hpp"

namespace ghostfem {

/// Interval [a, b] embedded in the grid x_i = i h of [0, 1], h = 1 / N.
struct Interval1DSetup {
  int N = 0;
  double h = 0.0;
  double a = 0.0;
  double b = 1.0;
  double theta1 = 1.0;  ///< 1 - a / h
  double theta2 = 1.0;  ///< 1 - (1 - b) / h
  double lambda = 1.0;

  /// Throws InvalidTheta unless a in [0, h] and b in [1 - h, 1].
  static Interval1DSetup from_endpoints(int N, double a, double b, double lambda);
  /// Throws InvalidTheta unless both parameters lie in [0, 1].
  static Interval1DSetup from_theta(int N, double theta1, double theta2, double lambda);
};

/// Moves an end whose first inside node lies closer than h^alpha_snap to it
/// onto that node (theta = 0), which turns the node into a ghost.
Interval1DSetup snap_interval(const Interval1DSetup& setup, double alpha_snap);

/// Square tridiagonal matrix; lower[i] = A(i, i-1), upper[i] = A(i, i+1).
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}

  [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }
  /// Zero outside the band.
  [[nodiscard]] double at(std::size_t i, std::size_t j) const;
  void add(std::size_t i, std::size_t j, double v);
  [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;
  [[nodiscard]] SparseMatrixCSR to_csr() const;

  Tridiagonal& operator+=(const Tridiagonal& o);
  Tridiagonal& axpy(double s, const Tridiagonal& o);
};

/// Building blocks of the 1D systems, each (N + 1) x (N + 1).
struct Blocks1D {
  Tridiagonal S;     ///< (phi_j', phi_i') on [a, b]
  Tridiagonal S_Ta;  ///< phi_j'(a) phi_i(a) + phi_j(a) phi_i'(a)
  Tridiagonal S_Tb;  ///< -phi_j'(b) phi_i(b) - phi_j(b) phi_i'(b)
  Tridiagonal M;     ///< (phi_j, phi_i) on [a, b]
  Tridiagonal P_a;   ///< phi_j(a) phi_i(a)
  Tridiagonal P_b;   ///< phi_j(b) phi_i(b)
  Tridiagonal D_a;   ///< phi_j(a) phi_i'(a)
  Tridiagonal D_b;   ///< -phi_j(b) phi_i'(b)
  Tridiagonal N_b;   ///< phi_j(b) phi_i(b)

  [[nodiscard]] Tridiagonal S_T() const;
};

/// Exact integrals on the clipped cells; traces use one-sided derivatives from
/// inside [a, b].
Blocks1D build_blocks_1d(const Interval1DSetup& setup);

struct System1D {
  Tridiagonal A;
  std::vector<double> rhs;
  std::vector<bool> active;
  double lambda = 0.0;
};

/// Nodes strictly inside (a, b) plus their direct neighbours.
std::vector<bool> active_nodes_1d(const Interval1DSetup& setup);

/// A = S + S_T + lambda (P_a + P_b); F = M f + (D_a + lambda P_a) u_a + (D_b + lambda P_b) u_b.
System1D assemble_dirichlet_1d(const Interval1DSetup& setup, std::span<const double> f, double u_a, double u_b);

/// A = S + S_Ta + lambda P_a; F = M f + (D_a + lambda P_a) u_a + N_b g_b.
System1D assemble_mixed_1d(const Interval1DSetup& setup, std::span<const double> f, double u_a, double g_b);

std::vector<double> solve_1d(const System1D& system);

/// 2-norm condition number of the active block.
CondEstimate cond_estimate_1d(const System1D& system, const CondOptions& options = {});

}  // namespace ghostfem
