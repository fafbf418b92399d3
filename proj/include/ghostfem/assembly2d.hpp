#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ghostfem/geometry.hpp"
#include "ghostfem/grid.hpp"
#include "ghostfem/linalg.hpp"

namespace ghostfem {

enum class BoundaryKind { Dirichlet, Neumann, Mixed };

/// How g_D and g_N enter the load: sampled at the edge quadrature points, or
/// interpolated from nodal values like f.
enum class BoundaryDataMode { Quadrature, Nodal };

using ScalarField = std::function<double(Vec2)>;
/// Neumann data may depend on the outward normal of the segment it is sampled on.
using FluxField = std::function<double(Vec2 point, Vec2 normal)>;
using Region = std::function<bool(Vec2)>;

struct BVPSpec {
  BoundaryKind bc = BoundaryKind::Dirichlet;
  ScalarField f;
  ScalarField g_D;
  FluxField g_N;
  /// Mixed only: a segment whose midpoint satisfies it belongs to the Dirichlet part.
  Region dirichlet_region;
  BoundaryDataMode data_mode = BoundaryDataMode::Quadrature;
  /// Neumann only: bound on |sum F| / sum |F|; unset selects default_compatibility_tolerance(h).
  std::optional<double> compatibility_tol;
};

/// 1e-8 plus a term quadratic in h; the discrete data only balance to that order.
double default_compatibility_tolerance(double h);

struct Penalty {
  double alpha = 2.0;
  double lambda = 1.0;

  /// lambda = scale h^-alpha.
  static Penalty from_alpha(double h, double alpha, double scale = 1.0);
};

struct AssembledSystem {
  SparseMatrixCSR matrix;
  std::vector<double> rhs;
  std::vector<bool> active;
  /// int_{Omega_h} phi_i; zero on inactive nodes.
  std::vector<double> lumped_mass;
  double lambda = 0.0;
  double alpha = 0.0;
  BoundaryKind bc = BoundaryKind::Dirichlet;
  /// Connected components of the active nodes in the matrix graph; -1 on
  /// inactive nodes. A pure Neumann problem has one constant per component.
  std::vector<int> component;
  int component_count = 0;
  /// Per component: no Dirichlet segment touches it, so its constant is free.
  std::vector<bool> floating;
  /// Largest |sum_i F_i| / sum_i |F_i| over the components.
  double compatibility_residual = 0.0;
  /// Set by apply_neumann_gauge.
  bool gauged = false;

  [[nodiscard]] std::size_t size() const noexcept { return rhs.size(); }
  /// Matrix bordered with the lumped-mass row and column; only meaningful once
  /// gauged, and nonsingular only for a single component.
  [[nodiscard]] SparseMatrixCSR bordered_matrix() const;
  [[nodiscard]] std::vector<double> bordered_rhs() const;
};

/// Cell-by-cell assembly in ascending cell id; inactive nodes get identity rows
/// and zero right-hand side. Throws CompatibilityViolation for Neumann data that
/// do not balance.
AssembledSystem assemble(const BVPSpec& spec, const GridTopology& grid, const DomainGeometry& geometry,
                         const Penalty& penalty);

/// Boundary mass on the Dirichlet part only, (phi_j, phi_i) over Gamma_D.
SparseMatrixCSR assemble_penalty_block(const BVPSpec& spec, const GridTopology& grid, const DomainGeometry& geometry);

/// Fixes the constant kernel of the pure Neumann problem with sum_i m_i u_i = 0
/// on every component.
AssembledSystem apply_neumann_gauge(AssembledSystem system);

struct SolveResult {
  std::vector<double> u;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  /// Lagrange multiplier of the gauge row; zero without gauge. With several
  /// components, the one of component 0.
  double multiplier = 0.0;
  std::vector<double> multipliers;
  /// CG broke down (indefinite matrix) and MINRES was used instead.
  bool used_minres = false;
};

/// CG (MINRES after a breakdown) on the assembled system. On floating components
/// of a gauged Neumann system or of a mixed system, the right-hand side is
/// projected onto the range and the weighted mean removed afterwards.
SolveResult solve(const AssembledSystem& system, const CGOptions& options = {});

}  // namespace ghostfem
