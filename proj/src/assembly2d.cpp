#include "ghostfem/assembly2d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "ghostfem/error.hpp"
#include "ghostfem/quadrature.hpp"

namespace ghostfem {

double default_compatibility_tolerance(double h) { return 1e-8 + 10.0 * h * h; }

Penalty Penalty::from_alpha(double h, double alpha, double scale) {
  if (!(h > 0.0) || !(alpha > 0.0) || !(scale > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "penalty needs h, alpha and scale > 0");
  }
  return {alpha, scale * std::pow(h, -alpha)};
}

namespace {

using Local = std::array<std::array<double, 4>, 4>;

struct CellFrame {
  std::array<std::size_t, 4> ids;
  std::array<Vec2, 4> coords;
  Vec2 origin;
};

CellFrame frame(const GridTopology& grid, std::size_t c) {
  CellFrame f;
  f.ids = grid.cell_vertices(c);
  for (int k = 0; k < 4; ++k) f.coords[k] = grid.node_coord(f.ids[k]);
  f.origin = f.coords[0];
  return f;
}

bool on_dirichlet(const BVPSpec& spec, Vec2 midpoint) {
  switch (spec.bc) {
    case BoundaryKind::Dirichlet: return true;
    case BoundaryKind::Neumann: return false;
    case BoundaryKind::Mixed: return spec.dirichlet_region(midpoint);
  }
  return false;
}

void validate(const BVPSpec& spec) {
  if (!spec.f) throw Error(ErrorCode::InvalidArgument, "source term missing");
  if (spec.bc != BoundaryKind::Neumann && !spec.g_D) throw Error(ErrorCode::InvalidArgument, "Dirichlet data missing");
  if (spec.bc != BoundaryKind::Dirichlet && !spec.g_N) throw Error(ErrorCode::InvalidArgument, "Neumann data missing");
  if (spec.bc == BoundaryKind::Mixed && !spec.dirichlet_region) {
    throw Error(ErrorCode::InvalidArgument, "mixed problem needs a Dirichlet region");
  }
}

int label_components(const SparseMatrixCSR& A, const std::vector<bool>& active, std::vector<int>& label) {
  const std::size_t n = A.size();
  label.assign(n, -1);
  int count = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (!active[s] || label[s] >= 0) continue;
    label[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t r = stack.back();
      stack.pop_back();
      for (std::size_t k = A.row_offsets()[r]; k < A.row_offsets()[r + 1]; ++k) {
        const std::size_t c = A.columns()[k];
        if (active[c] && label[c] < 0 && A.values()[k] != 0.0) {
          label[c] = count;
          stack.push_back(c);
        }
      }
    }
    ++count;
  }
  return count;
}

void check_sizes(const GridTopology& grid, const DomainGeometry& geometry) {
  if (geometry.node_labels.size() != grid.node_count() || geometry.cell_labels.size() != grid.cell_count()) {
    throw Error(ErrorCode::InvalidArgument, "geometry does not belong to this grid");
  }
}

}  // namespace

AssembledSystem assemble(const BVPSpec& spec, const GridTopology& grid, const DomainGeometry& geometry,
                         const Penalty& penalty) {
  validate(spec);
  check_sizes(grid, geometry);
  if (!(penalty.lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "penalty must be positive");
  const double h = grid.spacing();
  const double lambda = penalty.lambda;
  const std::size_t n = grid.node_count();

  AssembledSystem sys;
  sys.rhs.assign(n, 0.0);
  sys.lumped_mass.assign(n, 0.0);
  sys.lambda = lambda;
  sys.alpha = penalty.alpha;
  sys.bc = spec.bc;
  sys.active.resize(n);
  for (std::size_t i = 0; i < n; ++i) sys.active[i] = geometry.is_active(i);

  const std::array<Vec2, 4> unit = {Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 1}, Vec2{0, 1}};
  const LocalMatrices full = local_matrices(unit, h);

  std::vector<bool> dirichlet_node(n, false);
  std::vector<Triplet> triplets;
  triplets.reserve(16 * grid.cell_count() / 2 + n);
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    const CellLabel label = geometry.cell_labels[c];
    if (label == CellLabel::Exterior) continue;
    const CellFrame cf = frame(grid, c);

    LocalMatrices lm = full;
    std::array<double, 4> load{};
    Local K{};
    if (label == CellLabel::Cut) {
      const CutPolygon& poly = geometry.cuts[static_cast<std::size_t>(geometry.cut_index[c])];
      lm = local_matrices(to_reference(poly.vertices, cf.origin, h), h);
      K = lm.stiffness;
      if (!poly.negligible_segment) {
        const Vec2 a = {(poly.a.x - cf.origin.x) / h, (poly.a.y - cf.origin.y) / h};
        const Vec2 b = {(poly.b.x - cf.origin.x) / h, (poly.b.y - cf.origin.y) / h};
        const BoundaryMatrices bm = boundary_matrices(a, b, poly.normal, h);
        const std::array<Vec2, 3> ref_points = edge_points(a, b);
        std::array<Vec2, 3> points{};
        for (int s = 0; s < 3; ++s) points[s] = cf.origin + h * ref_points[s];

        if (on_dirichlet(spec, 0.5 * (poly.a + poly.b))) {
          for (std::size_t id : cf.ids) dirichlet_node[id] = true;
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) K[i][j] += lambda * bm.mass[i][j] - (bm.flux[i][j] + bm.flux[j][i]);
          if (spec.data_mode == BoundaryDataMode::Quadrature) {
            const std::array<double, 3> g = {spec.g_D(points[0]), spec.g_D(points[1]), spec.g_D(points[2])};
            const BoundaryLoad bl = boundary_load(a, b, poly.normal, h, g);
            for (int i = 0; i < 4; ++i) load[i] += lambda * bl.value[i] - bl.flux[i];
          } else {
            for (int j = 0; j < 4; ++j) {
              const double g = spec.g_D(cf.coords[j]);
              for (int i = 0; i < 4; ++i) load[i] += (lambda * bm.mass[i][j] - bm.flux[j][i]) * g;
            }
          }
        } else {
          if (spec.data_mode == BoundaryDataMode::Quadrature) {
            const std::array<double, 3> g = {spec.g_N(points[0], poly.normal), spec.g_N(points[1], poly.normal),
                                             spec.g_N(points[2], poly.normal)};
            const BoundaryLoad bl = boundary_load(a, b, poly.normal, h, g);
            for (int i = 0; i < 4; ++i) load[i] += bl.value[i];
          } else {
            for (int j = 0; j < 4; ++j) {
              const double g = spec.g_N(cf.coords[j], poly.normal);
              for (int i = 0; i < 4; ++i) load[i] += bm.mass[i][j] * g;
            }
          }
        }
      }
    } else {
      K = full.stiffness;
    }

    std::array<double, 4> f{};
    for (int j = 0; j < 4; ++j) f[j] = spec.f(cf.coords[j]);
    for (int i = 0; i < 4; ++i) {
      double mf = 0.0;
      double row = 0.0;
      for (int j = 0; j < 4; ++j) {
        mf += lm.mass[i][j] * f[j];
        row += lm.mass[i][j];
        triplets.push_back({cf.ids[i], cf.ids[j], K[i][j]});
      }
      sys.rhs[cf.ids[i]] += mf + load[i];
      sys.lumped_mass[cf.ids[i]] += row;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (sys.active[i]) continue;
    triplets.push_back({i, i, 1.0});
    sys.rhs[i] = 0.0;
    sys.lumped_mass[i] = 0.0;
  }
  sys.matrix = SparseMatrixCSR::from_triplets(n, triplets);

  sys.component_count = label_components(sys.matrix, sys.active, sys.component);
  sys.floating.assign(static_cast<std::size_t>(sys.component_count), true);
  for (std::size_t i = 0; i < n; ++i)
    if (dirichlet_node[i] && sys.active[i]) sys.floating[static_cast<std::size_t>(sys.component[i])] = false;
  std::vector<double> sum(static_cast<std::size_t>(sys.component_count), 0.0);
  std::vector<double> magnitude(sum.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!sys.active[i]) continue;
    sum[static_cast<std::size_t>(sys.component[i])] += sys.rhs[i];
    magnitude[static_cast<std::size_t>(sys.component[i])] += std::abs(sys.rhs[i]);
  }
  sys.compatibility_residual = 0.0;
  for (std::size_t c = 0; c < sum.size(); ++c)
    if (magnitude[c] > 0.0) sys.compatibility_residual = std::max(sys.compatibility_residual, std::abs(sum[c]) / magnitude[c]);
  if (spec.bc == BoundaryKind::Neumann) {
    const double tol = spec.compatibility_tol.value_or(default_compatibility_tolerance(h));
    if (sys.compatibility_residual > tol) {
      throw Error(ErrorCode::CompatibilityViolation,
                  "Neumann data out of balance: residual " + std::to_string(sys.compatibility_residual) +
                      " exceeds " + std::to_string(tol));
    }
  }
  return sys;
}

SparseMatrixCSR assemble_penalty_block(const BVPSpec& spec, const GridTopology& grid, const DomainGeometry& geometry) {
  check_sizes(grid, geometry);
  if (spec.bc == BoundaryKind::Mixed && !spec.dirichlet_region) {
    throw Error(ErrorCode::InvalidArgument, "mixed problem needs a Dirichlet region");
  }
  const double h = grid.spacing();
  std::vector<Triplet> triplets;
  for (const CutPolygon& poly : geometry.cuts) {
    if (poly.negligible_segment) continue;
    if (!on_dirichlet(spec, 0.5 * (poly.a + poly.b))) continue;
    const CellFrame cf = frame(grid, poly.cell);
    const Vec2 a = {(poly.a.x - cf.origin.x) / h, (poly.a.y - cf.origin.y) / h};
    const Vec2 b = {(poly.b.x - cf.origin.x) / h, (poly.b.y - cf.origin.y) / h};
    const BoundaryMatrices bm = boundary_matrices(a, b, poly.normal, h);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) triplets.push_back({cf.ids[i], cf.ids[j], bm.mass[i][j]});
  }
  return SparseMatrixCSR::from_triplets(grid.node_count(), triplets);
}

AssembledSystem apply_neumann_gauge(AssembledSystem system) {
  if (system.bc != BoundaryKind::Neumann) {
    throw Error(ErrorCode::InvalidArgument, "the mean-value gauge applies to pure Neumann problems");
  }
  system.gauged = true;
  return system;
}

SparseMatrixCSR AssembledSystem::bordered_matrix() const {
  const std::size_t n = matrix.size();
  std::vector<Triplet> t;
  t.reserve(matrix.nonzeros() + 2 * n + 1);
  const auto& off = matrix.row_offsets();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = off[r]; k < off[r + 1]; ++k) t.push_back({r, matrix.columns()[k], matrix.values()[k]});
    if (lumped_mass[r] != 0.0) t.push_back({r, n, lumped_mass[r]});
  }
  for (std::size_t c = 0; c < n; ++c)
    if (lumped_mass[c] != 0.0) t.push_back({n, c, lumped_mass[c]});
  t.push_back({n, n, 0.0});
  return SparseMatrixCSR::from_triplets(n + 1, t);
}

std::vector<double> AssembledSystem::bordered_rhs() const {
  std::vector<double> r = rhs;
  r.push_back(0.0);
  return r;
}

SolveResult solve(const AssembledSystem& system, const CGOptions& options) {
  SolveResult out;
  const std::size_t n = system.size();
  const auto m = static_cast<std::size_t>(system.component_count);
  bool project = system.gauged;
  if (system.bc == BoundaryKind::Mixed && system.floating.size() == m) {
    for (std::size_t c = 0; c < m; ++c) project = project || system.floating[c];
  }
  if (!project) {
    CGResult r = symmetric_solve(system.matrix, system.rhs, options);
    out.u = std::move(r.x);
    out.iterations = r.iterations;
    out.relative_residual = r.relative_residual;
    out.used_minres = r.used_minres;
    return out;
  }
  if (m == 0 || system.component.size() != n) {
    throw Error(ErrorCode::EmptySampleSet, "gauge needs a domain of positive area");
  }
  auto free_constant = [&](std::size_t c) {
    return system.bc == BoundaryKind::Neumann || (system.floating.size() == m && system.floating[c]);
  };
  std::vector<double> mass(m, 0.0), load(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!system.active[i]) continue;
    mass[static_cast<std::size_t>(system.component[i])] += system.lumped_mass[i];
    load[static_cast<std::size_t>(system.component[i])] += system.rhs[i];
  }
  std::vector<double> mu(m, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    if (!free_constant(c)) continue;
    if (!(mass[c] > 0.0)) throw Error(ErrorCode::EmptySampleSet, "gauge needs components of positive area");
    mu[c] = load[c] / mass[c];
  }
  std::vector<double> b(system.rhs);
  for (std::size_t i = 0; i < n; ++i)
    if (system.active[i]) b[i] -= mu[static_cast<std::size_t>(system.component[i])] * system.lumped_mass[i];
  CGResult r = symmetric_solve(system.matrix, b, options);
  std::vector<double> mean(m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (system.active[i]) mean[static_cast<std::size_t>(system.component[i])] += system.lumped_mass[i] * r.x[i];
  for (std::size_t i = 0; i < n; ++i) {
    if (!system.active[i]) continue;
    const auto c = static_cast<std::size_t>(system.component[i]);
    if (free_constant(c)) r.x[i] -= mean[c] / mass[c];
  }
  out.u = std::move(r.x);
  out.iterations = r.iterations;
  out.relative_residual = r.relative_residual;
  out.used_minres = r.used_minres;
  out.multiplier = mu[0];
  out.multipliers = std::move(mu);
  return out;
}

}  // namespace ghostfem
