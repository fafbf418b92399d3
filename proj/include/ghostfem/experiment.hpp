#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ghostfem/analysis.hpp"
#include "ghostfem/assembly1d.hpp"
#include "ghostfem/assembly2d.hpp"
#include "ghostfem/geometry.hpp"
#include "ghostfem/problems.hpp"

namespace ghostfem {

enum class CondMode { All, First, None };

struct Run2DSettings {
  std::string domain = "circle";
  BoundaryKind bc = BoundaryKind::Dirichlet;
  int N = 40;
  double alpha = 2.0;
  /// Unset: same as alpha.
  std::optional<double> alpha_snap;
  bool snap = true;
  std::optional<Vec2> circle_centre;
  BoundaryDataMode data_mode = BoundaryDataMode::Quadrature;
  bool compute_cond = false;
  /// Inverse iteration only; cheaper than the full condition estimate.
  bool compute_lambda_min = false;
  double penalty_scale = 1.0;
  CGOptions cg;
  CondOptions cond;
};

struct Run2DResult {
  GridTopology grid{Rect{{0, 0}, {1, 1}}, 1};
  DomainGeometry geometry;
  std::vector<double> u;
  ErrorPair errors;
  double cond = 0.0;
  double lambda_min = 0.0;
  std::size_t iterations = 0;
  bool used_minres = false;
  /// Message of a failed condition or eigenvalue estimate; cond and lambda_min are nan then.
  std::string cond_failure;
  double symmetry_defect = 0.0;
  std::size_t active = 0;
  AssembledSystem system;
  double seconds = 0.0;
};

Run2DResult run_2d(const Run2DSettings& settings);

struct Run1DSettings {
  BoundaryKind bc = BoundaryKind::Mixed;
  int N = 20;
  double theta1 = 0.5;
  double theta2 = 1e-3;
  double alpha = 2.0;
  std::optional<double> alpha_snap;
  bool snap = true;
  bool compute_cond = false;
  CondOptions cond;
};

struct Run1DResult {
  Interval1DSetup setup;
  System1D system;
  std::vector<double> u;
  ErrorPair errors;
  double cond = 0.0;
  double lambda_min = 0.0;
  double symmetry_defect = 0.0;
  double seconds = 0.0;
};

/// Manufactured 1D problem on [a, b]; only Dirichlet and mixed conditions exist in 1D.
Run1DResult run_1d(const Run1DSettings& settings);

/// Per-sample offsets (e1, e2) in [0, 1): the sample-s circle on grid N is centred at
/// (0.5 + e1 / N, 0.5 + e2 / N).
std::vector<std::pair<double, double>> circle_offsets(std::uint64_t seed, int samples);
Vec2 circle_centre(std::pair<double, double> offset, int N);

/// theta1 = 0.0010, 0.0015, ..., 0.9900.
std::vector<double> default_theta1_grid();

struct ExperimentConfig {
  std::string command = "convergence";
  std::string domain = "circle";
  BoundaryKind bc = BoundaryKind::Dirichlet;
  std::vector<int> Ns = {20, 40, 80, 160, 320};
  std::vector<double> alphas = {2.0};
  std::optional<double> alpha_snap;
  int samples = 1;
  std::uint64_t seed = 42;
  double tol = 1e-10;
  CondMode cond = CondMode::First;
  std::vector<double> theta1 = {};
  double theta2 = 1e-3;
};

struct ExperimentOutput {
  std::string csv;
  /// At least one run failed; its row was skipped and a diagnostic written.
  bool failed = false;
};

inline constexpr const char* kCsvHeader = "command,domain,bc,N,h,alpha,alpha_snap,seed,sample,error,grad_error,cond,iters";

/// Throws InvalidArgument for an unusable configuration; numeric failures of
/// single runs are reported on `diagnostics` and flagged in the output.
ExperimentOutput run_convergence(const ExperimentConfig& config, std::ostream& diagnostics);
ExperimentOutput run_sweep1d(const ExperimentConfig& config, std::ostream& diagnostics);
/// Per-node CSV "node,x,y,u,label" for the first N and alpha of the configuration.
ExperimentOutput run_solve(const ExperimentConfig& config, std::ostream& diagnostics);

void validate(const ExperimentConfig& config);

}  // namespace ghostfem
