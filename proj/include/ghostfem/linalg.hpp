#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ghostfem {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix with sorted, unique column indices per row.
class SparseMatrixCSR {
 public:
  SparseMatrixCSR() = default;

  /// Duplicates are summed in their insertion order, so a fixed triplet
  /// sequence always yields bit-identical values.
  static SparseMatrixCSR from_triplets(std::size_t n, std::span<const Triplet> triplets);
  static SparseMatrixCSR identity(std::size_t n);

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] std::size_t nonzeros() const noexcept { return values_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& row_offsets() const noexcept { return offsets_; }
  [[nodiscard]] const std::vector<std::size_t>& columns() const noexcept { return columns_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

  /// Zero for entries outside the pattern.
  [[nodiscard]] double at(std::size_t row, std::size_t col) const;
  [[nodiscard]] std::vector<double> diagonal() const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  [[nodiscard]] std::vector<double> operator*(std::span<const double> x) const;

  [[nodiscard]] double frobenius_norm() const;
  /// ||A - A^T||_F / ||A||_F.
  [[nodiscard]] double symmetry_defect() const;
  /// Row-major dense copy.
  [[nodiscard]] std::vector<double> to_dense() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> columns_;
  std::vector<double> values_;
};

struct CGOptions {
  double tol = 1e-10;
  std::size_t max_iter = 0;  ///< 0 selects 10 n
  bool jacobi = true;
};

struct CGResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  /// Set by symmetric_solve when CG gave up and MINRES produced x.
  bool used_minres = false;
};

using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

/// Preconditioned conjugate gradients until ||A x - b|| <= tol ||b||.
/// Throws NoConvergence with the final residual after max_iter steps.
CGResult cg_solve(const SparseMatrixCSR& A, std::span<const double> b, const CGOptions& options = {},
                  std::span<const double> x0 = {});

/// Matrix-free variant; `inverse_diagonal` may be empty for no preconditioning.
CGResult cg_solve(const LinearOperator& apply, std::span<const double> b, std::span<const double> inverse_diagonal,
                  const CGOptions& options, std::span<const double> x0 = {});

/// Preconditioned MINRES for symmetric, possibly indefinite systems; the
/// preconditioner must be positive. Same stopping rule and failure as CG.
CGResult minres_solve(const LinearOperator& apply, std::span<const double> b,
                      std::span<const double> inverse_diagonal, const CGOptions& options,
                      std::span<const double> x0 = {});
CGResult minres_solve(const SparseMatrixCSR& A, std::span<const double> b, const CGOptions& options = {},
                      std::span<const double> x0 = {});

/// CG, restarted as MINRES from the same start when CG breaks down or stalls.
CGResult symmetric_solve(const SparseMatrixCSR& A, std::span<const double> b, const CGOptions& options = {},
                         std::span<const double> x0 = {});
CGResult symmetric_solve(const LinearOperator& apply, std::span<const double> b,
                         std::span<const double> inverse_diagonal, const CGOptions& options,
                         std::span<const double> x0 = {});

/// Gaussian elimination with partial pivoting on a row-major n x n matrix.
/// Limited to n <= 2000.
std::vector<double> dense_solve(std::vector<double> matrix, std::vector<double> rhs);

/// Tridiagonal solve; sub[0] and super[n-1] are ignored.
std::vector<double> thomas_solve(std::span<const double> sub, std::span<const double> diag,
                                 std::span<const double> super, std::span<const double> rhs);

struct CondOptions {
  double power_tol = 1e-6;
  double inverse_tol = 1e-4;  ///< relative change of the smallest eigenvalue estimate
  double inner_tol = 1e-8;
  std::size_t max_power_iter = 20000;
  std::size_t max_inverse_iter = 200;
  std::size_t max_inner_iter = 0;
};

struct CondEstimate {
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double kappa = 0.0;
  std::size_t power_iterations = 0;
  std::size_t inverse_iterations = 0;
};

/// 2-norm condition number of the sub-block selected by `active`.
/// Throws NonPositive when the smallest eigenvalue estimate is not positive.
CondEstimate cond_estimate(const SparseMatrixCSR& A, const std::vector<bool>& active, const CondOptions& options = {});

/// Same estimate with caller-supplied products and solves on the active block.
/// Vectors passed to both callbacks are zero outside the active set and results
/// are masked afterwards.
CondEstimate cond_estimate(std::size_t n, const LinearOperator& apply, const LinearOperator& solve,
                           const std::vector<bool>& active, const CondOptions& options = {});

/// Smallest eigenvalue estimate alone (inverse iteration); cheaper than the full estimate.
double smallest_eigenvalue(const SparseMatrixCSR& A, const std::vector<bool>& active, const CondOptions& options = {});

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace ghostfem
