#include "ghostfem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ghostfem/error.hpp"

namespace ghostfem {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

SparseMatrixCSR SparseMatrixCSR::from_triplets(std::size_t n, std::span<const Triplet> triplets) {
  std::vector<std::size_t> order(triplets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (const Triplet& t : triplets) {
    if (t.row >= n || t.col >= n) {
      throw Error(ErrorCode::OutOfRange, "triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                             ") outside a " + std::to_string(n) + " x " + std::to_string(n) +
                                             " matrix");
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
    const Triplet& a = triplets[p];
    const Triplet& b = triplets[q];
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrixCSR m;
  m.n_ = n;
  m.offsets_.assign(n + 1, 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Triplet& t = triplets[order[k]];
    if (k > 0) {
      const Triplet& prev = triplets[order[k - 1]];
      if (prev.row == t.row && prev.col == t.col) {
        m.values_.back() += t.value;
        continue;
      }
    }
    m.columns_.push_back(t.col);
    m.values_.push_back(t.value);
    ++m.offsets_[t.row + 1];
  }
  for (std::size_t r = 0; r < n; ++r) m.offsets_[r + 1] += m.offsets_[r];
  return m;
}

SparseMatrixCSR SparseMatrixCSR::identity(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, t);
}

double SparseMatrixCSR::at(std::size_t row, std::size_t col) const {
  if (row >= n_ || col >= n_) throw Error(ErrorCode::OutOfRange, "matrix index out of range");
  const auto first = columns_.begin() + static_cast<std::ptrdiff_t>(offsets_[row]);
  const auto last = columns_.begin() + static_cast<std::ptrdiff_t>(offsets_[row + 1]);
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - columns_.begin())];
}

std::vector<double> SparseMatrixCSR::diagonal() const {
  std::vector<double> d(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) d[i] = at(i, i);
  return d;
}

void SparseMatrixCSR::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t r = 0; r < n_; ++r) {
    double s = 0.0;
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) s += values_[k] * x[columns_[k]];
    y[r] = s;
  }
}

std::vector<double> SparseMatrixCSR::operator*(std::span<const double> x) const {
  std::vector<double> y(n_);
  multiply(x, y);
  return y;
}

double SparseMatrixCSR::frobenius_norm() const { return norm2(values_); }

double SparseMatrixCSR::symmetry_defect() const {
  double diff = 0.0;
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
      const double d = values_[k] - at(columns_[k], r);
      diff += d * d;
    }
  }
  const double f = frobenius_norm();
  return f == 0.0 ? 0.0 : std::sqrt(diff) / f;
}

std::vector<double> SparseMatrixCSR::to_dense() const {
  std::vector<double> d(n_ * n_, 0.0);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) d[r * n_ + columns_[k]] = values_[k];
  return d;
}

CGResult cg_solve(const LinearOperator& apply, std::span<const double> b, std::span<const double> inverse_diagonal,
                  const CGOptions& options, std::span<const double> x0) {
  const std::size_t n = b.size();
  const std::size_t max_iter = options.max_iter == 0 ? 10 * std::max<std::size_t>(n, 1) : options.max_iter;
  CGResult out;
  out.x.assign(n, 0.0);
  if (!x0.empty()) std::copy(x0.begin(), x0.end(), out.x.begin());

  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(out.x.begin(), out.x.end(), 0.0);
    return out;
  }
  std::vector<double> r(n), z(n), p(n), q(n);
  apply(out.x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  double rnorm = norm2(r);
  auto precondition = [&]() {
    if (inverse_diagonal.empty()) {
      z = r;
    } else {
      for (std::size_t i = 0; i < n; ++i) z[i] = inverse_diagonal[i] * r[i];
    }
  };
  precondition();
  p = z;
  double rz = dot(r, z);
  std::size_t it = 0;
  while (rnorm > options.tol * bnorm) {
    if (it == max_iter) {
      throw Error(ErrorCode::NoConvergence, "CG stopped after " + std::to_string(it) +
                                                " iterations with relative residual " +
                                                std::to_string(rnorm / bnorm));
    }
    apply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) {
      throw Error(ErrorCode::NoConvergence,
                  "CG breakdown at iteration " + std::to_string(it) + ": matrix not positive definite");
    }
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    rnorm = norm2(r);
    precondition();
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    ++it;
  }
  out.iterations = it;
  out.relative_residual = rnorm / bnorm;
  return out;
}

namespace {

std::vector<double> inverse_diagonal_of(const SparseMatrixCSR& A) {
  std::vector<double> d = A.diagonal();
  for (double& v : d) v = v > 0.0 ? 1.0 / v : 1.0;
  return d;
}

}  // namespace

CGResult cg_solve(const SparseMatrixCSR& A, std::span<const double> b, const CGOptions& options,
                  std::span<const double> x0) {
  if (b.size() != A.size()) throw Error(ErrorCode::InvalidArgument, "rhs size does not match the matrix");
  const std::vector<double> inv = options.jacobi ? inverse_diagonal_of(A) : std::vector<double>{};
  return cg_solve([&](std::span<const double> x, std::span<double> y) { A.multiply(x, y); }, b, inv, options, x0);
}

CGResult minres_solve(const LinearOperator& apply, std::span<const double> b,
                      std::span<const double> inverse_diagonal, const CGOptions& options,
                      std::span<const double> x0) {
  const std::size_t n = b.size();
  const std::size_t max_iter = options.max_iter == 0 ? 10 * std::max<std::size_t>(n, 1) : options.max_iter;
  CGResult out;
  out.x.assign(n, 0.0);
  if (!x0.empty()) std::copy(x0.begin(), x0.end(), out.x.begin());
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(out.x.begin(), out.x.end(), 0.0);
    return out;
  }
  auto precondition = [&](const std::vector<double>& in, std::vector<double>& z) {
    if (inverse_diagonal.empty()) {
      z = in;
    } else {
      for (std::size_t i = 0; i < n; ++i) z[i] = inverse_diagonal[i] * in[i];
    }
  };

  std::vector<double> r1(n), r2(n), y(n), v(n), w(n, 0.0), w1(n), w2(n, 0.0);
  apply(out.x, y);
  for (std::size_t i = 0; i < n; ++i) r1[i] = b[i] - y[i];
  double rnorm = norm2(r1);
  std::size_t it = 0;
  // restart loop: the recurrence estimate is checked against the true residual
  while (rnorm > options.tol * bnorm) {
    precondition(r1, y);
    double beta = std::sqrt(std::max(dot(r1, y), 0.0));
    if (beta == 0.0) break;
    r2 = r1;
    double oldb = 0.0, dbar = 0.0, epsln = 0.0, phibar = beta, cs = -1.0, sn = 0.0;
    const double beta1 = beta;
    std::fill(w.begin(), w.end(), 0.0);
    std::fill(w2.begin(), w2.end(), 0.0);
    const double target = options.tol * bnorm / std::max(rnorm, 1e-300);
    std::size_t inner = 0;
    while (it < max_iter) {
      const double s = 1.0 / beta;
      for (std::size_t i = 0; i < n; ++i) v[i] = s * y[i];
      apply(v, y);
      if (inner > 0)
        for (std::size_t i = 0; i < n; ++i) y[i] -= (beta / oldb) * r1[i];
      const double alfa = dot(v, y);
      for (std::size_t i = 0; i < n; ++i) y[i] -= (alfa / beta) * r2[i];
      r1.swap(r2);
      r2 = y;
      precondition(r2, y);
      oldb = beta;
      beta = std::sqrt(std::max(dot(r2, y), 0.0));
      const double oldeps = epsln;
      const double delta = cs * dbar + sn * alfa;
      const double gbar = sn * dbar - cs * alfa;
      epsln = sn * beta;
      dbar = -cs * beta;
      const double gamma = std::max(std::hypot(gbar, beta), std::numeric_limits<double>::min());
      cs = gbar / gamma;
      sn = beta / gamma;
      const double phi = cs * phibar;
      phibar = sn * phibar;
      for (std::size_t i = 0; i < n; ++i) {
        w1[i] = w2[i];
        w2[i] = w[i];
        w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
        out.x[i] += phi * w[i];
      }
      ++it;
      ++inner;
      if (phibar <= 0.5 * target * beta1 || beta == 0.0) break;
    }
    const double previous = rnorm;
    apply(out.x, y);
    for (std::size_t i = 0; i < n; ++i) r1[i] = b[i] - y[i];
    rnorm = norm2(r1);
    if (rnorm <= options.tol * bnorm) break;
    if (it >= max_iter || !(rnorm < previous)) {
      throw Error(ErrorCode::NoConvergence, "MINRES stopped after " + std::to_string(it) +
                                                " iterations with relative residual " +
                                                std::to_string(rnorm / bnorm));
    }
  }
  out.iterations = it;
  out.relative_residual = rnorm / bnorm;
  return out;
}

CGResult minres_solve(const SparseMatrixCSR& A, std::span<const double> b, const CGOptions& options,
                      std::span<const double> x0) {
  if (b.size() != A.size()) throw Error(ErrorCode::InvalidArgument, "rhs size does not match the matrix");
  const std::vector<double> inv = options.jacobi ? inverse_diagonal_of(A) : std::vector<double>{};
  return minres_solve([&](std::span<const double> x, std::span<double> y) { A.multiply(x, y); }, b, inv, options,
                      x0);
}

CGResult symmetric_solve(const LinearOperator& apply, std::span<const double> b,
                         std::span<const double> inverse_diagonal, const CGOptions& options,
                         std::span<const double> x0) {
  try {
    return cg_solve(apply, b, inverse_diagonal, options, x0);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoConvergence) throw;
  }
  CGResult r = minres_solve(apply, b, inverse_diagonal, options, x0);
  r.used_minres = true;
  return r;
}

CGResult symmetric_solve(const SparseMatrixCSR& A, std::span<const double> b, const CGOptions& options,
                         std::span<const double> x0) {
  if (b.size() != A.size()) throw Error(ErrorCode::InvalidArgument, "rhs size does not match the matrix");
  const std::vector<double> inv = options.jacobi ? inverse_diagonal_of(A) : std::vector<double>{};
  return symmetric_solve([&](std::span<const double> x, std::span<double> y) { A.multiply(x, y); }, b, inv,
                         options, x0);
}

std::vector<double> dense_solve(std::vector<double> a, std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  if (n > 2000) throw Error(ErrorCode::InvalidArgument, "dense solve limited to n <= 2000");
  if (a.size() != n * n) throw Error(ErrorCode::InvalidArgument, "dense matrix size does not match the rhs");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(a[r * n + k]) > std::abs(a[piv * n + k])) piv = r;
    if (a[piv * n + k] == 0.0) throw Error(ErrorCode::NonPositive, "singular matrix in dense solve");
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[k * n + c], a[piv * n + c]);
      std::swap(rhs[k], rhs[piv]);
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = a[r * n + k] / a[k * n + k];
      if (f == 0.0) continue;
      for (std::size_t c = k; c < n; ++c) a[r * n + c] -= f * a[k * n + c];
      rhs[r] -= f * rhs[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = rhs[k];
    for (std::size_t c = k + 1; c < n; ++c) s -= a[k * n + c] * x[c];
    x[k] = s / a[k * n + k];
  }
  return x;
}

std::vector<double> thomas_solve(std::span<const double> sub, std::span<const double> diag,
                                 std::span<const double> super, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (sub.size() != n || super.size() != n || rhs.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "tridiagonal bands must share the system size");
  }
  std::vector<double> c(n), d(n), x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = diag[i] - (i > 0 ? sub[i] * c[i - 1] : 0.0);
    if (m == 0.0) throw Error(ErrorCode::NonPositive, "zero pivot in tridiagonal solve");
    c[i] = super[i] / m;
    d[i] = (rhs[i] - (i > 0 ? sub[i] * d[i - 1] : 0.0)) / m;
  }
  for (std::size_t i = n; i-- > 0;) x[i] = d[i] - (i + 1 < n ? c[i] * x[i + 1] : 0.0);
  return x;
}

namespace {

void mask(std::span<double> v, const std::vector<bool>& active) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!active[i]) v[i] = 0.0;
}

double largest_eigenvalue(std::size_t n, const LinearOperator& apply, const std::vector<bool>& active,
                          const CondOptions& o, std::size_t& iterations) {
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);
  mask(x, active);
  double nx = norm2(x);
  for (double& v : x) v /= nx;
  double lambda = 0.0;
  for (iterations = 1; iterations <= o.max_power_iter; ++iterations) {
    apply(x, y);
    mask(y, active);
    const double next = dot(x, y);
    const double ny = norm2(y);
    if (ny == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
    if (iterations > 1 && std::abs(next - lambda) <= o.power_tol * std::abs(next)) return next;
    lambda = next;
  }
  throw Error(ErrorCode::NoConvergence, "power iteration did not settle");
}

double smallest_eigenvalue_op(std::size_t n, const LinearOperator& solve, const std::vector<bool>& active,
                              const CondOptions& o, std::size_t& iterations) {
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * std::cos(1.3 * static_cast<double>(i));
  mask(x, active);
  const double nx = norm2(x);
  if (nx == 0.0) throw Error(ErrorCode::EmptySampleSet, "no active unknowns for the eigenvalue estimate");
  for (double& v : x) v /= nx;
  double lambda = 0.0;
  for (iterations = 1; iterations <= o.max_inverse_iter; ++iterations) {
    solve(x, y);
    mask(y, active);
    const double xy = dot(x, y);
    const double yy = dot(y, y);
    if (!(xy > 0.0) || yy == 0.0) {
      throw Error(ErrorCode::NonPositive, "inverse iteration found a non-positive Rayleigh quotient");
    }
    const double next = xy / yy;
    const double ny = std::sqrt(yy);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
    if (iterations > 1 && std::abs(next - lambda) <= o.inverse_tol * std::abs(next)) return next;
    lambda = next;
  }
  throw Error(ErrorCode::NoConvergence, "inverse iteration did not settle");
}

struct MaskedCSR {
  const SparseMatrixCSR& A;
  const std::vector<bool>& active;
  std::vector<double> inverse_diagonal;
  std::vector<double> warm;
  CondOptions options;

  void apply(std::span<const double> x, std::span<double> y) const {
    A.multiply(x, y);
    mask(y, active);
  }

  void solve(std::span<const double> x, std::span<double> y) {
    CGOptions cg;
    cg.tol = options.inner_tol;
    cg.max_iter = options.max_inner_iter;
    const auto op = [this](std::span<const double> in, std::span<double> out) { apply(in, out); };
    const CGResult r = symmetric_solve(op, x, inverse_diagonal, cg, warm);
    std::copy(r.x.begin(), r.x.end(), y.begin());
    // next right-hand side is y / |y|; its solution is close to y / (|y| lambda)
    const double ny = norm2(r.x);
    const double xy = dot(x, r.x);
    const double lambda = xy / (ny * ny);
    warm.assign(r.x.size(), 0.0);
    if (ny > 0.0 && lambda > 0.0)
      for (std::size_t i = 0; i < warm.size(); ++i) warm[i] = r.x[i] / (ny * lambda);
  }
};

}  // namespace

CondEstimate cond_estimate(std::size_t n, const LinearOperator& apply, const LinearOperator& solve,
                           const std::vector<bool>& active, const CondOptions& options) {
  if (active.size() != n) throw Error(ErrorCode::InvalidArgument, "active mask size does not match the matrix");
  CondEstimate e;
  e.lambda_max = largest_eigenvalue(n, apply, active, options, e.power_iterations);
  e.lambda_min = smallest_eigenvalue_op(n, solve, active, options, e.inverse_iterations);
  if (!(e.lambda_min > 0.0)) throw Error(ErrorCode::NonPositive, "smallest eigenvalue estimate is not positive");
  e.kappa = e.lambda_max / e.lambda_min;
  return e;
}

CondEstimate cond_estimate(const SparseMatrixCSR& A, const std::vector<bool>& active, const CondOptions& options) {
  MaskedCSR m{A, active, inverse_diagonal_of(A), {}, options};
  return cond_estimate(
      A.size(), [&](std::span<const double> x, std::span<double> y) { m.apply(x, y); },
      [&](std::span<const double> x, std::span<double> y) { m.solve(x, y); }, active, options);
}

double smallest_eigenvalue(const SparseMatrixCSR& A, const std::vector<bool>& active, const CondOptions& options) {
  if (active.size() != A.size()) throw Error(ErrorCode::InvalidArgument, "active mask size does not match the matrix");
  MaskedCSR m{A, active, inverse_diagonal_of(A), {}, options};
  std::size_t iterations = 0;
  return smallest_eigenvalue_op(
      A.size(), [&](std::span<const double> x, std::span<double> y) { m.solve(x, y); }, active, options, iterations);
}

}  // namespace ghostfem
