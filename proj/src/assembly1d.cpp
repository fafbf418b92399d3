#include "ghostfem/assembly1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ghostfem/error.hpp"

namespace ghostfem {

namespace {

void check_grid(int N) {
  if (N < 2) throw Error(ErrorCode::InvalidArgument, "1D grid needs N >= 2, got " + std::to_string(N));
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "penalty must be positive");
}

}  // namespace

Interval1DSetup Interval1DSetup::from_endpoints(int N, double a, double b, double lambda) {
  check_grid(N);
  check_lambda(lambda);
  const double h = 1.0 / N;
  if (!(a >= 0.0 && a <= h)) {
    throw Error(ErrorCode::InvalidTheta, "left end " + std::to_string(a) + " outside [0, h]");
  }
  if (!(b >= 1.0 - h && b <= 1.0)) {
    throw Error(ErrorCode::InvalidTheta, "right end " + std::to_string(b) + " outside [1 - h, 1]");
  }
  Interval1DSetup s;
  s.N = N;
  s.h = h;
  s.a = a;
  s.b = b;
  s.theta1 = std::clamp(1.0 - a / h, 0.0, 1.0);
  s.theta2 = std::clamp(1.0 - (1.0 - b) / h, 0.0, 1.0);
  s.lambda = lambda;
  return s;
}

Interval1DSetup Interval1DSetup::from_theta(int N, double theta1, double theta2, double lambda) {
  check_grid(N);
  check_lambda(lambda);
  if (!(theta1 >= 0.0 && theta1 <= 1.0) || !(theta2 >= 0.0 && theta2 <= 1.0)) {
    throw Error(ErrorCode::InvalidTheta, "theta values must lie in [0, 1]");
  }
  Interval1DSetup s;
  s.N = N;
  s.h = 1.0 / N;
  s.theta1 = theta1;
  s.theta2 = theta2;
  s.a = s.h * (1.0 - theta1);
  s.b = 1.0 - s.h * (1.0 - theta2);
  s.lambda = lambda;
  return s;
}

Interval1DSetup snap_interval(const Interval1DSetup& setup, double alpha_snap) {
  if (!(alpha_snap > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha_snap must be positive");
  const double threshold = std::pow(setup.h, alpha_snap);
  Interval1DSetup s = setup;
  if (s.theta1 > 0.0 && s.h * s.theta1 < threshold) {
    s.theta1 = 0.0;
    s.a = s.h;
  }
  if (s.theta2 > 0.0 && s.h * s.theta2 < threshold) {
    s.theta2 = 0.0;
    s.b = 1.0 - s.h;
  }
  return s;
}

double Tridiagonal::at(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size()) throw Error(ErrorCode::OutOfRange, "tridiagonal index out of range");
  if (i == j) return diag[i];
  if (j + 1 == i) return lower[i];
  if (i + 1 == j) return upper[i];
  return 0.0;
}

void Tridiagonal::add(std::size_t i, std::size_t j, double v) {
  if (i >= size() || j >= size()) throw Error(ErrorCode::OutOfRange, "tridiagonal index out of range");
  if (i == j) {
    diag[i] += v;
  } else if (j + 1 == i) {
    lower[i] += v;
  } else if (i + 1 == j) {
    upper[i] += v;
  } else {
    throw Error(ErrorCode::OutOfRange, "entry outside the tridiagonal band");
  }
}

std::vector<double> Tridiagonal::multiply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += lower[i] * x[i - 1];
    if (i + 1 < n) s += upper[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

SparseMatrixCSR Tridiagonal::to_csr() const {
  std::vector<Triplet> t;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && lower[i] != 0.0) t.push_back({i, i - 1, lower[i]});
    t.push_back({i, i, diag[i]});
    if (i + 1 < n && upper[i] != 0.0) t.push_back({i, i + 1, upper[i]});
  }
  return SparseMatrixCSR::from_triplets(n, t);
}

Tridiagonal& Tridiagonal::operator+=(const Tridiagonal& o) { return axpy(1.0, o); }

Tridiagonal& Tridiagonal::axpy(double s, const Tridiagonal& o) {
  for (std::size_t i = 0; i < size(); ++i) {
    lower[i] += s * o.lower[i];
    diag[i] += s * o.diag[i];
    upper[i] += s * o.upper[i];
  }
  return *this;
}

Tridiagonal Blocks1D::S_T() const {
  Tridiagonal t = S_Ta;
  t += S_Tb;
  return t;
}

namespace {

// Covered part [s0, s1] of a cell in local coordinates, with u = 1 - s kept
// separately so short pieces do not lose digits to cancellation.
struct Piece {
  double s0, s1, u0, u1, length;
};

int left_cell(const Interval1DSetup& s) { return s.theta1 > 0.0 ? 0 : 1; }
int right_cell(const Interval1DSetup& s) { return s.theta2 > 0.0 ? s.N - 1 : s.N - 2; }

Piece piece(const Interval1DSetup& s, int k) {
  const int ka = left_cell(s);
  const int kb = right_cell(s);
  Piece p{0.0, 1.0, 0.0, 1.0, 1.0};
  if (k == ka && ka == 0) {
    p.s0 = 1.0 - s.theta1;
    p.u1 = s.theta1;
  }
  if (k == kb && kb == s.N - 1) {
    p.s1 = s.theta2;
    p.u0 = 1.0 - s.theta2;
  }
  const bool left = k == ka && ka == 0;
  const bool right = k == kb && kb == s.N - 1;
  if (left && right) {
    p.length = p.s1 - p.s0;
  } else if (left) {
    p.length = p.u1;
  } else if (right) {
    p.length = p.s1;
  }
  return p;
}

}  // namespace

Blocks1D build_blocks_1d(const Interval1DSetup& setup) {
  check_grid(setup.N);
  const std::size_t n = static_cast<std::size_t>(setup.N) + 1;
  const double h = setup.h;
  Blocks1D B{Tridiagonal(n), Tridiagonal(n), Tridiagonal(n), Tridiagonal(n), Tridiagonal(n),
             Tridiagonal(n), Tridiagonal(n), Tridiagonal(n), Tridiagonal(n)};

  const int ka = left_cell(setup);
  const int kb = right_cell(setup);
  for (int k = ka; k <= kb; ++k) {
    const Piece p = piece(setup, k);
    if (!(p.length > 0.0)) continue;
    const auto i = static_cast<std::size_t>(k);
    // Simpson is exact for the quadratic products
    const double m = 0.5 * (p.s0 + p.s1);
    const double mu = 0.5 * (p.u0 + p.u1);
    const double w = h * p.length / 6.0;
    const double m00 = w * (p.u1 * p.u1 + 4.0 * mu * mu + p.u0 * p.u0);
    const double m11 = w * (p.s0 * p.s0 + 4.0 * m * m + p.s1 * p.s1);
    const double m01 = w * (p.s0 * p.u1 + 4.0 * m * mu + p.s1 * p.u0);
    B.M.add(i, i, m00);
    B.M.add(i, i + 1, m01);
    B.M.add(i + 1, i, m01);
    B.M.add(i + 1, i + 1, m11);
    const double st = p.length / h;
    B.S.add(i, i, st);
    B.S.add(i, i + 1, -st);
    B.S.add(i + 1, i, -st);
    B.S.add(i + 1, i + 1, st);
  }

  const double d[2] = {-1.0 / h, 1.0 / h};
  {
    const Piece p = piece(setup, ka);
    const double v[2] = {p.u1, p.s0};
    const auto base = static_cast<std::size_t>(ka);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        B.S_Ta.add(base + r, base + c, d[c] * v[r] + v[c] * d[r]);
        B.D_a.add(base + r, base + c, v[c] * d[r]);
        B.P_a.add(base + r, base + c, v[c] * v[r]);
      }
    }
  }
  {
    const Piece p = piece(setup, kb);
    const double v[2] = {p.u0, p.s1};
    const auto base = static_cast<std::size_t>(kb);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        B.S_Tb.add(base + r, base + c, -(d[c] * v[r] + v[c] * d[r]));
        B.D_b.add(base + r, base + c, -v[c] * d[r]);
        B.P_b.add(base + r, base + c, v[c] * v[r]);
        B.N_b.add(base + r, base + c, v[c] * v[r]);
      }
    }
  }
  return B;
}

std::vector<bool> active_nodes_1d(const Interval1DSetup& setup) {
  const int N = setup.N;
  std::vector<bool> inside(static_cast<std::size_t>(N) + 1, false);
  for (int k = 1; k <= N - 1; ++k) {
    inside[k] = (k != 1 || setup.theta1 > 0.0) && (k != N - 1 || setup.theta2 > 0.0);
  }
  std::vector<bool> active(inside.size(), false);
  for (int k = 0; k <= N; ++k) {
    active[k] = inside[k] || (k > 0 && inside[k - 1]) || (k < N && inside[k + 1]);
  }
  return active;
}

namespace {

std::vector<double> row_sums(const Tridiagonal& t) {
  const std::vector<double> ones(t.size(), 1.0);
  return t.multiply(ones);
}

void check_samples(const Interval1DSetup& setup, std::span<const double> f) {
  if (f.size() != static_cast<std::size_t>(setup.N) + 1) {
    throw Error(ErrorCode::InvalidArgument, "source needs one sample per grid node");
  }
}

void pin_inactive(System1D& sys) {
  const std::size_t n = sys.A.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (sys.active[i]) continue;
    sys.A.lower[i] = 0.0;
    sys.A.upper[i] = 0.0;
    sys.A.diag[i] = 1.0;
    if (i > 0) sys.A.upper[i - 1] = 0.0;
    if (i + 1 < n) sys.A.lower[i + 1] = 0.0;
    sys.rhs[i] = 0.0;
  }
}

}  // namespace

System1D assemble_dirichlet_1d(const Interval1DSetup& setup, std::span<const double> f, double u_a, double u_b) {
  check_samples(setup, f);
  const Blocks1D B = build_blocks_1d(setup);
  const double lambda = setup.lambda;
  System1D sys;
  sys.lambda = lambda;
  sys.A = B.S;
  sys.A += B.S_T();
  sys.A.axpy(lambda, B.P_a);
  sys.A.axpy(lambda, B.P_b);

  Tridiagonal ga = B.D_a;
  ga.axpy(lambda, B.P_a);
  Tridiagonal gb = B.D_b;
  gb.axpy(lambda, B.P_b);
  sys.rhs = B.M.multiply(f);
  const std::vector<double> ra = row_sums(ga);
  const std::vector<double> rb = row_sums(gb);
  for (std::size_t i = 0; i < sys.rhs.size(); ++i) sys.rhs[i] += ra[i] * u_a + rb[i] * u_b;

  sys.active = active_nodes_1d(setup);
  pin_inactive(sys);
  return sys;
}

System1D assemble_mixed_1d(const Interval1DSetup& setup, std::span<const double> f, double u_a, double g_b) {
  check_samples(setup, f);
  const Blocks1D B = build_blocks_1d(setup);
  const double lambda = setup.lambda;
  System1D sys;
  sys.lambda = lambda;
  sys.A = B.S;
  sys.A += B.S_Ta;
  sys.A.axpy(lambda, B.P_a);

  Tridiagonal ga = B.D_a;
  ga.axpy(lambda, B.P_a);
  sys.rhs = B.M.multiply(f);
  const std::vector<double> ra = row_sums(ga);
  const std::vector<double> rb = row_sums(B.N_b);
  for (std::size_t i = 0; i < sys.rhs.size(); ++i) sys.rhs[i] += ra[i] * u_a + rb[i] * g_b;

  sys.active = active_nodes_1d(setup);
  pin_inactive(sys);
  return sys;
}

std::vector<double> solve_1d(const System1D& system) {
  return thomas_solve(system.A.lower, system.A.diag, system.A.upper, system.rhs);
}

CondEstimate cond_estimate_1d(const System1D& system, const CondOptions& options) {
  const std::size_t n = system.A.size();
  return cond_estimate(
      n,
      [&](std::span<const double> x, std::span<double> y) {
        const std::vector<double> r = system.A.multiply(x);
        std::copy(r.begin(), r.end(), y.begin());
      },
      [&](std::span<const double> x, std::span<double> y) {
        const std::vector<double> r = thomas_solve(system.A.lower, system.A.diag, system.A.upper, x);
        std::copy(r.begin(), r.end(), y.begin());
      },
      system.active, options);
}

}  // namespace ghostfem
