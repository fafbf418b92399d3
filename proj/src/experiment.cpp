#include "ghostfem/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "ghostfem/error.hpp"

namespace ghostfem {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

Run2DResult run_2d(const Run2DSettings& s) {
  const auto start = std::chrono::steady_clock::now();
  const Domain2D domain = make_domain(s.domain, s.circle_centre);
  Run2DResult r;
  r.grid = GridTopology(domain.region, s.N);
  const double h = r.grid.spacing();
  NodeValues values = sample_nodes(domain.field, r.grid);
  if (s.snap) values = snap_to_grid(std::move(values), h, s.alpha_snap.value_or(s.alpha));
  r.geometry = build_geometry(r.grid, values);
  r.active = r.geometry.active_count();

  BVPSpec spec = manufactured_problem(s.bc, domain);
  spec.data_mode = s.data_mode;
  AssembledSystem sys = assemble(spec, r.grid, r.geometry, Penalty::from_alpha(h, s.alpha, s.penalty_scale));
  if (s.bc == BoundaryKind::Neumann) sys = apply_neumann_gauge(std::move(sys));
  r.symmetry_defect = sys.matrix.symmetry_defect();

  SolveResult sol = solve(sys, s.cg);
  r.u = std::move(sol.u);
  r.iterations = sol.iterations;
  r.used_minres = sol.used_minres;
  SampleOptions so;
  so.remove_mean = s.bc == BoundaryKind::Neumann && sys.component_count == 1;
  bool floating = s.bc == BoundaryKind::Neumann && sys.component_count > 1;
  for (std::size_t c = 0; c < sys.floating.size(); ++c) {
    floating = floating || (s.bc == BoundaryKind::Mixed && sys.floating[c]);
  }
  if (floating) {
    // one free constant per component: align each with the exact solution
    std::vector<double> shift(static_cast<std::size_t>(sys.component_count), 0.0);
    std::vector<double> mass(shift.size(), 0.0);
    for (std::size_t i = 0; i < r.u.size(); ++i) {
      if (!sys.active[i]) continue;
      const auto c = static_cast<std::size_t>(sys.component[i]);
      shift[c] += sys.lumped_mass[i] * (r.u[i] - manufactured2d::u(r.grid.node_coord(i)));
      mass[c] += sys.lumped_mass[i];
    }
    for (std::size_t i = 0; i < r.u.size(); ++i) {
      if (!sys.active[i]) continue;
      const auto c = static_cast<std::size_t>(sys.component[i]);
      if (sys.floating[c]) r.u[i] -= shift[c] / mass[c];
    }
  }
  r.errors = l2_errors(r.u, manufactured2d::u, manufactured2d::grad, r.grid, r.geometry, so);

  r.cond = kNaN;
  r.lambda_min = kNaN;
  if (s.bc != BoundaryKind::Neumann) {
    try {
      if (s.compute_cond) {
        const CondEstimate e = cond_estimate(sys.matrix, sys.active, s.cond);
        r.cond = e.kappa;
        r.lambda_min = e.lambda_min;
      } else if (s.compute_lambda_min) {
        r.lambda_min = smallest_eigenvalue(sys.matrix, sys.active, s.cond);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonPositive && e.code() != ErrorCode::NoConvergence) throw;
      r.cond_failure = e.what();
    }
  }
  r.system = std::move(sys);
  r.seconds = seconds_since(start);
  return r;
}

Run1DResult run_1d(const Run1DSettings& s) {
  const auto start = std::chrono::steady_clock::now();
  if (s.bc == BoundaryKind::Neumann) {
    throw Error(ErrorCode::InvalidArgument, "1D problems take Dirichlet or mixed conditions");
  }
  Run1DResult r;
  const double h = 1.0 / s.N;
  r.setup = Interval1DSetup::from_theta(s.N, s.theta1, s.theta2, std::pow(h, -s.alpha));
  if (s.snap) r.setup = snap_interval(r.setup, s.alpha_snap.value_or(s.alpha));

  std::vector<double> f(static_cast<std::size_t>(s.N) + 1);
  for (int k = 0; k <= s.N; ++k) f[k] = manufactured1d::f(k * h);
  r.system = s.bc == BoundaryKind::Mixed
                 ? assemble_mixed_1d(r.setup, f, manufactured1d::u(r.setup.a), manufactured1d::du(r.setup.b))
                 : assemble_dirichlet_1d(r.setup, f, manufactured1d::u(r.setup.a), manufactured1d::u(r.setup.b));
  r.symmetry_defect = r.system.A.to_csr().symmetry_defect();
  r.u = solve_1d(r.system);
  r.errors = l2_errors_1d(r.u, manufactured1d::u, manufactured1d::du, r.setup);
  r.cond = kNaN;
  r.lambda_min = kNaN;
  if (s.compute_cond) {
    const CondEstimate e = cond_estimate_1d(r.system, s.cond);
    r.cond = e.kappa;
    r.lambda_min = e.lambda_min;
  }
  r.seconds = seconds_since(start);
  return r;
}

std::vector<std::pair<double, double>> circle_offsets(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  const double scale = std::ldexp(1.0, -53);
  std::vector<std::pair<double, double>> out;
  for (int s = 0; s < samples; ++s) {
    const double e1 = static_cast<double>(rng() >> 11) * scale;
    const double e2 = static_cast<double>(rng() >> 11) * scale;
    out.emplace_back(e1, e2);
  }
  return out;
}

Vec2 circle_centre(std::pair<double, double> offset, int N) {
  const double h = 1.0 / N;
  return {0.5 + offset.first * h, 0.5 + offset.second * h};
}

std::vector<double> default_theta1_grid() {
  std::vector<double> out;
  for (int k = 2; k <= 1980; ++k) out.push_back(k * 0.0005);
  return out;
}

void validate(const ExperimentConfig& c) {
  auto usage = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (c.command != "solve" && c.command != "convergence" && c.command != "sweep1d") {
    usage("unknown command '" + c.command + "'");
  }
  const bool interval = c.domain == "interval";
  if (!interval && !is_domain_name(c.domain)) usage("unknown domain '" + c.domain + "'");
  if (c.command == "sweep1d" && !interval) usage("sweep1d runs on the interval domain");
  if (interval && c.bc == BoundaryKind::Neumann) usage("the interval takes dirichlet or mixed conditions");
  if (c.Ns.empty()) usage("no grid sizes given");
  for (std::size_t k = 0; k < c.Ns.size(); ++k) {
    if (c.Ns[k] < (interval ? 2 : 1)) usage("grid size " + std::to_string(c.Ns[k]) + " too small");
    if (k > 0 && c.Ns[k] <= c.Ns[k - 1]) usage("grid sizes must increase strictly");
  }
  if (c.alphas.empty()) usage("no penalty exponents given");
  for (double a : c.alphas)
    if (!(a > 0.0)) usage("penalty exponents must be positive");
  if (c.alpha_snap && !(*c.alpha_snap > 0.0)) usage("alpha-snap must be positive");
  if (c.samples < 1) usage("samples must be at least 1");
  if (!(c.tol > 0.0)) usage("tolerance must be positive");
  for (double t : c.theta1)
    if (!(t >= 0.0 && t <= 1.0)) usage("theta1 values must lie in [0, 1]");
  if (!(c.theta2 >= 0.0 && c.theta2 <= 1.0)) usage("theta2 must lie in [0, 1]");
}

namespace {

struct Row {
  int N;
  double alpha;
  std::string sample;
  double error;
  double grad_error;
  double cond;
  std::size_t iters;
};

double r_spacing(const std::string& domain, int N) {
  if (domain == "interval") return 1.0 / N;
  return make_domain(domain).region.width() / N;
}

void write_row(std::ostream& out, const ExperimentConfig& c, const std::string& domain, const Row& r) {
  const double h = r_spacing(domain, r.N);
  out << c.command << ',' << domain << ',' << to_string(c.bc) << ',' << r.N << ',' << num(h) << ','
      << num(r.alpha) << ',' << num(c.alpha_snap.value_or(r.alpha)) << ',' << c.seed << ',' << r.sample << ','
      << num(r.error) << ',' << num(r.grad_error) << ',' << num(r.cond) << ',' << r.iters << '\n';
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  std::size_t n = 0;
  for (double x : v) {
    if (std::isnan(x)) continue;
    s += x;
    ++n;
  }
  return n == 0 ? kNaN : s / static_cast<double>(n);
}

// Fitted slope over the levels with finite values, or nan when fewer than two remain.
double safe_order(const std::vector<double>& h, const std::vector<double>& v) {
  std::vector<double> hh, vv;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (std::isfinite(v[k]) && v[k] > 0.0) {
      hh.push_back(h[k]);
      vv.push_back(v[k]);
    }
  }
  if (hh.size() < 2) return kNaN;
  return fit_order(hh, vv);
}

std::vector<double> thetas(const ExperimentConfig& c) {
  if (!c.theta1.empty()) return c.theta1;
  return c.command == "sweep1d" ? default_theta1_grid() : std::vector<double>{0.5};
}

ExperimentOutput sweep_interval(const ExperimentConfig& c, std::ostream& diag) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  bool failed = false;
  const std::vector<double> th = thetas(c);
  std::ostringstream footer;
  for (double alpha : c.alphas) {
    for (std::size_t t = 0; t < th.size(); ++t) {
      std::vector<double> hs, errs, grads;
      for (int N : c.Ns) {
        Run1DSettings s;
        s.bc = c.bc;
        s.N = N;
        s.theta1 = th[t];
        s.theta2 = c.theta2;
        s.alpha = alpha;
        s.alpha_snap = c.alpha_snap;
        s.compute_cond = c.cond == CondMode::All || (c.cond == CondMode::First && t == 0);
        try {
          const Run1DResult r = run_1d(s);
          write_row(out, c, "interval", {N, alpha, std::to_string(t), r.errors.error, r.errors.grad_error, r.cond, 0});
          hs.push_back(1.0 / N);
          errs.push_back(r.errors.error);
          grads.push_back(r.errors.grad_error);
        } catch (const Error& e) {
          failed = true;
          diag << "interval N=" << N << " alpha=" << alpha << " theta1=" << th[t] << ": " << e.what() << '\n';
        }
      }
      footer << "# fit,alpha=" << num(alpha) << ",sample=" << t << ",theta1=" << num(th[t])
             << ",theta2=" << num(c.theta2) << ",order_error=" << num(safe_order(hs, errs))
             << ",order_grad=" << num(safe_order(hs, grads)) << '\n';
    }
  }
  out << footer.str();
  return {out.str(), failed};
}

}  // namespace

ExperimentOutput run_convergence(const ExperimentConfig& c, std::ostream& diag) {
  validate(c);
  if (c.domain == "interval") return sweep_interval(c, diag);

  std::ostringstream out;
  out << kCsvHeader << '\n';
  std::ostringstream footer;
  bool failed = false;
  const bool random_centres = c.domain == "circle";
  const int samples = random_centres ? c.samples : 1;
  const auto offsets = circle_offsets(c.seed, samples);

  for (double alpha : c.alphas) {
    std::vector<double> hs, errs, grads, conds;
    for (int N : c.Ns) {
      std::vector<double> e, g, k, it;
      for (int s = 0; s < samples; ++s) {
        Run2DSettings rs;
        rs.domain = c.domain;
        rs.bc = c.bc;
        rs.N = N;
        rs.alpha = alpha;
        rs.alpha_snap = c.alpha_snap;
        if (random_centres) rs.circle_centre = circle_centre(offsets[s], N);
        rs.cg.tol = c.tol;
        rs.compute_cond = c.cond == CondMode::All || (c.cond == CondMode::First && s == 0);
        try {
          const Run2DResult r = run_2d(rs);
          if (!r.cond_failure.empty()) {
            failed = true;
            diag << c.domain << " N=" << N << " alpha=" << alpha << " sample=" << s << ": " << r.cond_failure
                 << '\n';
          }
          write_row(out, c, c.domain,
                    {N, alpha, std::to_string(s), r.errors.error, r.errors.grad_error, r.cond, r.iterations});
          e.push_back(r.errors.error);
          g.push_back(r.errors.grad_error);
          k.push_back(r.cond);
          it.push_back(static_cast<double>(r.iterations));
        } catch (const Error& err) {
          failed = true;
          diag << c.domain << " N=" << N << " alpha=" << alpha << " sample=" << s << ": " << err.what() << '\n';
        }
      }
      if (e.empty()) continue;
      const double me = mean_of(e), mg = mean_of(g), mk = mean_of(k);
      if (samples > 1) {
        write_row(out, c, c.domain,
                  {N, alpha, "mean", me, mg, mk, static_cast<std::size_t>(std::lround(mean_of(it)))});
      }
      hs.push_back(r_spacing(c.domain, N));
      errs.push_back(me);
      grads.push_back(mg);
      conds.push_back(mk);
    }
    footer << "# fit,alpha=" << num(alpha) << ",order_error=" << num(safe_order(hs, errs))
           << ",order_grad=" << num(safe_order(hs, grads)) << ",order_cond=" << num(safe_order(hs, conds)) << '\n';
  }
  out << footer.str();
  return {out.str(), failed};
}

ExperimentOutput run_sweep1d(const ExperimentConfig& c, std::ostream& diag) {
  validate(c);
  return sweep_interval(c, diag);
}

ExperimentOutput run_solve(const ExperimentConfig& c, std::ostream& diag) {
  validate(c);
  std::ostringstream out;
  out << "node,x,y,u,label\n";
  const int N = c.Ns.front();
  const double alpha = c.alphas.front();
  try {
    if (c.domain == "interval") {
      Run1DSettings s;
      s.bc = c.bc;
      s.N = N;
      s.theta1 = thetas(c).front();
      s.theta2 = c.theta2;
      s.alpha = alpha;
      s.alpha_snap = c.alpha_snap;
      const Run1DResult r = run_1d(s);
      for (int k = 0; k <= N; ++k) {
        const double x = k * r.setup.h;
        const bool inside = x > r.setup.a && x < r.setup.b;
        const char* label = inside ? "interior" : (r.system.active[k] ? "ghost" : "inactive");
        out << k << ',' << num(x) << ",0," << num(r.u[k]) << ',' << label << '\n';
      }
    } else {
      Run2DSettings s;
      s.domain = c.domain;
      s.bc = c.bc;
      s.N = N;
      s.alpha = alpha;
      s.alpha_snap = c.alpha_snap;
      s.cg.tol = c.tol;
      const Run2DResult r = run_2d(s);
      for (std::size_t k = 0; k < r.grid.node_count(); ++k) {
        const Vec2 p = r.grid.node_coord(k);
        out << k << ',' << num(p.x) << ',' << num(p.y) << ',' << num(r.u[k]) << ','
            << to_string(r.geometry.node_labels[k]) << '\n';
      }
    }
  } catch (const Error& e) {
    diag << c.domain << " N=" << N << " alpha=" << alpha << ": " << e.what() << '\n';
    return {out.str(), true};
  }
  return {out.str(), false};
}

}  // namespace ghostfem
