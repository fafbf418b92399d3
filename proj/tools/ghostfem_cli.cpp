// Command-line runner for single solves, convergence studies and the 1D sweep.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ghostfem/error.hpp"
#include "ghostfem/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kNumericFailure = 1;
constexpr int kUsage = 2;

struct Options {
  std::string domain;
  std::string bc;
  std::vector<int> n;
  std::vector<double> alpha;
  double alpha_snap = 0.0;
  int samples = 1;
  std::uint64_t seed = 42;
  double tol = 1e-10;
  std::string cond = "first";
  std::vector<double> theta1;
  double theta2 = 1e-3;
  std::string out;
};

void add_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--domain", o.domain, "circle, flower, leaf, hourglass or interval");
  cmd->add_option("--bc", o.bc, "dirichlet, neumann or mixed");
  cmd->add_option("--n", o.n, "grid sizes, comma separated")->delimiter(',');
  cmd->add_option("--alpha", o.alpha, "penalty exponents, comma separated")->delimiter(',');
  cmd->add_option("--alpha-snap", o.alpha_snap, "snapping exponent (default: alpha)");
  cmd->add_option("--samples", o.samples, "random circle centres per level");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--tol", o.tol, "CG relative residual");
  cmd->add_option("--cond", o.cond, "condition estimates: all, first or none")
      ->check(CLI::IsMember({"all", "first", "none"}));
  cmd->add_option("--theta1", o.theta1, "1D left cut fractions, comma separated")->delimiter(',');
  cmd->add_option("--theta2", o.theta2, "1D right cut fraction");
  cmd->add_option("--out", o.out, "output CSV path")->required();
}

ghostfem::ExperimentConfig to_config(const std::string& command, const Options& o) {
  ghostfem::ExperimentConfig c;
  c.command = command;
  const bool sweep = command == "sweep1d";
  c.domain = o.domain.empty() ? (sweep ? "interval" : "circle") : o.domain;
  c.bc = ghostfem::parse_boundary_kind(o.bc.empty() ? (sweep ? "mixed" : "dirichlet") : o.bc);
  if (!o.n.empty()) {
    c.Ns = o.n;
  } else if (sweep) {
    c.Ns = {20, 40, 80, 160, 320, 640};
  } else if (command == "solve") {
    c.Ns = {40};
  }
  if (!o.alpha.empty()) c.alphas = o.alpha;
  if (o.alpha_snap != 0.0) c.alpha_snap = o.alpha_snap;
  c.samples = o.samples;
  c.seed = o.seed;
  c.tol = o.tol;
  c.cond = o.cond == "all" ? ghostfem::CondMode::All
                           : (o.cond == "none" ? ghostfem::CondMode::None : ghostfem::CondMode::First);
  c.theta1 = o.theta1;
  c.theta2 = o.theta2;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ghost-node finite elements for the Poisson equation on level-set domains"};
  app.require_subcommand(1);
  Options o;
  for (const char* name : {"solve", "convergence", "sweep1d"}) {
    add_options(app.add_subcommand(name, std::string(name) + " experiment"), o);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  ghostfem::ExperimentConfig config;
  try {
    config = to_config(command, o);
    ghostfem::validate(config);
  } catch (const ghostfem::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  ghostfem::ExperimentOutput result;
  try {
    if (command == "solve") {
      result = ghostfem::run_solve(config, std::cerr);
    } else if (command == "convergence") {
      result = ghostfem::run_convergence(config, std::cerr);
    } else {
      result = ghostfem::run_sweep1d(config, std::cerr);
    }
  } catch (const ghostfem::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericFailure;
  }

  std::ofstream file(o.out, std::ios::binary);
  if (!file) {
    std::cerr << "cannot write " << o.out << '\n';
    return kNumericFailure;
  }
  file << result.csv;
  return result.failed ? kNumericFailure : kOk;
}
