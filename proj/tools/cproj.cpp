#include "cproj/algorithms.hpp"
#include "cproj/errors.hpp"
#include "cproj/io.hpp"
#include "cproj/plot.hpp"
#include "cproj/verify.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace capprox;

namespace {

constexpr int kSolverFailure = 1;
constexpr int kVerifyFailure = 2;
constexpr int kIoFailure = 3;

struct Config {
  std::string input;
  std::string bundle;
  std::string out;
  std::string plot;
  double epsilon = 0.01;
  double delta = 0.1;
  std::string variant = "box";
  std::string algorithm = "auto";
  int max_iter = 200;
  std::uint64_t seed = 1;
  bool verbose = false;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ProblemInstance read_instance(const std::string& path) {
  try {
    return load_instance(path);
  } catch (const Error& e) {
    throw IoError(e.what());
  }
}

SolutionBundle read_bundle(const std::string& path) {
  try {
    return load_bundle(path);
  } catch (const Error& e) {
    throw IoError(e.what());
  }
}

void write_plot(const SolutionBundle& b, const ProblemInstance& inst, const std::string& path) {
  const PlotSets sets = plot_sets(b, inst);
  const std::string title = "instance=" + inst.name;
  if (b.a == 2) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    write_svg(out, sets, title);
    return;
  }
  if (b.a != 3) throw IoError("plot data needs a = 2 or a = 3");
  std::filesystem::path base(path);
  if (base.extension() == ".off") base.replace_extension();
  const std::pair<const char*, const std::vector<Vec>*> parts[] = {
      {"_inner.off", &sets.inner}, {"_outer.off", &sets.outer}, {"_eps.off", &sets.eps}};
  for (const auto& [suffix, pts] : parts) {
    const std::string file = base.string() + suffix;
    std::ofstream out(file);
    if (!out) throw IoError("cannot write " + file);
    Mesh mesh;
    try {
      mesh = convex_hull_3d(*pts);
    } catch (const Error&) {
      mesh.vertices = *pts;
    }
    write_off(out, mesh, sets.radius, title);
  }
}

int run_solve(const Config& cfg) {
  const ProblemInstance inst = read_instance(cfg.input);
  Tolerances tol;
  tol.epsilon = cfg.epsilon;
  tol.delta = cfg.delta;
  tol.solver_tol = std::min(tol.solver_tol, std::min(cfg.epsilon, cfg.delta) / 100.0);
  RunOptions opts;
  opts.variant = parse_variant(cfg.variant);
  opts.max_iterations = cfg.max_iter;
  if (cfg.verbose) opts.log = &std::cerr;

  SolutionBundle b;
  std::string used = cfg.algorithm;
  if (cfg.algorithm == "bounded") b = solve_bounded(inst, tol, opts);
  else if (cfg.algorithm == "general" || cfg.algorithm == "auto") {
    b = solve_general(inst, tol, opts);
    if (cfg.algorithm == "auto")
      used = b.Y_in.empty() && b.Y_out.empty() ? "bounded" : "general";
  } else throw std::invalid_argument("unknown algorithm '" + cfg.algorithm + "'");

  std::cout << "termination=" << to_string(b.termination) << " algorithm=" << used << "\n";
  std::cout << "optimizations=" << b.stats.n_scalarizations << " polyhedron_evals=" << b.stats.n_polyhedron_evals
            << "\n";
  if (cfg.verbose)
    std::cerr << "iterations=" << b.stats.n_iterations << " cache_hits=" << b.stats.cache_hits
              << " points=" << b.X_bar.size() << " vertices=" << b.A0_v.vertices.size()
              << " facets=" << b.A0_h.halfspaces.size() << " time=" << b.stats.wall_time << "s\n";
  if (!cfg.out.empty()) {
    try {
      save_bundle(b, cfg.out);
    } catch (const Error& e) {
      throw IoError(e.what());
    }
  }
  if (!cfg.plot.empty()) write_plot(b, inst, cfg.plot);
  return 0;
}

int run_verify(const Config& cfg) {
  const ProblemInstance inst = read_instance(cfg.input);
  const SolutionBundle b = read_bundle(cfg.bundle);
  VerifyOptions vo;
  vo.seed = cfg.seed;
  const VerificationReport rep = verify_bundle(b, inst, vo);
  for (const auto& c : rep.checks)
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
  return rep.passed() ? 0 : kVerifyFailure;
}

int run_plot(const Config& cfg) {
  const ProblemInstance inst = read_instance(cfg.input);
  const SolutionBundle b = read_bundle(cfg.bundle);
  if (cfg.out.empty()) throw IoError("plot-data needs --out");
  write_plot(b, inst, cfg.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polyhedral approximation of convex projections"};
  app.require_subcommand(1);
  Config cfg;

  auto* solve_cmd = app.add_subcommand("solve", "Approximate the image of an instance");
  solve_cmd->add_option("input", cfg.input, "Instance file")->required();
  solve_cmd->add_option("--epsilon", cfg.epsilon, "Image approximation error (l1)")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--delta", cfg.delta, "Recession cone error (l1)")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--variant", cfg.variant, "Initial weights")->check(CLI::IsMember({"box", "simplex"}));
  solve_cmd->add_option("--algorithm", cfg.algorithm, "Driver")
      ->check(CLI::IsMember({"auto", "bounded", "general"}));
  solve_cmd->add_option("--max-iter", cfg.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--seed", cfg.seed, "Seed for sampling");
  solve_cmd->add_option("--out", cfg.out, "Bundle output file");
  solve_cmd->add_option("--plot", cfg.plot, "Plot output (SVG for a=2, OFF prefix for a=3)");
  solve_cmd->add_flag("--verbose", cfg.verbose, "Progress on stderr");

  auto* verify_cmd = app.add_subcommand("verify", "Re-check a bundle against its instance");
  verify_cmd->add_option("input", cfg.input, "Instance file")->required();
  verify_cmd->add_option("bundle", cfg.bundle, "Bundle file")->required();
  verify_cmd->add_option("--seed", cfg.seed, "Seed for sampling");
  verify_cmd->add_flag("--verbose", cfg.verbose, "Unused");

  auto* plot_cmd = app.add_subcommand("plot-data", "Write plot data for a bundle");
  plot_cmd->add_option("input", cfg.input, "Instance file")->required();
  plot_cmd->add_option("bundle", cfg.bundle, "Bundle file")->required();
  plot_cmd->add_option("--out", cfg.out, "Output file (SVG) or prefix (OFF)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return run_solve(cfg);
    if (*verify_cmd) return run_verify(cfg);
    return run_plot(cfg);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailure;
  }
}
