#pragma once

#include "cproj/polyhedron.hpp"
#include "cproj/problem.hpp"
#include "cproj/scalarization.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace capprox {

enum class InitVariant { Box, Simplex };

enum class Termination { BoundedConverged, RecessionFoundConverged, ThinConeConverged };

std::string to_string(InitVariant v);
std::string to_string(Termination t);
InitVariant parse_variant(const std::string& s);
Termination parse_termination(const std::string& s);

struct RunStats {
  long n_scalarizations = 0;   // weighted-sum, Pascoletti-Serafini and norm problems
  long n_polyhedron_evals = 0; // dd_convert calls
  long n_iterations = 0;
  long cache_hits = 0;
  double wall_time = 0.0;
};

/// State handed to the observer after each vertex enumeration of A0.
struct IterationSnapshot {
  int iteration = 0;
  const PolyhedronH* A0_h = nullptr;
  const PolyhedronV* A0_v = nullptr;
};

struct RunOptions {
  InitVariant variant = InitVariant::Box;
  double beta = 0.5;
  int max_iterations = 200;
  long max_scalarizations = 100000;
  /// Point of the image used by the Pascoletti-Serafini problems; A x0 of the
  /// phase-one point when absent.
  std::optional<Vec> v;
  KernelOptions kernel;
  std::function<void(const IterationSnapshot&)> observer;
  std::ostream* log = nullptr;
};

/// A direction moved to the tolerance set, with the inner direction that absorbed it.
struct DeltaEntry {
  Vec d;
  Vec witness;
};

struct SolutionBundle {
  int n = 0;
  int a = 0;
  std::vector<Vec> X_bar;
  std::vector<Vec> Y_in;
  std::vector<Vec> Y_out;
  PolyhedronH A0_h;
  PolyhedronV A0_v;
  RunStats stats;
  Termination termination = Termination::BoundedConverged;
  Tolerances tolerances;
  std::vector<Cut> cuts;
  std::vector<DeltaEntry> delta;
  Vec v;
};

/// Bounded driver: weighted sums along the initial weights, then norm
/// problems at the vertices of A0 until each is within epsilon of A[X_bar].
/// Throws UnboundedProblem if an initial weighted sum is unbounded.
SolutionBundle solve_bounded(const ProblemInstance& inst, const Tolerances& tol,
                             const RunOptions& opts = {});

/// Outer and inner approximation of the recession cone of cl A[X].
/// The returned bundle carries X_bar, A0, Y_in, Y_out and the tolerance set.
SolutionBundle approximate_recession(const ProblemInstance& inst, const Tolerances& tol,
                                     const RunOptions& opts = {});

/// General driver: the recession phase followed by the bounded iteration,
/// with Y_out recomputed from the final A0.
SolutionBundle solve_general(const ProblemInstance& inst, const Tolerances& tol,
                             const RunOptions& opts = {});

/// The initial weights: +-e^i for Box, e^1..e^a and -1 for Simplex.
std::vector<Vec> initial_weights(int a, InitVariant v);

}  // namespace capprox
