#pragma once

#include "cproj/problem.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace capprox {

/// min ||M x - v||_2, solved through an epigraph cone.
struct NormObjective {
  Mat M;
  Vec v;
};

/// min c^T x (or a norm objective) s.t. G x = h and convex inequalities.
struct ConvexProgram {
  int n = 0;
  Vec c;
  std::optional<NormObjective> norm;
  Mat G;  // equality rows, may be 0 x n
  Vec h;
  std::vector<Constraint> ineq;
};

enum class SolveStatus { Optimal, Unbounded, Infeasible };

struct SolveResult {
  SolveStatus status = SolveStatus::Optimal;
  Vec x;
  double objective_value = 0.0;
  Vec ineq_multipliers;
  Vec eq_multipliers;
  double kkt_residual = 0.0;
  /// Upper bound on the objective gap at x, from the barrier parameter.
  double duality_gap = 0.0;
  /// Barrier parameter of the returned central point.
  double mu = 0.0;
  int newton_steps = 0;
};

struct BarrierOptions {
  double tol = 1e-8;
  double mu0 = 1.0;
  double mu_factor = 10.0;
  /// Iterates leaving the box ||x||_inf <= cap signal an unbounded objective.
  double cap = 1e6;
  int max_newton_per_center = 5000;
  int max_outer = 60;
  std::ostream* trace = nullptr;
};

/// Log-barrier path following from a strictly feasible start. Equalities are
/// eliminated by parameterizing their solution set before the barrier loop.
SolveResult solve(const ConvexProgram& prog, const Vec& strictly_feasible_start,
                  const BarrierOptions& opts = {});

/// Contribution of one constraint to the Lagrangian gradient at a central point:
/// mu times the gradient of its barrier term. Unlike m * grad g it stays
/// defined at the apex of a cone.
Vec dual_term(const Constraint& c, const Vec& x, double mu);

/// Same, finding the start with phase_one first.
SolveResult solve(const ConvexProgram& prog, const BarrierOptions& opts = {});

/// A point with every constraint strictly satisfied (and G x = h when given).
/// Throws FailedPhaseOne when the smallest achievable max violation is >= -tol.
Vec phase_one(const std::vector<Constraint>& constraints, int n, const BarrierOptions& opts = {},
              const Mat& G = Mat(), const Vec& h = Vec(), const Vec& guess = Vec());

/// Barrier of the cone-form constraints: value, gradient and Hessian at x.
/// Linear and quadratic g contribute -log(-g); a cone ||u|| <= s contributes
/// -log(s^2 - ||u||^2). Returns false if x is outside the domain.
bool barrier_eval(const std::vector<Constraint>& cons, const Vec& x, double& value, Vec* grad,
                  Mat* hess);

/// The same constraint over `extra` additional trailing variables.
Constraint lift_constraint(const Constraint& c, int extra);

/// Barrier degree: 1 per linear/quadratic, 2 per cone.
double barrier_degree(const std::vector<Constraint>& cons);

struct UnboundedCertificate {
  bool unbounded = false;
  Vec ray;  // l1-normalized recession direction when unbounded
  double value = 0.0;
};

/// Minimizes c^T u over X_inf ∩ {||u||_1 <= 1}. A value below -solver_tol proves
/// inf_{x in X} c^T x = -inf along the returned ray.
UnboundedCertificate certify_unbounded(const ProblemInstance& inst, const Vec& c,
                                       double solver_tol);

/// Searches u in X_inf with A u = tau d, tau > 0, ||u||_1 <= 1 (maximizing tau).
/// Unbounded means the Pascoletti-Serafini problem along d is unbounded.
UnboundedCertificate certify_image_ray(const ProblemInstance& inst, const Vec& d,
                                       double solver_tol);

}  // namespace capprox
