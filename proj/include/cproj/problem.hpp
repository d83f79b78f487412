#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace capprox {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// a^T x <= b
struct LinearConstraint {
  Vec a;
  double b = 0.0;
};

/// 0.5 x^T P x + q^T x + r <= 0 with P positive semidefinite.
struct QuadraticConstraint {
  Mat P;
  Vec q;
  double r = 0.0;
};

/// ||C x + e||_2 <= f^T x + g
struct SocConstraint {
  Mat C;
  Vec e;
  Vec f;
  double g = 0.0;
};

using Constraint = std::variant<LinearConstraint, QuadraticConstraint, SocConstraint>;

/// Number of variables the constraint is written over.
int constraint_dim(const Constraint& c);

/// Constraint function value; the constraint holds iff the value is <= 0.
/// For second-order cones this is ||Cx+e|| - f^T x - g.
double constraint_value(const Constraint& c, const Vec& x);

/// Gradient of constraint_value. At Cx+e = 0 the cone term is perturbed by 1e-12.
Vec constraint_gradient(const Constraint& c, const Vec& x);

/// Feasibility of a point for every constraint, within `tol`.
bool satisfies_all(const std::vector<Constraint>& cons, const Vec& x, double tol);
double max_violation(const std::vector<Constraint>& cons, const Vec& x);

/// The data of "compute A[X]" with X given by convex constraints.
struct ProblemInstance {
  std::string name;
  int n = 0;
  int a = 0;
  Mat A;
  std::vector<Constraint> constraints;
  std::optional<Vec> known_point;
};

/// Throws DimensionMismatch / NotConvex / ParseError on invalid data.
void validate_instance(const ProblemInstance& inst, double feas_tol = 1e-7);

struct Tolerances {
  double epsilon = 0.01;
  double delta = 0.1;
  double solver_tol = 1e-8;
  double unbounded_cap = 1e6;
  double dedup_tol = 1e-8;

  /// Throws std::invalid_argument when the relations between the fields fail.
  void validate() const;
};

ProblemInstance load_instance(const std::filesystem::path& path);
ProblemInstance parse_instance(const std::string& json_text);
std::string instance_to_json(const ProblemInstance& inst);

/// Rewrites "compute {y : (z, y) in S}" with S over R^{m+k} as the image of S
/// under A = (0 | I_k).
ProblemInstance from_projection_form(std::vector<Constraint> s_constraints, int k,
                                     std::string name = "projection");

/// Recession cone of X split into exact equalities E d = 0 and conic
/// inequalities. Quadratics contribute the range of P as equalities plus
/// q^T d <= 0; second-order cones with f = 0 collapse to C d = 0.
struct RecessionCone {
  Mat equalities;  // rows, may have zero rows
  std::vector<Constraint> inequalities;
};

RecessionCone recession_cone(const ProblemInstance& inst);

/// Flat constraint list describing X_inf; equalities appear as pairs of <=.
std::vector<Constraint> recession_constraints(const ProblemInstance& inst);

/// Largest t in [0, t_max] with x + t dir feasible, by bisection. `x` must be feasible.
double ray_exit(const std::vector<Constraint>& cons, const Vec& x, const Vec& dir, double t_max,
                double tol = 1e-10);

/// Feasible samples of X: random rays from an interior point, each sample placed
/// uniformly on the feasible part of the ray (truncated at `radius`), with a share
/// of boundary points.
std::vector<Vec> sample_feasible(const ProblemInstance& inst, const Vec& interior, int count,
                                 std::mt19937_64& rng, double radius = 10.0);

}  // namespace capprox
