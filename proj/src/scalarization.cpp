#include "cproj/scalarization.hpp"

#include "cproj/barrier.hpp"
#include "cproj/errors.hpp"

#include <cmath>

namespace capprox {

namespace {

BarrierOptions barrier_options(const ScalarizationContext& ctx) {
  BarrierOptions o;
  o.tol = ctx.tol.solver_tol;
  o.cap = 1e3 * ctx.tol.unbounded_cap;
  return o;
}

void add_box(ConvexProgram& prog, int n, double M) {
  for (int j = 0; j < n; ++j) {
    Vec e = Vec::Zero(prog.n);
    e(j) = 1.0;
    prog.ineq.push_back(LinearConstraint{e, M});
    prog.ineq.push_back(LinearConstraint{-e, M});
  }
}

// Solves prog with |x_j| <= b on the first n variables, growing b by 100 up to
// the cap until the solution is clear of the box. A minimizer strictly inside
// the box solves the unboxed problem; small boxes keep the barrier away from
// far ends of flat optimal faces. `pressed` reports a solution stuck at the cap.
SolveResult solve_boxed(const ConvexProgram& prog, int n, const Vec& start, const ScalarizationContext& ctx,
                        bool& pressed) {
  const double M = ctx.tol.unbounded_cap;
  double b = std::min(M, 100.0 * (1.0 + start.head(n).lpNorm<Eigen::Infinity>()));
  for (;;) {
    ConvexProgram boxed = prog;
    add_box(boxed, n, b);
    SolveResult r = solve(boxed, start, barrier_options(ctx));
    if (r.status != SolveStatus::Optimal) return r;
    r.ineq_multipliers.conservativeResize(static_cast<Eigen::Index>(prog.ineq.size()));
    pressed = r.x.head(n).lpNorm<Eigen::Infinity>() >= 0.9 * b;
    if (!pressed || b >= M) return r;
    b = std::min(M, 100.0 * b);
  }
}

Cut make_cut(const Vec& w, double alpha, double shift, CutSource src, const Vec& x) {
  const double n1 = w.lpNorm<1>();
  if (!(n1 > 0)) throw NumericalFailure("cut normal vanished");
  Cut c;
  c.halfspace = make_halfspace(w, alpha + shift);
  c.source = src;
  c.generator_x = x;
  c.shift = shift / n1;
  return c;
}

const ProblemInstance& instance_of(const ScalarizationContext& ctx) {
  if (!ctx.inst) throw std::invalid_argument("scalarization context has no instance");
  return *ctx.inst;
}

}  // namespace

ScalarizationContext make_context(const ProblemInstance& inst, const Tolerances& tol,
                                  const Vec& interior) {
  ScalarizationContext ctx;
  ctx.inst = &inst;
  ctx.tol = tol;
  if (interior.size() == inst.n && max_violation(inst.constraints, interior) < -tol.solver_tol) {
    ctx.interior = interior;
  } else {
    BarrierOptions o;
    o.tol = tol.solver_tol;
    o.cap = tol.unbounded_cap;
    Vec guess = inst.known_point ? *inst.known_point : Vec();
    ctx.interior = phase_one(inst.constraints, inst.n, o, Mat(), Vec(), guess);
  }
  return ctx;
}

ScalarizationOutcome weighted_sum(ScalarizationContext& ctx, const Vec& w) {
  const ProblemInstance& inst = instance_of(ctx);
  if (w.size() != inst.a) throw DimensionMismatch("weight has wrong length");
  if (!(w.lpNorm<1>() > 0)) throw std::invalid_argument("weight must be nonzero");
  ++ctx.solves;
  const Vec c = inst.A.transpose() * w;

  ScalarizationOutcome out;
  const UnboundedCertificate cert = certify_unbounded(inst, c, ctx.tol.solver_tol);
  if (cert.unbounded) {
    out.status = OutcomeStatus::Unbounded;
    out.ray = cert.ray;
    out.x = ctx.interior;
    out.image = inst.A * out.x;
    return out;
  }

  // The box catches infima that no recession ray certifies (min x1 over
  // x1^2 <= x2); an optimum pressed against the largest box is declared unbounded.
  ConvexProgram prog;
  prog.n = inst.n;
  prog.c = c;
  prog.ineq = inst.constraints;
  bool pressed = false;
  const SolveResult r = solve_boxed(prog, inst.n, ctx.interior, ctx, pressed);
  if (r.status != SolveStatus::Optimal) throw NumericalFailure("weighted sum did not converge");
  if (pressed) {
    out.status = OutcomeStatus::Unbounded;
    out.x = r.x;
    out.image = inst.A * r.x;
    out.objective = r.objective_value;
    return out;
  }

  out.x = r.x;
  out.image = inst.A * r.x;
  out.objective = w.dot(out.image);
  out.lambda = w;
  out.kkt_residual = r.kkt_residual;
  // w^T y >= w^T A x* - gap, stored as (-w)^T y <= -w^T A x* + gap.
  out.cut = make_cut(-w, -out.objective, r.duality_gap, CutSource::WeightedSum, r.x);
  return out;
}

ScalarizationOutcome pascoletti_serafini(ScalarizationContext& ctx, const Vec& v, const Vec& d) {
  const ProblemInstance& inst = instance_of(ctx);
  if (v.size() != inst.a || d.size() != inst.a) throw DimensionMismatch("point or direction has wrong length");
  if (!(d.lpNorm<1>() > 0)) throw std::invalid_argument("direction must be nonzero");
  ++ctx.solves;
  const int n = inst.n;

  // Strictly feasible x with A x = v; alpha starts at 0.
  Vec xv;
  const Vec at_interior = inst.A * ctx.interior;
  if ((at_interior - v).lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + v.lpNorm<Eigen::Infinity>())) {
    xv = ctx.interior;
  } else if (ctx.ps_anchor_v.size() == v.size() && (ctx.ps_anchor_v - v).lpNorm<Eigen::Infinity>() == 0.0) {
    xv = ctx.ps_anchor_x;
  } else {
    try {
      BarrierOptions o = barrier_options(ctx);
      o.cap = ctx.tol.unbounded_cap;
      xv = phase_one(inst.constraints, n, o, inst.A, v, ctx.interior);
    } catch (const FailedPhaseOne& e) {
      throw InfeasibleScalarization(std::string("point is not in the interior of the image: ") + e.what());
    }
    ctx.ps_anchor_v = v;
    ctx.ps_anchor_x = xv;
  }

  ScalarizationOutcome out;
  const UnboundedCertificate cert = certify_image_ray(inst, d, ctx.tol.solver_tol);
  if (cert.unbounded) {
    out.status = OutcomeStatus::Unbounded;
    out.ray = cert.ray;
    out.x = xv;
    out.image = inst.A * xv;
    return out;
  }

  const double M = ctx.tol.unbounded_cap;
  ConvexProgram prog;
  prog.n = n + 1;
  prog.c = Vec::Zero(n + 1);
  prog.c(n) = -1.0;
  prog.G = Mat(inst.a, n + 1);
  prog.G.leftCols(n) = inst.A;
  prog.G.col(n) = -d;
  prog.h = v;
  for (const auto& k : inst.constraints) prog.ineq.push_back(lift_constraint(k, 1));
  Vec cap_row = Vec::Zero(n + 1);
  cap_row(n) = 1.0;
  prog.ineq.push_back(LinearConstraint{cap_row, M});

  Vec start(n + 1);
  start.head(n) = xv;
  start(n) = 0.0;
  bool pressed = false;
  const SolveResult r = solve_boxed(prog, n, start, ctx, pressed);
  if (r.status != SolveStatus::Optimal) throw NumericalFailure("Pascoletti-Serafini problem did not converge");

  out.x = r.x.head(n);
  out.alpha = r.x(n);
  out.image = inst.A * out.x;
  out.objective = out.alpha;
  out.kkt_residual = r.kkt_residual;
  if (out.alpha >= 0.9 * M || pressed) {
    out.status = OutcomeStatus::Unbounded;
    return out;
  }
  // lambda from the x-part of stationarity, A^T lambda = sum_i mu grad phi_i(x*);
  // the alpha row only fixes its scale, and mixing it in lets the centering
  // error tilt the normal.
  Vec pull = Vec::Zero(n);
  for (std::size_t i = 0; i < inst.constraints.size(); ++i)
    pull += dual_term(inst.constraints[i], out.x, r.mu);
  Vec lambda = inst.A.transpose().colPivHouseholderQr().solve(pull);
  if (!lambda.allFinite() || (inst.A.transpose() * lambda - pull).norm() > 1e-6 * (1.0 + pull.norm()))
    lambda = -r.eq_multipliers;
  const double ld = lambda.dot(d);
  if (!(std::abs(ld) >= 1e-9))
    throw NumericalFailure("Pascoletti-Serafini multiplier has lambda^T d = " + std::to_string(ld));
  lambda /= ld;
  out.lambda = lambda;
  out.cut = make_cut(lambda, lambda.dot(out.image), r.duality_gap / std::abs(ld),
                     CutSource::PascolettiSerafini, out.x);
  return out;
}

ScalarizationOutcome norm_min(ScalarizationContext& ctx, const Vec& v) {
  const ProblemInstance& inst = instance_of(ctx);
  if (v.size() != inst.a) throw DimensionMismatch("point has wrong length");
  ++ctx.solves;
  ConvexProgram prog;
  prog.n = inst.n;
  prog.c = Vec::Zero(inst.n);
  prog.norm = NormObjective{inst.A, v};
  prog.ineq = inst.constraints;
  bool pressed = false;
  const SolveResult r = solve_boxed(prog, inst.n, ctx.interior, ctx, pressed);
  if (r.status != SolveStatus::Optimal || pressed) throw NumericalFailure("norm minimization did not converge");

  ScalarizationOutcome out;
  out.x = r.x;
  out.image = inst.A * r.x;
  out.z = out.image - v;
  out.objective = out.z.norm();
  out.kkt_residual = r.kkt_residual;
  if (out.objective <= ctx.tol.solver_tol) return out;
  out.lambda = out.z / out.objective;
  // The barrier's own dual is z/s with s slightly above ||z||; rescaling it to
  // unit norm inflates the gap by s/||z|| <= 1 + 2 gap/||z||.
  const double shift = r.duality_gap * (1.0 + 2.0 * r.duality_gap / out.objective);
  out.cut = make_cut(-out.lambda, -out.lambda.dot(out.image), shift, CutSource::NormMin, r.x);
  return out;
}

}  // namespace capprox
