#include "cproj/barrier.hpp"

#include "cproj/errors.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace capprox {

namespace {

// Rewrites c in the variables xi of x = base + N xi.
Constraint restrict(const Constraint& c, const Vec& base, const Mat& N) {
  return std::visit(
      [&](const auto& k) -> Constraint {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LinearConstraint>) {
          return LinearConstraint{N.transpose() * k.a, k.b - k.a.dot(base)};
        } else if constexpr (std::is_same_v<T, QuadraticConstraint>) {
          Mat P = N.transpose() * k.P * N;
          P = 0.5 * (P + P.transpose());
          const Vec q = N.transpose() * (k.P * base + k.q);
          const double r = 0.5 * base.dot(k.P * base) + k.q.dot(base) + k.r;
          return QuadraticConstraint{P, q, r};
        } else {
          return SocConstraint{k.C * N, k.C * base + k.e, N.transpose() * k.f, k.f.dot(base) + k.g};
        }
      },
      c);
}

struct Reduction {
  Vec base;
  Mat N;  // n x p
  bool consistent = true;
};

Reduction reduce_equalities(const Mat& G, const Vec& h, const Vec& x0) {
  Reduction red;
  const auto n = x0.size();
  if (G.rows() == 0) {
    red.base = x0;
    red.N = Mat::Identity(n, n);
    return red;
  }
  Eigen::JacobiSVD<Mat> svd(G, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-11 * std::max(1.0, smax)) ++rank;
  svd.setThreshold(1e-11);
  const Vec resid = G * x0 - h;
  red.base = x0 - svd.solve(resid);
  red.N = svd.matrixV().rightCols(n - rank);
  const double err = (G * red.base - h).lpNorm<Eigen::Infinity>();
  red.consistent = err <= 1e-8 * (1.0 + h.lpNorm<Eigen::Infinity>() + G.lpNorm<Eigen::Infinity>());
  return red;
}

double objective_at(const Vec& c, const Vec& x) { return c.dot(x); }

}  // namespace

Constraint lift_constraint(const Constraint& c, int extra) {
  return std::visit(
      [&](const auto& k) -> Constraint {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LinearConstraint>) {
          Vec a = Vec::Zero(k.a.size() + extra);
          a.head(k.a.size()) = k.a;
          return LinearConstraint{a, k.b};
        } else if constexpr (std::is_same_v<T, QuadraticConstraint>) {
          const auto n = k.q.size();
          Mat P = Mat::Zero(n + extra, n + extra);
          P.topLeftCorner(n, n) = k.P;
          Vec q = Vec::Zero(n + extra);
          q.head(n) = k.q;
          return QuadraticConstraint{P, q, k.r};
        } else {
          const auto n = k.f.size();
          Mat C = Mat::Zero(k.C.rows(), n + extra);
          C.leftCols(n) = k.C;
          Vec f = Vec::Zero(n + extra);
          f.head(n) = k.f;
          return SocConstraint{C, k.e, f, k.g};
        }
      },
      c);
}

double barrier_degree(const std::vector<Constraint>& cons) {
  double d = 0;
  for (const auto& c : cons) d += std::holds_alternative<SocConstraint>(c) ? 2.0 : 1.0;
  return d;
}

bool barrier_eval(const std::vector<Constraint>& cons, const Vec& x, double& value, Vec* grad,
                  Mat* hess) {
  value = 0.0;
  const auto n = x.size();
  if (grad) grad->setZero(n);
  if (hess) hess->setZero(n, n);
  for (const auto& c : cons) {
    if (const auto* lin = std::get_if<LinearConstraint>(&c)) {
      const double g = lin->a.dot(x) - lin->b;
      if (!(g < 0)) return false;
      value -= std::log(-g);
      if (grad) *grad += lin->a / (-g);
      if (hess) hess->noalias() += lin->a * lin->a.transpose() / (g * g);
    } else if (const auto* quad = std::get_if<QuadraticConstraint>(&c)) {
      const Vec Px = quad->P * x;
      const double g = 0.5 * x.dot(Px) + quad->q.dot(x) + quad->r;
      if (!(g < 0)) return false;
      value -= std::log(-g);
      if (grad || hess) {
        const Vec dg = Px + quad->q;
        if (grad) *grad += dg / (-g);
        if (hess) {
          hess->noalias() += dg * dg.transpose() / (g * g);
          *hess += quad->P / (-g);
        }
      }
    } else {
      const auto& soc = std::get<SocConstraint>(c);
      const Vec u = soc.C * x + soc.e;
      const double s = soc.f.dot(x) + soc.g;
      const double D = s * s - u.squaredNorm();
      if (!(s > 0) || !(D > 0)) return false;
      value -= std::log(D);
      if (grad || hess) {
        const Vec dD = 2.0 * s * soc.f - 2.0 * soc.C.transpose() * u;
        if (grad) *grad -= dD / D;
        if (hess) {
          hess->noalias() += dD * dD.transpose() / (D * D);
          hess->noalias() -= (2.0 * soc.f * soc.f.transpose() - 2.0 * soc.C.transpose() * soc.C) / D;
        }
      }
    }
  }
  return std::isfinite(value);
}

SolveResult solve(const ConvexProgram& prog, const Vec& start, const BarrierOptions& opts) {
  if (start.size() != prog.n) throw DimensionMismatch("start point has wrong length");

  // Norm objectives become min s s.t. ||M x - v|| <= s.
  if (prog.norm) {
    ConvexProgram aug;
    aug.n = prog.n + 1;
    aug.c = Vec::Zero(aug.n);
    aug.c(prog.n) = 1.0;
    if (prog.G.rows() > 0) {
      aug.G = Mat::Zero(prog.G.rows(), aug.n);
      aug.G.leftCols(prog.n) = prog.G;
      aug.h = prog.h;
    }
    for (const auto& c : prog.ineq) aug.ineq.push_back(lift_constraint(c, 1));
    Mat C = Mat::Zero(prog.norm->M.rows(), aug.n);
    C.leftCols(prog.n) = prog.norm->M;
    Vec f = Vec::Zero(aug.n);
    f(prog.n) = 1.0;
    aug.ineq.push_back(SocConstraint{C, -prog.norm->v, f, 0.0});
    Vec s0(aug.n);
    s0.head(prog.n) = start;
    s0(prog.n) = (prog.norm->M * start - prog.norm->v).norm() + 1.0;
    SolveResult r = solve(aug, s0, opts);
    SolveResult out;
    out.status = r.status;
    out.x = r.x.head(prog.n);
    out.objective_value = (prog.norm->M * out.x - prog.norm->v).norm();
    if (r.ineq_multipliers.size() > 0)
      out.ineq_multipliers = r.ineq_multipliers.head(static_cast<Eigen::Index>(prog.ineq.size()));
    out.eq_multipliers = r.eq_multipliers;
    out.kkt_residual = r.kkt_residual;
    out.duality_gap = r.duality_gap;
    out.newton_steps = r.newton_steps;
    return out;
  }

  const Vec c = prog.c.size() == prog.n ? prog.c : Vec::Zero(prog.n);
  Mat G = prog.G.rows() > 0 ? prog.G : Mat(0, prog.n);
  Vec h = prog.G.rows() > 0 ? prog.h : Vec(0);
  const Reduction red = reduce_equalities(G, h, start);
  SolveResult res;
  if (!red.consistent) {
    res.status = SolveStatus::Infeasible;
    res.x = start;
    return res;
  }
  const auto p = red.N.cols();

  std::vector<Constraint> rcons;
  rcons.reserve(prog.ineq.size());
  for (const auto& k : prog.ineq) rcons.push_back(restrict(k, red.base, red.N));
  const Vec rc = red.N.transpose() * c;
  const double theta = barrier_degree(prog.ineq);

  Vec xi = Vec::Zero(p);
  double phi = 0;
  if (!barrier_eval(rcons, xi, phi, nullptr, nullptr))
    throw NumericalFailure("barrier start is not strictly feasible");

  auto to_x = [&](const Vec& z) -> Vec { return red.base + red.N * z; };

  if (theta == 0 || p == 0) {
    if (p > 0 && rc.lpNorm<Eigen::Infinity>() > 1e-12) {
      res.status = SolveStatus::Unbounded;
      res.x = to_x(xi);
      return res;
    }
    res.x = to_x(xi);
    res.objective_value = objective_at(c, res.x);
    res.ineq_multipliers = Vec::Zero(static_cast<Eigen::Index>(prog.ineq.size()));
    res.eq_multipliers = Vec::Zero(G.rows());
    return res;
  }

  double t = 1.0 / opts.mu0;
  int newton_total = 0;
  bool diverged = false;
  Vec grad(p);
  Mat hess(p, p);

  // Last central point; round-off can stall the final stages when the
  // requested gap sits near machine precision of the data.
  Vec last_xi;
  double last_t = 0.0;
  for (int outer = 0; outer < opts.max_outer; ++outer) {
    bool centered = false;
    bool stalled = false;
    double best_lambda2 = std::numeric_limits<double>::infinity();
    int best_it = 0;
    for (int it = 0; it < opts.max_newton_per_center; ++it) {
      barrier_eval(rcons, xi, phi, &grad, &hess);
      const Vec g = t * rc + grad;
      // Jacobi scaling keeps a single stiff constraint from swamping the rest.
      const Vec dinv = hess.diagonal().cwiseAbs().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
      Mat H = dinv.asDiagonal() * hess * dinv.asDiagonal();
      const Vec rhs = -(dinv.asDiagonal() * g);
      Eigen::LDLT<Mat> ldlt(H);
      Vec y = ldlt.solve(rhs);
      if (ldlt.info() != Eigen::Success || !y.allFinite() || !ldlt.isPositive()) {
        H.diagonal().array() += 1e-13;
        ldlt.compute(H);
        y = ldlt.solve(rhs);
      }
      // One refinement pass; directions of tiny curvature (flat optimal
      // faces) lose most of their length to round-off otherwise.
      y += ldlt.solve(rhs - H * y);
      Vec step = dinv.asDiagonal() * y;
      if (!step.allFinite()) throw NumericalFailure("Newton system is singular");
      const double lambda2 = -g.dot(step);
      ++newton_total;
      if (lambda2 / 2 <= 1e-11) {
        centered = true;
        break;
      }
      // With t large the gradient carries round-off of order eps * t * |c|,
      // and the decrement stops falling well above the target.
      if (lambda2 < 0.5 * best_lambda2) {
        best_lambda2 = lambda2;
        best_it = it;
      } else if (lambda2 / 2 <= 1e-6 && it - best_it >= 50) {
        centered = true;
        break;
      }
      // Backtracking, but never below the damped length 1/(1+lambda) that
      // self-concordance proves safe; only domain violations caused by
      // round-off push the step shorter than that.
      const double lambda = std::sqrt(std::max(lambda2, 0.0));
      const double safe = lambda > 0.25 ? 1.0 / (1.0 + lambda) : 1.0;
      const double f0 = t * rc.dot(xi) + phi;
      double s = 1.0;
      bool accepted = false;
      while (s > 1e-16) {
        const Vec trial = xi + s * step;
        double phit = 0;
        if (barrier_eval(rcons, trial, phit, nullptr, nullptr)) {
          const double ft = t * rc.dot(trial) + phit;
          if (s <= safe || ft <= f0 - 0.01 * s * lambda2) {
            accepted = (s * step).lpNorm<Eigen::Infinity>() >
                       1e-15 * (1.0 + xi.lpNorm<Eigen::Infinity>());
            xi = trial;
            break;
          }
          s = std::max(0.5 * s, safe);
          continue;
        }
        s *= 0.5;
      }
      if (!accepted) {
        if (lambda2 / 2 <= 1e-6) {
          centered = true;
          break;
        }
        stalled = true;
        break;
      }
      if (to_x(xi).lpNorm<Eigen::Infinity>() > opts.cap) {
        diverged = true;
        break;
      }
    }
    if (opts.trace)
      *opts.trace << "barrier outer=" << outer << " mu=" << 1.0 / t
                  << " obj=" << objective_at(c, to_x(xi)) << "\n";
    if (diverged) break;
    if (!centered) {
      if (!stalled && to_x(xi).lpNorm<Eigen::Infinity>() > std::sqrt(opts.cap)) {
        diverged = true;
        break;
      }
      if (last_t > 0.0 && theta / last_t <= 100.0 * opts.tol) {
        xi = last_xi;
        t = last_t;
        break;
      }
      throw NumericalFailure(stalled ? "barrier line search stalled" : "centering did not converge");
    }
    last_xi = xi;
    last_t = t;
    if (theta / t <= opts.tol) break;
    t *= opts.mu_factor;
  }

  res.x = to_x(xi);
  res.newton_steps = newton_total;
  if (diverged) {
    res.status = SolveStatus::Unbounded;
    res.objective_value = -std::numeric_limits<double>::infinity();
    return res;
  }
  res.objective_value = objective_at(c, res.x);
  res.duality_gap = theta / t;
  res.mu = 1.0 / t;

  // Multipliers and KKT residual in the original coordinates.
  const double mu = 1.0 / t;
  Vec full_grad;
  double full_phi = 0;
  barrier_eval(prog.ineq, res.x, full_phi, &full_grad, nullptr);
  res.ineq_multipliers.resize(static_cast<Eigen::Index>(prog.ineq.size()));
  Vec lag = c;
  double compl_max = 0;
  for (std::size_t i = 0; i < prog.ineq.size(); ++i) {
    const auto& k = prog.ineq[i];
    double m = 0;
    if (const auto* soc = std::get_if<SocConstraint>(&k)) {
      const Vec u = soc->C * res.x + soc->e;
      const double s = soc->f.dot(res.x) + soc->g;
      m = 2.0 * mu * s / (s * s - u.squaredNorm());
    } else {
      m = mu / (-constraint_value(k, res.x));
    }
    res.ineq_multipliers(static_cast<Eigen::Index>(i)) = m;
    lag += dual_term(k, res.x, mu);
    compl_max = std::max(compl_max, std::abs(m * constraint_value(k, res.x)));
  }
  if (G.rows() > 0) {
    const Vec rhs = -(c + mu * full_grad);
    Eigen::JacobiSVD<Mat> svd(G.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    res.eq_multipliers = svd.solve(rhs);
    lag += G.transpose() * res.eq_multipliers;
  } else {
    res.eq_multipliers = Vec(0);
  }
  res.kkt_residual = std::max(lag.lpNorm<Eigen::Infinity>(), compl_max);
  return res;
}

Vec dual_term(const Constraint& c, const Vec& x, double mu) {
  double v = 0;
  Vec g;
  if (!barrier_eval({c}, x, v, &g, nullptr)) throw NumericalFailure("dual term outside the barrier domain");
  return mu * g;
}

Vec phase_one(const std::vector<Constraint>& constraints, int n, const BarrierOptions& opts,
              const Mat& G, const Vec& h, const Vec& guess) {
  Vec x0 = Vec::Zero(n);
  if (guess.size() == n) x0 = guess;
  if (G.rows() > 0) x0 -= G.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(G * x0 - h);

  if (constraints.empty()) return x0;

  // Variables (x, s): min s s.t. g_i(x) <= s, s >= -1, |x_j| <= cap.
  ConvexProgram p1;
  p1.n = n + 1;
  p1.c = Vec::Zero(n + 1);
  p1.c(n) = 1.0;
  if (G.rows() > 0) {
    p1.G = Mat::Zero(G.rows(), n + 1);
    p1.G.leftCols(n) = G;
    p1.h = h;
  }
  for (const auto& c : constraints) {
    Constraint l = lift_constraint(c, 1);
    std::visit(
        [&](auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, LinearConstraint>) k.a(n) = -1.0;
          else if constexpr (std::is_same_v<T, QuadraticConstraint>) k.q(n) = -1.0;
          else k.f(n) = 1.0;
        },
        l);
    p1.ineq.push_back(std::move(l));
  }
  Vec lower = Vec::Zero(n + 1);
  lower(n) = -1.0;
  p1.ineq.push_back(LinearConstraint{lower, 1.0});
  const std::size_t nbase = p1.ineq.size();

  Vec start(n + 1);
  start.head(n) = x0;
  start(n) = std::max(max_violation(constraints, x0), -0.5) + 1.0;

  BarrierOptions o = opts;
  o.tol = std::max(opts.tol, 1e-9);
  // A box around the guess keeps the point from drifting to the box center;
  // it grows up to the divergence cap when nothing strictly feasible is inside.
  double box = std::min(opts.cap, 10.0 * (1.0 + x0.lpNorm<Eigen::Infinity>()));
  double worst = std::numeric_limits<double>::infinity();
  for (;;) {
    p1.ineq.resize(nbase);
    for (int j = 0; j < n; ++j) {
      Vec e = Vec::Zero(n + 1);
      e(j) = 1.0;
      p1.ineq.push_back(LinearConstraint{e, x0(j) + box});
      p1.ineq.push_back(LinearConstraint{-e, box - x0(j)});
    }
    o.cap = 4.0 * (box + x0.lpNorm<Eigen::Infinity>());
    const SolveResult r = solve(p1, start, o);
    const Vec x = r.x.head(n);
    worst = max_violation(constraints, x);
    if (r.status == SolveStatus::Optimal && worst < -opts.tol && r.x(n) < -opts.tol) return x;
    if (box >= opts.cap) break;
    box = std::min(opts.cap, box * 10.0);
  }
  throw FailedPhaseOne("no strictly feasible point (max violation " + std::to_string(worst) + ")");
}

SolveResult solve(const ConvexProgram& prog, const BarrierOptions& opts) {
  Vec x0 = phase_one(prog.ineq, prog.n, opts, prog.G, prog.h);
  return solve(prog, x0, opts);
}

namespace {

// Variables (u, extra..., t) with t_i >= |u_i| and sum t <= 1. The recession
// inequalities are relaxed by eta so the program has an interior.
struct RecessionProgram {
  ConvexProgram prog;
  Vec start;
};

RecessionProgram build_recession_program(const ProblemInstance& inst, int extra, double eta) {
  const int n = inst.n;
  const int nv = n + extra + n;
  const RecessionCone rc = recession_cone(inst);
  RecessionProgram rp;
  rp.prog.n = nv;
  rp.prog.c = Vec::Zero(nv);
  for (const auto& k : rc.inequalities) {
    Constraint l = lift_constraint(k, extra + n);
    std::visit(
        [&](auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, LinearConstraint>) c.b = eta * (1.0 + c.a.norm());
          else if constexpr (std::is_same_v<T, SocConstraint>) c.g = eta;
        },
        l);
    rp.prog.ineq.push_back(std::move(l));
  }
  for (int i = 0; i < n; ++i) {
    Vec a = Vec::Zero(nv);
    a(i) = 1.0;
    a(n + extra + i) = -1.0;
    rp.prog.ineq.push_back(LinearConstraint{a, 0.0});
    a(i) = -1.0;
    rp.prog.ineq.push_back(LinearConstraint{a, 0.0});
  }
  Vec sum = Vec::Zero(nv);
  sum.tail(n).setOnes();
  rp.prog.ineq.push_back(LinearConstraint{sum, 1.0});
  if (rc.equalities.rows() > 0) {
    rp.prog.G = Mat::Zero(rc.equalities.rows(), nv);
    rp.prog.G.leftCols(n) = rc.equalities;
    rp.prog.h = Vec::Zero(rc.equalities.rows());
  }
  rp.start = Vec::Zero(nv);
  rp.start.tail(n).setConstant(0.5 / n);
  return rp;
}

void append_equalities(ConvexProgram& prog, const Mat& rows) {
  Mat G(prog.G.rows() + rows.rows(), prog.n);
  if (prog.G.rows() > 0) G.topRows(prog.G.rows()) = prog.G;
  G.bottomRows(rows.rows()) = rows;
  prog.G = G;
  prog.h = Vec::Zero(G.rows());
}

}  // namespace

UnboundedCertificate certify_unbounded(const ProblemInstance& inst, const Vec& c,
                                       double solver_tol) {
  const double eta = 1e-3 * solver_tol;
  RecessionProgram rp = build_recession_program(inst, 0, eta);
  rp.prog.c.head(inst.n) = c;
  BarrierOptions o;
  o.tol = 1e-2 * solver_tol;
  o.cap = 1e3;
  const SolveResult r = solve(rp.prog, rp.start, o);
  if (r.status != SolveStatus::Optimal) throw NumericalFailure("recession certificate program failed");
  UnboundedCertificate cert;
  cert.value = r.objective_value;
  const Vec u = r.x.head(inst.n);
  if (r.objective_value < -100 * solver_tol && u.lpNorm<1>() > 0) {
    cert.unbounded = true;
    cert.ray = u / u.lpNorm<1>();
  }
  return cert;
}

UnboundedCertificate certify_image_ray(const ProblemInstance& inst, const Vec& d,
                                       double solver_tol) {
  if (d.size() != inst.a) throw DimensionMismatch("direction has wrong length");
  const double eta = 1e-3 * solver_tol;
  RecessionProgram rp = build_recession_program(inst, 1, eta);
  const int n = inst.n;
  rp.prog.c(n) = -1.0;
  Mat rows = Mat::Zero(inst.a, rp.prog.n);
  rows.leftCols(n) = inst.A;
  rows.col(n) = -d;
  append_equalities(rp.prog, rows);
  BarrierOptions o;
  o.tol = 1e-2 * solver_tol;
  o.cap = 1e3;
  const SolveResult r = solve(rp.prog, rp.start, o);
  if (r.status != SolveStatus::Optimal) throw NumericalFailure("image-ray certificate program failed");
  UnboundedCertificate cert;
  cert.value = r.objective_value;
  const Vec u = r.x.head(n);
  if (-r.objective_value > 100 * solver_tol && u.lpNorm<1>() > 0) {
    cert.unbounded = true;
    cert.ray = u / u.lpNorm<1>();
  }
  return cert;
}

}  // namespace capprox
