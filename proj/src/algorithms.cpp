#include "cproj/algorithms.hpp"

#include "cproj/errors.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

namespace capprox {

std::string to_string(InitVariant v) { return v == InitVariant::Box ? "box" : "simplex"; }

std::string to_string(Termination t) {
  switch (t) {
    case Termination::BoundedConverged: return "BoundedConverged";
    case Termination::RecessionFoundConverged: return "RecessionFoundConverged";
    case Termination::ThinConeConverged: return "ThinConeConverged";
  }
  return "BoundedConverged";
}

InitVariant parse_variant(const std::string& s) {
  if (s == "box") return InitVariant::Box;
  if (s == "simplex") return InitVariant::Simplex;
  throw std::invalid_argument("unknown init variant '" + s + "'");
}

Termination parse_termination(const std::string& s) {
  if (s == "BoundedConverged") return Termination::BoundedConverged;
  if (s == "RecessionFoundConverged") return Termination::RecessionFoundConverged;
  if (s == "ThinConeConverged") return Termination::ThinConeConverged;
  throw ParseError("unknown termination '" + s + "'");
}

std::vector<Vec> initial_weights(int a, InitVariant v) {
  std::vector<Vec> ws;
  for (int i = 0; i < a; ++i) ws.push_back(Vec::Unit(a, i));
  if (v == InitVariant::Box) {
    for (int i = 0; i < a; ++i) ws.push_back(-Vec::Unit(a, i));
  } else {
    ws.push_back(-Vec::Ones(a));
  }
  return ws;
}

namespace {

using Clock = std::chrono::steady_clock;

bool near_any(const Vec& d, const std::vector<Vec>& set, double tol) {
  for (const auto& s : set)
    if ((d - s).lpNorm<1>() <= tol) return true;
  return false;
}

class Driver {
public:
  Driver(const ProblemInstance& inst, const Tolerances& tol, const RunOptions& opts)
      : inst_(inst), opts_(opts), start_(Clock::now()) {
    tol.validate();
    validate_instance(inst);
    if (!(opts.beta > 0.0 && opts.beta < 1.0)) throw std::invalid_argument("beta must lie in (0,1)");
    opts_.kernel.dedup_tol = tol.dedup_tol;
    const Vec guess = inst.known_point ? *inst.known_point : Vec();
    ctx_ = make_context(inst, tol, guess);
    b_.n = inst.n;
    b_.a = inst.a;
    b_.tolerances = tol;
    b_.A0_h.dim = inst.a;
    b_.v = opts.v ? *opts.v : Vec(inst.A * ctx_.interior);
    if (b_.v.size() != inst.a) throw DimensionMismatch("image point has wrong length");
  }

  // Step 2 of the bounded driver / step 3 of the recession phase.
  bool initial_weighted_sums(bool require_bounded) {
    bool all_bounded = true;
    for (const auto& w : initial_weights(inst_.a, opts_.variant)) {
      const ScalarizationOutcome out = scalarize([&] { return weighted_sum(ctx_, w); });
      if (out.status == OutcomeStatus::Unbounded) {
        if (require_bounded)
          throw UnboundedProblem("weighted sum is unbounded; the problem needs the general driver");
        all_bounded = false;
        continue;
      }
      add_point(out.x);
      add_cuts({*out.cut});
    }
    log("initial weighted sums done, bounded=" + std::string(all_bounded ? "yes" : "no"));
    return all_bounded;
  }

  void recession_phase() {
    const double delta = b_.tolerances.delta;
    const bool bounded = initial_weighted_sums(false);
    if (!bounded) b_.Y_out = cap_directions();

    // Search for a recession direction.
    while (b_.Y_in.empty() && diameter(b_.Y_out) > delta) {
      next_iteration();
      std::vector<Vec> dirs;
      Vec sum = Vec::Zero(inst_.a);
      for (const auto& d : b_.Y_out) sum += d;
      if (sum.lpNorm<1>() > 1e-9) dirs.push_back(sum / sum.lpNorm<1>());
      for (const auto& d : b_.Y_out) dirs.push_back(d);
      std::vector<Cut> cuts;
      for (const auto& d : dirs) pascoletti_step(d, cuts);
      add_cuts(cuts);
      b_.Y_out = cap_directions();
      log("search pass: |Y_in|=" + std::to_string(b_.Y_in.size()) +
          " |Y_out|=" + std::to_string(b_.Y_out.size()));
    }

    // Refine the outer cone between known recession directions.
    while (diameter(b_.Y_out) > delta) {
      std::vector<Vec> pending;
      for (const auto& d : b_.Y_out) {
        if (near_any(d, b_.Y_in, b_.tolerances.dedup_tol)) continue;
        bool in_delta = false;
        for (const auto& e : b_.delta)
          if ((d - e.d).lpNorm<1>() <= b_.tolerances.dedup_tol) in_delta = true;
        if (!in_delta) pending.push_back(d);
      }
      if (pending.empty() || b_.Y_in.empty()) break;
      next_iteration();
      std::vector<Cut> cuts;
      for (const auto& d : pending) {
        std::size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < b_.Y_in.size(); ++i) {
          const double dist = (d - b_.Y_in[i]).lpNorm<1>();
          if (dist < best_dist) {
            best_dist = dist;
            best = i;
          }
        }
        const Vec r = b_.Y_in[best];
        if (best_dist <= delta) {
          b_.delta.push_back(DeltaEntry{d, r});
          continue;
        }
        Vec db = opts_.beta * d + (1.0 - opts_.beta) * r;
        const double nb = db.lpNorm<1>();
        if (!(nb > 1e-12)) throw NumericalFailure("interpolated direction vanished");
        db /= nb;
        pascoletti_step(db, cuts);
      }
      if (add_cuts(cuts) > 0) b_.Y_out = cap_directions();
      log("refine pass: |Y_in|=" + std::to_string(b_.Y_in.size()) +
          " |Y_out|=" + std::to_string(b_.Y_out.size()) + " |Delta|=" + std::to_string(b_.delta.size()));
    }
  }

  // Step 3 of the bounded and general drivers.
  void vertex_iterations() {
    const double eps = b_.tolerances.epsilon;
    int pass = 0;
    for (;;) {
      next_iteration();
      ++pass;
      evaluate();
      if (opts_.observer) opts_.observer(IterationSnapshot{pass, &b_.A0_h, &b_.A0_v});
      std::vector<Cut> cuts;
      for (const auto& v : b_.A0_v.vertices) {
        bool cached = false;
        for (const auto& c : cache_) {
          if ((c - v).lpNorm<1>() <= b_.tolerances.dedup_tol) {
            cached = true;
            break;
          }
        }
        if (cached) {
          ++b_.stats.cache_hits;
          continue;
        }
        const ScalarizationOutcome out = scalarize([&] { return norm_min(ctx_, v); });
        add_point(out.x);
        if (out.z.lpNorm<1>() > eps && out.cut) cuts.push_back(*out.cut);
        else cache_.push_back(v);
      }
      const int added = add_cuts(cuts);
      log("vertex pass " + std::to_string(pass) + ": vertices=" + std::to_string(b_.A0_v.vertices.size()) +
          " cuts=" + std::to_string(added));
      if (added == 0) break;
    }
  }

  void finalize_directions() {
    if (b_.A0_v.rays.empty()) b_.Y_out.clear();
    else b_.Y_out = cap_directions();
  }

  void evaluate() {
    b_.A0_v = dd_convert(b_.A0_h, opts_.kernel);
    ++b_.stats.n_polyhedron_evals;
  }

  SolutionBundle finish() {
    if (!b_.Y_in.empty()) b_.termination = Termination::RecessionFoundConverged;
    else if (!b_.Y_out.empty()) b_.termination = Termination::ThinConeConverged;
    else b_.termination = Termination::BoundedConverged;
    b_.stats.n_scalarizations = ctx_.solves;
    b_.stats.wall_time = std::chrono::duration<double>(Clock::now() - start_).count();
    return b_;
  }

private:
  template <class F>
  ScalarizationOutcome scalarize(F&& f) {
    if (ctx_.solves >= opts_.max_scalarizations)
      throw IterationLimit("scalarization budget of " + std::to_string(opts_.max_scalarizations) + " exhausted");
    return f();
  }

  void next_iteration() {
    if (++b_.stats.n_iterations > opts_.max_iterations)
      throw IterationLimit("more than " + std::to_string(opts_.max_iterations) + " iterations");
  }

  void pascoletti_step(const Vec& d, std::vector<Cut>& cuts) {
    const ScalarizationOutcome out = scalarize([&] { return pascoletti_serafini(ctx_, b_.v, d); });
    if (out.status == OutcomeStatus::Unbounded) {
      if (!near_any(d, b_.Y_in, b_.tolerances.dedup_tol)) b_.Y_in.push_back(d);
      return;
    }
    add_point(out.x);
    cuts.push_back(*out.cut);
  }

  std::vector<Vec> cap_directions() {
    ++b_.stats.n_polyhedron_evals;
    return cone_cap_directions(b_.A0_h, opts_.kernel);
  }

  void add_point(const Vec& x) {
    const double tol = b_.tolerances.dedup_tol;
    for (const auto& p : b_.X_bar)
      if ((p - x).lpNorm<1>() <= tol * (1.0 + p.lpNorm<1>())) return;
    b_.X_bar.push_back(x);
  }

  int add_cuts(const std::vector<Cut>& cuts) {
    int added = 0;
    for (const auto& c : cuts) {
      int k = 0;
      b_.A0_h = intersect(b_.A0_h, {c.halfspace}, b_.tolerances.dedup_tol, &k);
      if (k > 0) {
        b_.cuts.push_back(c);
        ++added;
      }
    }
    return added;
  }

  void log(const std::string& msg) {
    if (opts_.log) *opts_.log << msg << "\n";
  }

  const ProblemInstance& inst_;
  RunOptions opts_;
  ScalarizationContext ctx_;
  SolutionBundle b_;
  std::vector<Vec> cache_;
  Clock::time_point start_;
};

}  // namespace

SolutionBundle solve_bounded(const ProblemInstance& inst, const Tolerances& tol, const RunOptions& opts) {
  Driver drv(inst, tol, opts);
  drv.initial_weighted_sums(true);
  drv.vertex_iterations();
  return drv.finish();
}

SolutionBundle approximate_recession(const ProblemInstance& inst, const Tolerances& tol,
                                     const RunOptions& opts) {
  Driver drv(inst, tol, opts);
  drv.recession_phase();
  drv.evaluate();
  return drv.finish();
}

SolutionBundle solve_general(const ProblemInstance& inst, const Tolerances& tol, const RunOptions& opts) {
  Driver drv(inst, tol, opts);
  drv.recession_phase();
  drv.vertex_iterations();
  drv.finalize_directions();
  return drv.finish();
}

}  // namespace capprox
