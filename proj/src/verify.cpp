#include "cproj/verify.hpp"

#include "cproj/barrier.hpp"
#include "cproj/errors.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace capprox {

bool VerificationReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<Vec> cone_cap_of(int dim, const std::vector<Vec>& gens, const KernelOptions& kopts) {
  std::vector<Vec> nz;
  for (const auto& g : gens)
    if (g.lpNorm<1>() > 1e-12) nz.push_back(g / g.lpNorm<1>());
  if (nz.empty()) return {};
  const PolyhedronH C = hull_h(dim, {Vec::Zero(dim)}, nz, kopts);
  return cone_cap_directions(recession_cone_h(C), kopts);
}

double cap_hausdorff(int dim, const std::vector<Vec>& P, const std::vector<Vec>& Q) {
  PolyhedronV a{dim, {Vec::Zero(dim)}, {}};
  PolyhedronV b{dim, {Vec::Zero(dim)}, {}};
  for (const auto& p : P) a.vertices.push_back(p);
  for (const auto& q : Q) b.vertices.push_back(q);
  return hausdorff(a, b);
}

double max_shift(const SolutionBundle& b) {
  double s = 0.0;
  for (const auto& c : b.cuts) s = std::max(s, c.shift);
  return s;
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

CheckResult check_feasibility(const SolutionBundle& b, const ProblemInstance& inst, double tol) {
  CheckResult r{"feasibility", true, 0.0, tol, ""};
  for (const auto& x : b.X_bar) {
    if (x.size() != inst.n) {
      r.passed = false;
      r.detail = "point of wrong length";
      return r;
    }
    r.value = std::max(r.value, max_violation(inst.constraints, x));
  }
  r.passed = r.value <= tol;
  r.detail = std::to_string(b.X_bar.size()) + " points, max violation " + fmt(r.value);
  return r;
}

CheckResult check_c1_structural(const SolutionBundle& b, const KernelOptions& kopts) {
  CheckResult r{"c1_structural", true, 0.0, 1e-6, ""};
  const std::vector<Vec> a0cap = b.A0_h.halfspaces.empty()
                                     ? cone_cap_directions(PolyhedronH{b.a, {}}, kopts)
                                     : cone_cap_directions(recession_cone_h(b.A0_h), kopts);
  const std::vector<Vec> ycap = cone_cap_of(b.a, b.Y_out, kopts);
  r.value = cap_hausdorff(b.a, a0cap, ycap);
  r.passed = r.value <= r.limit;
  r.detail = "recession cap of A0 has " + std::to_string(a0cap.size()) + " directions, cone Y_out " +
             std::to_string(ycap.size()) + ", distance " + fmt(r.value);
  return r;
}

CheckResult check_c1_analytic(const SolutionBundle& b, const PolyhedronH& cone, const KernelOptions& kopts) {
  CheckResult r{"c1_analytic", true, 0.0, b.tolerances.delta + 1e-6, ""};
  const std::vector<Vec> truth = cone_cap_directions(recession_cone_h(cone), kopts);
  const std::vector<Vec> ycap = cone_cap_of(b.a, b.Y_out, kopts);
  r.value = cap_hausdorff(b.a, truth, ycap);
  // The outer cone must also contain the true one.
  for (const auto& d : truth) {
    if (ycap.empty() || point_polytope_distance(d, {Vec::Zero(b.a)}, ycap) > 1e-6) {
      r.passed = false;
      r.detail = "true direction outside cone Y_out; ";
      break;
    }
  }
  r.passed = r.passed && r.value <= r.limit;
  r.detail += "distance " + fmt(r.value) + " vs delta " + fmt(b.tolerances.delta);
  return r;
}

CheckResult check_c2(const SolutionBundle& b, const ProblemInstance& inst, const Vec& interior, double tol) {
  CheckResult r{"c2_inner_directions", true, 0.0, 1e-6, ""};
  const PolyhedronH rec = recession_cone_h(b.A0_h);
  int ok = 0;
  for (const auto& d : b.Y_in) {
    std::string why;
    if (std::abs(d.lpNorm<1>() - 1.0) > 1e-9) why = "not l1-normalized";
    else if (!contains(rec, d, 1e-7)) why = "outside the recession cone of A0";
    else {
      const UnboundedCertificate cert = certify_image_ray(inst, d, b.tolerances.solver_tol);
      if (!cert.unbounded) why = "no recession direction of X maps onto it";
      else {
        // Walk along the certified ray and compare the image direction.
        const Vec u = cert.ray;
        const Vec img = inst.A * u;
        const double cosang = img.dot(d) / std::max(img.norm() * d.norm(), 1e-300);
        r.value = std::max(r.value, 1.0 - cosang);
        if (1.0 - cosang > 1e-6) why = "image of the certified ray is off by " + fmt(1.0 - cosang);
        for (double t : {1.0, 10.0, 100.0, 1e3, 1e4}) {
          if (!satisfies_all(inst.constraints, interior + t * u, tol)) {
            why = "ray leaves X at t = " + fmt(t);
            break;
          }
        }
      }
    }
    if (why.empty()) ++ok;
    else {
      r.passed = false;
      r.detail += "direction rejected: " + why + "; ";
    }
  }
  r.detail += std::to_string(ok) + "/" + std::to_string(b.Y_in.size()) + " inner directions confirmed";
  return r;
}

CheckResult check_c3(const SolutionBundle& b, const ProblemInstance& inst) {
  const double limit = b.tolerances.epsilon + max_shift(b);
  CheckResult r{"c3_vertex_distance", true, 0.0, limit, ""};
  std::vector<Vec> images;
  images.reserve(b.X_bar.size());
  for (const auto& x : b.X_bar) images.push_back(inst.A * x);
  if (images.empty()) {
    r.passed = b.A0_v.vertices.empty();
    r.detail = "no feasible points";
    return r;
  }
  int via_lp = 0;
  for (const auto& v : b.A0_v.vertices) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : images) best = std::min(best, (v - y).lpNorm<1>());
    if (best > limit) {
      best = point_polytope_distance(v, images, b.Y_out);
      ++via_lp;
    }
    r.value = std::max(r.value, best);
  }
  r.passed = r.value <= limit;
  r.detail = std::to_string(b.A0_v.vertices.size()) + " vertices, worst distance " + fmt(r.value) +
             " (limit " + fmt(limit) + ", " + std::to_string(via_lp) + " needed the hull)";
  return r;
}

CheckResult check_cuts(const SolutionBundle& b, const ProblemInstance& inst, const Vec& interior,
                       const VerifyOptions& opts) {
  CheckResult r{"cut_audit", true, 0.0, opts.audit_slack, ""};
  std::mt19937_64 rng(opts.seed);
  const std::vector<Vec> xs = sample_feasible(inst, interior, opts.samples, rng);
  int bad = 0;
  for (const auto& x : xs) {
    const Vec y = inst.A * x;
    for (const auto& c : b.cuts) {
      const double viol = c.halfspace.w.dot(y) - c.halfspace.alpha;
      r.value = std::max(r.value, viol);
      if (viol > opts.audit_slack) ++bad;
    }
    for (const auto& h : b.A0_h.halfspaces) {
      const double viol = h.w.dot(y) - h.alpha;
      r.value = std::max(r.value, viol);
      if (viol > opts.audit_slack) ++bad;
    }
  }
  r.passed = bad == 0;
  r.detail = std::to_string(xs.size()) + " samples, " + std::to_string(b.cuts.size()) + " cuts, " +
             std::to_string(bad) + " violations, worst " + fmt(r.value);
  return r;
}

}  // namespace

VerificationReport verify_bundle(const SolutionBundle& b, const ProblemInstance& inst, const VerifyOptions& opts) {
  if (b.n != inst.n || b.a != inst.a) throw DimensionMismatch("bundle does not belong to this instance");
  KernelOptions kopts;
  kopts.dedup_tol = b.tolerances.dedup_tol;
  VerificationReport rep;
  rep.checks.push_back(check_feasibility(b, inst, opts.feas_tol));
  rep.checks.push_back(check_c1_structural(b, kopts));
  if (opts.analytic_recession) rep.checks.push_back(check_c1_analytic(b, *opts.analytic_recession, kopts));

  Vec interior;
  try {
    interior = make_context(inst, b.tolerances, inst.known_point ? *inst.known_point : Vec()).interior;
  } catch (const Error& e) {
    rep.checks.push_back(CheckResult{"interior_point", false, 0.0, 0.0, e.what()});
    return rep;
  }
  rep.checks.push_back(check_c2(b, inst, interior, opts.feas_tol));
  rep.checks.push_back(check_c3(b, inst));
  rep.checks.push_back(check_cuts(b, inst, interior, opts));
  return rep;
}

}  // namespace capprox
