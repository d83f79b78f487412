// Prints one PASS/FAIL line per acceptance criterion and exits non-zero on any failure.

#include "cproj/barrier.hpp"
#include "cproj/verify.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace capprox;
using oracle::vec;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int k, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("criterion %d: %s (%.2f s)%s\n", k, o.pass ? "PASS" : "FAIL", secs, o.detail.str().c_str());
  std::fflush(stdout);
}

double seconds(const SolutionBundle& b) { return b.stats.wall_time; }

std::string counters(const SolutionBundle& b, long ref_opt, long ref_evals) {
  std::ostringstream os;
  os << " optimizations=" << b.stats.n_scalarizations << " (reference " << ref_opt << ")"
     << " polyhedron_evals=" << b.stats.n_polyhedron_evals << " (reference " << ref_evals << ")";
  return os.str();
}

Vec l1(Vec d) { return d / d.lpNorm<1>(); }

bool vertex_check(const SolutionBundle& b, const ProblemInstance& inst, Outcome& o) {
  const auto rep = verify_bundle(b, inst);
  const auto* c3 = rep.find("c3_vertex_distance");
  if (!c3) return false;
  o.detail << " c3=" << c3->value << "<=" << c3->limit;
  return c3->passed;
}

// Mirrors the duality identities between the three scalarizations.
void duality_residuals(const ProblemInstance& inst, double& worst_ps, double& worst_nm, double& worst_kkt) {
  Tolerances tol;
  auto ctx = make_context(inst, tol, inst.known_point ? *inst.known_point : Vec());
  const Vec v = inst.A * ctx.interior;
  for (int i = 0; i < inst.a; ++i) {
    for (double sgn : {1.0, -1.0}) {
      const Vec d = sgn * Vec::Unit(inst.a, i);
      const auto ps = pascoletti_serafini(ctx, v, d);
      if (ps.status != OutcomeStatus::Optimal) continue;
      const auto ws = weighted_sum(ctx, -ps.lambda);
      if (ws.status != OutcomeStatus::Optimal) {
        worst_ps = std::numeric_limits<double>::infinity();
        continue;
      }
      worst_ps = std::max(worst_ps, std::abs(-ps.lambda.dot(v) - ws.objective - ps.alpha));
      worst_kkt = std::max({worst_kkt, ps.kkt_residual, ws.kkt_residual});
      const Vec p = v + (ps.alpha + 1.0) * d;
      const auto nm = norm_min(ctx, p);
      const auto ws2 = weighted_sum(ctx, nm.lambda);
      if (ws2.status != OutcomeStatus::Optimal) {
        worst_nm = std::numeric_limits<double>::infinity();
        continue;
      }
      worst_nm = std::max(worst_nm, std::abs(nm.objective - (ws2.objective - nm.lambda.dot(p))));
      worst_kkt = std::max({worst_kkt, nm.kkt_residual, ws2.kkt_residual});
    }
  }
}

}  // namespace

int main() {
  const double s30 = std::sin(M_PI / 6), c30 = std::cos(M_PI / 6);

  criterion(1, [](Outcome& o) {
    const auto inst = load_instance(oracle::data("example2_theta0.json"));
    RunOptions ro;
    ro.v = vec({0, 2});
    const auto b = solve_general(inst, Tolerances{}, ro);
    o.require(b.Y_in.size() == 1 && (b.Y_in[0] - vec({0, 1})).lpNorm<Eigen::Infinity>() <= 1e-6, "Y_in = {(0,1)}");
    const std::vector<Vec> expected = {vec({-0.0327, 0.9673}), vec({0, 1}), vec({0.0327, 0.9673})};
    o.require(b.Y_out.size() == 3, "|Y_out| = 3");
    o.require(oracle::same_points(b.Y_out, expected, 0.02), "Y_out within 0.02 of the expected cone");
    o.require(seconds(b) < 60, "runtime");
    o.detail << " Y_out=";
    for (const auto& d : b.Y_out) o.detail << "(" << d(0) << "," << d(1) << ")";
    o.detail << counters(b, 153, 13);
  });

  criterion(2, [&](Outcome& o) {
    const auto inst = load_instance(oracle::data("example2_theta30.json"));
    const auto b = solve_general(inst, Tolerances{});
    o.require(b.Y_in.empty(), "Y_in empty");
    o.require(b.termination == Termination::ThinConeConverged, "ThinConeConverged");
    const double diam = diameter(b.Y_out);
    o.require(diam <= 0.1, "diam(Y_out) <= 0.1");
    o.require(oracle::in_cone(l1(vec({s30, c30})), b.Y_out, 1e-6), "true direction in cone Y_out");
    o.detail << " diam=" << diam << " Y_out=";
    for (const auto& d : b.Y_out) o.detail << "(" << d(0) << "," << d(1) << ")";
    o.detail << counters(b, 130, 11);
  });

  criterion(3, [](Outcome& o) {
    const auto inst = load_instance(oracle::data("example1_2d.json"));
    const std::pair<InitVariant, std::pair<long, long>> runs[] = {{InitVariant::Box, {60, 6}},
                                                                  {InitVariant::Simplex, {54, 5}}};
    for (const auto& [variant, expected] : runs) {
      RunOptions ro;
      ro.variant = variant;
      const auto b = solve_bounded(inst, Tolerances{}, ro);
      o.detail << " " << to_string(variant) << ":";
      o.require(b.termination == Termination::BoundedConverged, "converged");
      o.require(vertex_check(b, inst, o), "c3 " + to_string(variant));
      o.require(seconds(b) < 120, "runtime");
      o.detail << counters(b, expected.first, expected.second);
      const double ratio = static_cast<double>(b.stats.n_scalarizations) / expected.first;
      o.detail << (ratio >= 0.5 && ratio <= 1.5 ? " (within 50%)" : " (outside 50%, informative)");
    }
  });

  criterion(4, [](Outcome& o) {
    const auto inst = load_instance(oracle::data("example1_3d.json"));
    const std::pair<InitVariant, std::pair<long, long>> runs[] = {{InitVariant::Box, {1544, 7}},
                                                                  {InitVariant::Simplex, {1570, 8}}};
    for (const auto& [variant, expected] : runs) {
      RunOptions ro;
      ro.variant = variant;
      const auto b = solve_bounded(inst, Tolerances{}, ro);
      o.detail << " " << to_string(variant) << ":";
      o.require(b.termination == Termination::BoundedConverged, "converged");
      o.require(vertex_check(b, inst, o), "c3 " + to_string(variant));
      o.require(seconds(b) < 1800, "runtime");
      o.detail << counters(b, expected.first, expected.second);
    }
  });

  criterion(5, [](Outcome& o) {
    const auto inst = load_instance(oracle::data("example3_tube.json"));
    const auto b = solve_general(inst, Tolerances{});
    const Vec axis = l1(vec({0, std::sin(M_PI / 3), std::cos(M_PI / 3)}));
    o.require(b.termination != Termination::BoundedConverged, "converged with a recession cone");
    o.require(oracle::in_cone(axis, b.Y_out, 1e-6), "+axis in cone Y_out");
    o.require(oracle::in_cone(-axis, b.Y_out, 1e-6), "-axis in cone Y_out");
    o.require(vertex_check(b, inst, o), "c3");
    o.detail << " termination=" << to_string(b.termination) << counters(b, 71, 7);
  });

  criterion(6, [](Outcome& o) {
    const auto inst = load_instance(oracle::data("example4_cone.json"));
    Tolerances tol;
    tol.delta = 0.2;
    const auto b = solve_general(inst, tol);
    o.require(b.termination != Termination::BoundedConverged, "converged with a recession cone");
    int missing = 0;
    for (int k = 0; k < 64; ++k) {
      const double t = 2 * M_PI * k / 64;
      if (!oracle::in_cone(l1(vec({std::cos(t), std::sin(t), 1})), b.Y_out, 1e-6)) ++missing;
    }
    o.require(missing == 0, "sampled boundary directions in cone Y_out");
    // True cone cut by the l1 ball: the apex, the axis point (0,0,1) where the
    // flat faces of the ball meet, and 256 boundary directions (chords stay
    // within 1e-4 of the exact boundary).
    PolyhedronV truth{3, {Vec::Zero(3), vec({0, 0, 1})}, {}};
    for (int k = 0; k < 256; ++k) {
      const double t = 2 * M_PI * k / 256;
      truth.vertices.push_back(l1(vec({std::cos(t), std::sin(t), 1})));
    }
    PolyhedronV outer{3, {Vec::Zero(3)}, {}};
    for (const auto& d : cone_cap_of(3, b.Y_out)) outer.vertices.push_back(d);
    const double dh = hausdorff(outer, truth);
    o.require(dh <= 0.2, "Hausdorff distance of caps <= 0.2");
    o.require(vertex_check(b, inst, o), "c3");
    o.detail << " missing=" << missing << " d_H=" << dh << counters(b, 31, 8);
  });

  criterion(7, [](Outcome& o) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> nd(2, 4), kd(2, 3);
    Tolerances tol;
    tol.epsilon = 0.05;
    double worst_in = 0, worst_dist = 0;
    long grid_total = 0;
    int solved = 0;
    const auto t0 = Clock::now();
    while (solved < 20) {
      const int n = nd(rng), k = kd(rng);
      auto inst = oracle::random_ellipsoids(rng, n, k);
      if (!inst.known_point) continue;
      const auto b = solve_bounded(inst, tol);
      double shift = 0;
      for (const auto& c : b.cuts) shift = std::max(shift, c.shift);
      // Regular grid over the bounding box of the first ellipsoid, about 10^4 nodes.
      const auto& q = std::get<QuadraticConstraint>(inst.constraints[0]);
      const Vec center = -q.P.ldlt().solve(q.q);
      const Vec half = q.P.inverse().diagonal().cwiseSqrt() * std::sqrt(2 * (0.5 * center.dot(q.P * center) - q.r));
      const int per_axis = static_cast<int>(std::ceil(std::pow(1e4, 1.0 / n)));
      std::vector<int> idx(static_cast<std::size_t>(n), 0);
      for (;;) {
        Vec x(n);
        for (int i = 0; i < n; ++i)
          x(i) = center(i) - half(i) + 2 * half(i) * idx[static_cast<std::size_t>(i)] / (per_axis - 1);
        if (satisfies_all(inst.constraints, x, 0.0)) {
          const Vec y = inst.A * x;
          for (const auto& h : b.A0_h.halfspaces) worst_in = std::max(worst_in, h.w.dot(y) - h.alpha - shift);
          ++grid_total;
        }
        int i = 0;
        while (i < n && ++idx[static_cast<std::size_t>(i)] == per_axis) idx[static_cast<std::size_t>(i++)] = 0;
        if (i == n) break;
      }
      std::vector<Vec> imgs;
      for (const auto& x : b.X_bar) imgs.push_back(inst.A * x);
      for (const auto& v : b.A0_v.vertices)
        worst_dist = std::max(worst_dist, oracle::planar_hull_distance(v, imgs) - shift);
      ++solved;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    o.require(worst_in <= 1e-6, "grid images inside A0");
    o.require(worst_dist <= 0.05, "A0 vertices within epsilon of conv A[X_bar]");
    o.require(secs < 600, "runtime");
    o.detail << " instances=" << solved << " grid_images=" << grid_total << " worst_violation=" << worst_in
             << " worst_vertex_distance=" << worst_dist;
  });

  criterion(8, [](Outcome& o) {
    double ps = 0, nm = 0, kkt = 0;
    for (const char* f : {"example1_2d.json", "example1_3d.json", "example2_theta0.json", "example2_theta30.json",
                          "example3_tube.json", "example4_cone.json"})
      duality_residuals(load_instance(oracle::data(f)), ps, nm, kkt);
    const double lim = 10 * Tolerances{}.solver_tol;
    o.require(ps <= lim, "Pascoletti-Serafini duality");
    o.require(nm <= lim, "norm problem duality");
    o.require(kkt <= 1e-5, "KKT residuals");
    // Barrier gradient against central differences on a mixed constraint set.
    Mat C(2, 3);
    C << 1, 0.5, 0, 0, 1, -0.3;
    const std::vector<Constraint> cons = {LinearConstraint{vec({1, 2, -1}), 3.0},
                                          QuadraticConstraint{Mat::Identity(3, 3), vec({0.1, 0, 0}), -4.0},
                                          SocConstraint{C, vec({0.2, -0.1}), vec({0, 0, 1}), 2.0}};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    double fd = 0;
    for (int k = 0; k < 20; ++k) {
      const Vec x = vec({u(rng), u(rng), u(rng)});
      double val = 0;
      Vec g;
      barrier_eval(cons, x, val, &g, nullptr);
      const Vec num = oracle::fd_gradient(
          [&](const Vec& y) {
            double v = 0;
            barrier_eval(cons, y, v, nullptr, nullptr);
            return v;
          },
          x);
      fd = std::max(fd, (num - g).norm() / (1 + g.norm()));
    }
    o.require(fd <= 1e-5, "finite-difference gradients");
    o.detail << " ps_residual=" << ps << " norm_residual=" << nm << " limit=" << lim << " kkt=" << kkt
             << " fd=" << fd;
  });

  criterion(9, [](Outcome& o) {
    const auto inst = load_instance(oracle::data("example1_2d.json"));
    const auto a = solve_bounded(inst, Tolerances{});
    const auto g = solve_general(inst, Tolerances{});
    const double tol = Tolerances{}.dedup_tol;
    o.require(oracle::same_points(a.X_bar, g.X_bar, tol), "same X_bar");
    bool facets = a.A0_h.halfspaces.size() == g.A0_h.halfspaces.size();
    for (std::size_t i = 0; facets && i < a.A0_h.halfspaces.size(); ++i)
      facets = (a.A0_h.halfspaces[i].w - g.A0_h.halfspaces[i].w).lpNorm<1>() <= tol &&
               std::abs(a.A0_h.halfspaces[i].alpha - g.A0_h.halfspaces[i].alpha) <= tol;
    o.require(facets, "same A0 facets");
    o.require(a.stats.n_scalarizations == g.stats.n_scalarizations &&
                  a.stats.n_polyhedron_evals == g.stats.n_polyhedron_evals,
              "same counters");
    o.detail << " |X_bar|=" << a.X_bar.size() << " facets=" << a.A0_h.halfspaces.size() << counters(g, 60, 6);
  });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
