#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cproj/errors.hpp"
#include "cproj/polyhedron.hpp"
#include "oracles.hpp"

using namespace capprox;
using oracle::vec;

namespace {

PolyhedronH box2() {
  PolyhedronH P{2, {}};
  P = intersect(P, {make_halfspace(vec({1, 0}), 1), make_halfspace(vec({-1, 0}), 0),
                    make_halfspace(vec({0, 1}), 1), make_halfspace(vec({0, -1}), 0)});
  return P;
}

PolyhedronH random_polytope(std::mt19937_64& rng, int dim, int cuts) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  PolyhedronH P{dim, {}};
  std::vector<Halfspace> hs;
  for (int i = 0; i < dim; ++i) {
    hs.push_back(make_halfspace(Vec::Unit(dim, i), 1));
    hs.push_back(make_halfspace(-Vec::Unit(dim, i), 1));
  }
  for (int k = 0; k < cuts; ++k) {
    Vec w(dim);
    for (int i = 0; i < dim; ++i) w(i) = g(rng);
    hs.push_back(make_halfspace(w, u(rng) * w.lpNorm<1>()));
  }
  return intersect(P, hs);
}

}  // namespace

TEST_CASE("halfspaces are l1-normalized") {
  const Halfspace h = make_halfspace(vec({3, -1}), 8);
  CHECK(h.w.lpNorm<1>() == doctest::Approx(1.0));
  CHECK(h.alpha == doctest::Approx(2.0));
  CHECK_THROWS_AS(make_halfspace(vec({0, 0}), 1), std::invalid_argument);
}

TEST_CASE("dd_convert on the unit square") {
  const PolyhedronV V = dd_convert(box2());
  CHECK(V.rays.empty());
  CHECK(oracle::same_points(V.vertices, {vec({0, 0}), vec({1, 0}), vec({0, 1}), vec({1, 1})}, 1e-12));
}

TEST_CASE("dd_convert on a wedge") {
  PolyhedronH P{2, {}};
  P = intersect(P, {make_halfspace(vec({1, -1}), 0), make_halfspace(vec({-1, -1}), 0)});
  const PolyhedronV V = dd_convert(P);
  CHECK(oracle::same_points(V.vertices, {vec({0, 0})}, 1e-12));
  CHECK(oracle::same_points(V.rays, {vec({0.5, 0.5}), vec({-0.5, 0.5})}, 1e-12));
  CHECK(oracle::same_points(V.vertices, oracle::brute_vertices(P), 1e-12));
}

TEST_CASE("dd_convert errors") {
  PolyhedronH P{1, {}};
  P = intersect(P, {make_halfspace(vec({1}), -1), make_halfspace(vec({-1}), -1)});
  CHECK_THROWS_AS(dd_convert(P), EmptyPolyhedron);
  CHECK_THROWS_AS(dd_convert(PolyhedronH{7, {}}), DimensionGuardExceeded);
}

TEST_CASE("dd_convert on lines and halfplanes") {
  PolyhedronH half{2, {}};
  half = intersect(half, {make_halfspace(vec({0, -1}), 0)});
  const PolyhedronV V = dd_convert(half);
  REQUIRE(V.vertices.size() == 1);
  CHECK(V.vertices[0].norm() <= 1e-12);
  CHECK(oracle::same_points(V.rays, {vec({1, 0}), vec({-1, 0}), vec({0, 1})}, 1e-12));

  const PolyhedronV whole = dd_convert(PolyhedronH{2, {}});
  CHECK(whole.vertices.size() == 1);
  CHECK(whole.rays.size() == 4);
}

TEST_CASE("random polytopes agree with brute-force enumeration") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 2 + trial % 2;
    const PolyhedronH P = random_polytope(rng, dim, 2 + trial % 7);
    const PolyhedronV V = dd_convert(P);
    CHECK(V.rays.empty());
    CHECK(oracle::same_points(V.vertices, oracle::brute_vertices(P), 1e-7));
    for (const auto& v : V.vertices) CHECK(contains(P, v, 1e-7));
  }
}

TEST_CASE("every facet of a random polytope is supported") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + trial % 2;
    const PolyhedronH P = random_polytope(rng, dim, 6);
    const PolyhedronV V = dd_convert(P);
    const PolyhedronH F = hull_h(dim, V.vertices, {});
    for (const auto& h : F.halfspaces) {
      int tight = 0;
      for (const auto& v : V.vertices)
        if (std::abs(h.w.dot(v) - h.alpha) <= 1e-7) ++tight;
      CHECK(tight >= dim);
    }
    // hull_h recovers the same polytope.
    CHECK(oracle::same_points(dd_convert(F).vertices, V.vertices, 1e-7));
  }
}

TEST_CASE("recession cone, l1 ball and caps") {
  const PolyhedronH rc = recession_cone_h(box2());
  CHECK(oracle::same_points(dd_convert(rc).vertices, {vec({0, 0})}, 1e-12));
  CHECK(dd_convert(rc).rays.empty());
  CHECK(cone_cap_directions(rc).empty());

  PolyhedronH half{2, {}};
  half = intersect(half, {make_halfspace(vec({0, -1}), 3)});
  const PolyhedronH hc = recession_cone_h(half);
  CHECK(hc.halfspaces[0].alpha == 0.0);
  CHECK(contains(hc, vec({5, 1}), 0));
  CHECK_FALSE(contains(hc, vec({0, -1}), 1e-9));

  CHECK(unit_l1_ball(1).halfspaces.size() == 2);
  CHECK(oracle::same_points(dd_convert(unit_l1_ball(2)).vertices,
                            {vec({1, 0}), vec({-1, 0}), vec({0, 1}), vec({0, -1})}, 1e-12));
  const auto b3 = unit_l1_ball(3);
  CHECK(b3.halfspaces.size() == 8);
  CHECK(dd_convert(b3).vertices.size() == 6);

  PolyhedronH wedge{2, {}};
  wedge = intersect(wedge, {make_halfspace(vec({1, -1}), 0), make_halfspace(vec({-1, -1}), 0)});
  CHECK(oracle::same_points(cone_cap_directions(wedge), {vec({0, 1}), vec({0.5, 0.5}), vec({-0.5, 0.5})}, 1e-12));

  // A line through the origin.
  const double s = std::sin(M_PI / 3), c = std::cos(M_PI / 3);
  PolyhedronH line{3, {}};
  line = intersect(line, {make_halfspace(vec({1, 0, 0}), 0), make_halfspace(vec({-1, 0, 0}), 0),
                          make_halfspace(vec({0, c, -s}), 0), make_halfspace(vec({0, -c, s}), 0)});
  const Vec u = vec({0, s, c}) / (s + c);
  CHECK(oracle::same_points(cone_cap_directions(line), {u, Vec(-u)}, 1e-9));
  CHECK(u(1) == doctest::Approx(0.634).epsilon(1e-3));
}

TEST_CASE("cap directions span the cone") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    PolyhedronH C{3, {}};
    std::vector<Halfspace> hs;
    for (int k = 0; k < 4; ++k) hs.push_back(make_halfspace(vec({g(rng), g(rng), -2.0 - std::abs(g(rng))}), 0));
    C = intersect(C, hs);
    const auto dirs = cone_cap_directions(C);
    REQUIRE_FALSE(dirs.empty());
    for (const auto& d : dirs) {
      CHECK(d.lpNorm<1>() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(contains(C, d, 1e-7));
    }
    // Random members of C are nonnegative combinations of the cap directions.
    for (int k = 0; k < 50; ++k) {
      const Vec y = vec({g(rng), g(rng), g(rng)});
      if (!contains(C, y, 0)) continue;
      CHECK(point_polytope_distance(y / y.lpNorm<1>(), {Vec::Zero(3)}, dirs) <= 1e-7);
    }
  }
}

TEST_CASE("diameter") {
  CHECK(diameter({vec({0, 1})}) == 0.0);
  CHECK(diameter({vec({0.3789, 0.6211}), vec({0.3459, 0.6541})}) == doctest::Approx(0.066).epsilon(1e-9));
  CHECK(diameter({vec({1, 0}), vec({0, 1}), vec({-1, 0})}) == 2.0);
  CHECK(diameter({vec({-1, 0}), vec({0, 1}), vec({1, 0})}) == 2.0);
}

TEST_CASE("hausdorff distance") {
  const PolyhedronV sq{2, {vec({0, 0}), vec({1, 0}), vec({0, 1}), vec({1, 1})}, {}};
  CHECK(hausdorff(sq, sq) <= 1e-9);
  const PolyhedronV seg{2, {vec({0, 0}), vec({1, 0})}, {}};
  const PolyhedronV pt{2, {vec({0, 0})}, {}};
  CHECK(hausdorff(seg, pt) == doctest::Approx(1.0).epsilon(1e-7));
  const PolyhedronV tri{2, {vec({0, 0}), vec({1, 0}), vec({0, 1})}, {}};
  const PolyhedronV sh{2, {vec({0.1, 0}), vec({1.1, 0}), vec({0.1, 1})}, {}};
  const double h = hausdorff(tri, sh);
  CHECK(h == doctest::Approx(0.1).epsilon(1e-6));
  // Sampling oracle: the farthest vertex distance, measured by dense convex weights.
  double sampled = 0;
  for (const auto& v : tri.vertices) sampled = std::max(sampled, oracle::sampled_distance(v, sh.vertices));
  for (const auto& v : sh.vertices) sampled = std::max(sampled, oracle::sampled_distance(v, tri.vertices));
  CHECK(std::abs(sampled - h) <= 1e-2);
  CHECK(hausdorff(tri, sh) == doctest::Approx(hausdorff(sh, tri)).epsilon(1e-9));
  const PolyhedronV ray{2, {vec({0, 0})}, {vec({1, 0})}};
  CHECK_THROWS_AS(hausdorff(ray, pt), UnboundedInput);
}

TEST_CASE("random hausdorff against a grid oracle") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Vec> a, b;
    for (int k = 0; k < 4; ++k) {
      a.push_back(vec({u(rng), u(rng)}));
      b.push_back(vec({u(rng), u(rng)}));
    }
    const double h = hausdorff(PolyhedronV{2, a, {}}, PolyhedronV{2, b, {}});
    double s = 0;
    for (const auto& p : a) s = std::max(s, oracle::sampled_distance(p, b, 400));
    for (const auto& p : b) s = std::max(s, oracle::sampled_distance(p, a, 400));
    // Pairs of hull vertices only bound the distance from above.
    CHECK(h <= s + 1e-7);
    CHECK(h >= 0.0);
  }
}

TEST_CASE("intersect and contains") {
  PolyhedronH P{2, {}};
  int added = 0;
  P = intersect(P, {make_halfspace(vec({1, 0}), 1)}, 1e-8, &added);
  CHECK(added == 1);
  P = intersect(P, {make_halfspace(vec({2, 0}), 2)}, 1e-8, &added);
  CHECK(added == 0);
  CHECK(P.halfspaces.size() == 1);

  const PolyhedronH tri = intersect(box2(), {make_halfspace(vec({1, 1}), 1)});
  CHECK(oracle::same_points(dd_convert(tri).vertices, {vec({0, 0}), vec({1, 0}), vec({0, 1})}, 1e-12));

  CHECK(contains(PolyhedronH{2, {}}, vec({0, 0}), 0));
  CHECK_FALSE(contains(box2(), vec({2, 0}), 1e-9));
  CHECK(contains(box2(), vec({1 + 1e-12, 0}), 1e-9));
}

TEST_CASE("point to polytope distance") {
  const std::vector<Vec> sq = {vec({0, 0}), vec({1, 0}), vec({0, 1}), vec({1, 1})};
  CHECK(point_polytope_distance(vec({0.5, 0.5}), sq) <= 1e-8);
  CHECK(point_polytope_distance(vec({2, 2}), sq) == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(point_polytope_distance(vec({0.5, -1}), sq) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(point_polytope_distance(vec({5, 0.5}), {vec({0, 0})}, {vec({1, 0})}) == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("dedup keeps one of each cluster") {
  const auto d = dedup_points({vec({1, 0}), vec({0, 1}), vec({1 + 1e-12, 0})}, 1e-9);
  CHECK(d.size() == 2);
}
