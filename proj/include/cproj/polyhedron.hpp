#pragma once

#include "cproj/problem.hpp"

#include <vector>

namespace capprox {

/// {y : w^T y <= alpha} with ||w||_1 = 1.
struct Halfspace {
  Vec w;
  double alpha = 0.0;
};

/// Normalizes w to unit l1 norm (alpha scaled alike). Throws std::invalid_argument on w = 0.
Halfspace make_halfspace(const Vec& w, double alpha);

/// Intersection of halfspaces; the empty list is R^dim.
struct PolyhedronH {
  int dim = 0;
  std::vector<Halfspace> halfspaces;
};

/// conv(vertices) + cone(rays). Rays are l1-normalized; a lineality direction
/// appears as a pair of opposite rays, and vertices then lie in its orthogonal
/// complement.
struct PolyhedronV {
  int dim = 0;
  std::vector<Vec> vertices;
  std::vector<Vec> rays;
};

struct KernelOptions {
  int max_dim = 6;
  double dedup_tol = 1e-8;
  double zero_tol = 1e-9;
};

/// Extreme rays and lineality basis of the cone {z : B z <= 0}.
struct ConeGenerators {
  std::vector<Vec> rays;
  std::vector<Vec> lines;
};

ConeGenerators cone_generators(const Mat& B, double zero_tol = 1e-9);

/// H to V conversion by the double description method. Throws EmptyPolyhedron
/// and DimensionGuardExceeded.
PolyhedronV dd_convert(const PolyhedronH& P, const KernelOptions& opts = {});

/// Facet description of conv(points) + cone(rays); implicit equalities come
/// out as opposite halfspace pairs.
PolyhedronH hull_h(int dim, const std::vector<Vec>& points, const std::vector<Vec>& rays,
                   const KernelOptions& opts = {});

/// {d : w^T d <= 0 for every halfspace of P}.
PolyhedronH recession_cone_h(const PolyhedronH& P);

/// The 2^dim facets of {y : ||y||_1 <= 1}.
PolyhedronH unit_l1_ball(int dim, const KernelOptions& opts = {});

/// vert(C ∩ B_1) \ {0} for a homogeneous C, each scaled to unit l1 norm.
std::vector<Vec> cone_cap_directions(const PolyhedronH& C, const KernelOptions& opts = {});

/// Largest pairwise l1 distance; 0 for fewer than two points.
double diameter(const std::vector<Vec>& D);

/// l1 distance from y to conv(points) + cone(rays), via a small LP in the
/// dual variables (u, t): max u^T y - t s.t. u^T p_i <= t, u^T r_j <= 0, |u| <= 1.
double point_polytope_distance(const Vec& y, const std::vector<Vec>& points,
                               const std::vector<Vec>& rays = {}, double tol = 1e-10);

/// l1 Hausdorff distance of two bounded V-polyhedra. Throws UnboundedInput.
double hausdorff(const PolyhedronV& P, const PolyhedronV& Q);

/// Appends cuts, dropping those within dedup_tol of an existing halfspace.
/// Returns the number actually added through `added` when non-null.
PolyhedronH intersect(const PolyhedronH& P, const std::vector<Halfspace>& cuts,
                      double dedup_tol = 1e-8, int* added = nullptr);

bool contains(const PolyhedronH& P, const Vec& y, double tol);

/// Sorts points lexicographically and removes l1 near-duplicates.
std::vector<Vec> dedup_points(std::vector<Vec> pts, double tol);

}  // namespace capprox
