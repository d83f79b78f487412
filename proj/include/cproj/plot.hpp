#pragma once

#include "cproj/algorithms.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace capprox {

/// Unbounded sets are cut off at this radius: max(5, 2 * largest vertex norm).
double truncation_radius(const SolutionBundle& b, const ProblemInstance& inst);

/// The three approximations as point clouds whose convex hulls are drawn:
/// inner = conv A[X_bar] + cone Y_in, outer = A0, eps = conv A[X_bar] + cone Y_out + B_eps,
/// each with directions scaled to the radius.
struct PlotSets {
  double radius = 0.0;
  std::vector<Vec> inner;
  std::vector<Vec> outer;
  std::vector<Vec> eps;
};

PlotSets plot_sets(const SolutionBundle& b, const ProblemInstance& inst);

/// Counter-clockwise hull of planar points (monotone chain), collinear points dropped.
std::vector<Vec> convex_hull_2d(std::vector<Vec> pts);

struct Mesh {
  std::vector<Vec> vertices;
  std::vector<std::vector<int>> faces;  // counter-clockwise seen from outside
};

/// Boundary of conv(pts) in R^3. Throws DimensionMismatch for flat point sets.
Mesh convex_hull_3d(const std::vector<Vec>& pts);

void write_svg(std::ostream& out, const PlotSets& sets, const std::string& title);
void write_off(std::ostream& out, const Mesh& mesh, double radius, const std::string& title);

}  // namespace capprox
