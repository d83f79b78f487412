#pragma once

#include "cproj/algorithms.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace capprox {

struct CheckResult {
  std::string name;
  bool passed = true;
  double value = 0.0;  // worst observed quantity
  double limit = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};

struct VerifyOptions {
  /// Exact recession cone of A, as {d : w^T d <= 0}.
  std::optional<PolyhedronH> analytic_recession;
  int samples = 500;
  std::uint64_t seed = 1;
  double feas_tol = 1e-7;
  double audit_slack = 1e-6;
};

/// Re-checks a bundle against its instance:
///   feasibility  every x in X_bar lies in X
///   c1           cone Y_out matches the recession cone of A0 (and the analytic cone, within delta)
///   c2           every Y_in direction is a recession direction of A[X]
///   c3           every vertex of A0 is within epsilon + shift of conv A[X_bar] + cone Y_out
///   cuts         sampled images of X satisfy every recorded cut and lie in A0
VerificationReport verify_bundle(const SolutionBundle& b, const ProblemInstance& inst,
                                 const VerifyOptions& opts = {});

/// Vertices of cone(gens) ∩ B_1 without the origin; empty for no generators.
std::vector<Vec> cone_cap_of(int dim, const std::vector<Vec>& gens, const KernelOptions& kopts = {});

/// l1 Hausdorff distance of cone(P) ∩ B_1 and cone(Q) ∩ B_1, each given by its
/// nonzero cap vertices.
double cap_hausdorff(int dim, const std::vector<Vec>& P, const std::vector<Vec>& Q);

/// Largest cut shift of the bundle.
double max_shift(const SolutionBundle& b);

}  // namespace capprox
