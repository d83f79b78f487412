#pragma once

#include "cproj/polyhedron.hpp"
#include "cproj/problem.hpp"

#include <optional>

namespace capprox {

enum class CutSource { WeightedSum, PascolettiSerafini, NormMin };

/// A halfspace containing A[X], loosened by `shift` (same units as the
/// normalized halfspace) to cover the solver's optimality gap.
struct Cut {
  Halfspace halfspace;
  CutSource source = CutSource::WeightedSum;
  Vec generator_x;
  double shift = 0.0;
};

enum class OutcomeStatus { Optimal, Unbounded };

struct ScalarizationOutcome {
  OutcomeStatus status = OutcomeStatus::Optimal;
  Vec x;
  Vec image;          // A x
  double alpha = 0.0; // Pascoletti-Serafini step length
  Vec z;              // A x - v for the norm problem
  Vec lambda;
  std::optional<Cut> cut;
  double objective = 0.0;
  /// Recession direction of X found by the certificate, when it fired.
  Vec ray;
  double kkt_residual = 0.0;
};

/// Shared state of the scalarizations for one instance: tolerances, a
/// strictly feasible point, and the solve counter.
struct ScalarizationContext {
  const ProblemInstance* inst = nullptr;
  Tolerances tol;
  Vec interior;
  long solves = 0;
  // Last Pascoletti-Serafini base point and a strictly feasible preimage of it.
  Vec ps_anchor_v;
  Vec ps_anchor_x;
};

/// Runs phase one unless `interior` is given and strictly feasible.
ScalarizationContext make_context(const ProblemInstance& inst, const Tolerances& tol,
                                  const Vec& interior = Vec());

/// min w^T A x over X; cut {y : w^T y >= w^T A x* - shift}.
ScalarizationOutcome weighted_sum(ScalarizationContext& ctx, const Vec& w);

/// max alpha s.t. A x = v + alpha d, x in X; cut {y : lambda^T y <= lambda^T A x* + shift}
/// with lambda^T d = 1.
ScalarizationOutcome pascoletti_serafini(ScalarizationContext& ctx, const Vec& v, const Vec& d);

/// min ||A x - v||_2 over X; lambda = z/||z|| and cut {y : lambda^T y >= lambda^T A x* - shift}.
/// No cut when ||z|| <= solver_tol.
ScalarizationOutcome norm_min(ScalarizationContext& ctx, const Vec& v);

}  // namespace capprox
