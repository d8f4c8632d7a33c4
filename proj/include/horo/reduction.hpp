#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "horo/cocycle.hpp"
#include "horo/livsic.hpp"

// Boundary-to-interior reduction: induce the horosphere translation cocycle
// from an invariant boundary section, solve the real cohomological equation
// on horosphere levels, rebuild interior invariant sections along the
// anchored geodesics, and sample the transfer function.
namespace horo::reduction {

// The real cocycle of horosphere-level translations induced by an invariant
// boundary section: value(w) = -b_{p, alpha(sigma w)}(A(w) p).
struct TranslationCocycle {
  livsic::RealCocycle values;
  geom::ModelPoint base_point;
  int cocycle_depth = 0;
  int section_depth = 0;
};

// Tabulates the translation cocycle at depth max(cocycle, section) + 1.
// Throws InvarianceError when alpha is not invariant to tolerance.
TranslationCocycle induce_translation(const cocycle::IsometryCocycle& A,
                                      const cocycle::BoundarySection& alpha,
                                      const geom::ModelPoint& p,
                                      double invariance_tol);

// Residual of the factor relation: max over sampled (omega, h) of
// |-b_{p,alpha(T omega)}(A(omega) h) - (-b_{p,alpha(omega)}(h) + value(omega))|.
double factor_residual(const cocycle::IsometryCocycle& A,
                       const cocycle::BoundarySection& alpha,
                       const TranslationCocycle& phi, const geom::ModelPoint& p,
                       long samples, std::uint64_t seed);

// Convenience: induce the translation cocycle, then measure the residual.
double factor_check(const cocycle::IsometryCocycle& A,
                    const cocycle::BoundarySection& alpha, const geom::ModelPoint& p,
                    long samples, std::uint64_t seed, double invariance_tol = 1e-6);

// Empirical Holder constant of the translation cocycle over an exhaustive
// cylinder-pair scan.
double translation_holder_estimate(const TranslationCocycle& phi, double tau);

struct HolderConstants {
  double inverse_cocycle = 0.0;   // sup d(A(w1)^{-1} p, A(w2)^{-1} p) / d^tau
  double busemann_section = 0.0;  // sup |b_{p,a(w1)}(h) - b_{p,a(w2)}(h)| / d^tau
                                  // at h = A(w1)^{-1} p
};

// The two measured constants bounding the translation cocycle's Holder
// constant by inverse_cocycle + busemann_section.
HolderConstants measured_constants(const cocycle::IsometryCocycle& A,
                                   const cocycle::BoundarySection& alpha,
                                   const geom::ModelPoint& p, double tau);

struct ErrorBudget {
  double busemann_eval = 0.0;
  double tabulation = 0.0;
  double root_solve = 0.0;
  double total() const { return busemann_eval + tabulation + root_solve; }
};

struct PipelineOptions {
  int depth = 6;
  long orbit_budget = 0;  // 0: transitive hitting horizon
  double tau = 1.0;
  double invariance_tol = 1e-6;
  double ppo_tol = 1e-9;
  int ppo_max_period = 6;
  double root_bracket = 50.0;
  double root_tol = 1e-10;
  int obstruction_max_period = 8;
  double obstruction_tol = 1e-8;
};

struct ReductionResult {
  cocycle::InteriorSection section;
  livsic::RealSolution solution;
  cocycle::BoundarySection alpha;
  cocycle::BoundarySection beta;
  TranslationCocycle phi;
  double invariance = 0.0;
  ErrorBudget budget;
};

// The full pipeline: induce the translation cocycle, solve for the
// horosphere level function anchored by u(omega0) = -b_{p,alpha(omega0)}(h0),
// re-anchor each cylinder's geodesic to the zero level set and place the
// section at the solved level.
ReductionResult build_interior_section(const cocycle::IsometryCocycle& A,
                                       const cocycle::BoundarySection& alpha,
                                       const cocycle::BoundarySection& beta,
                                       const base::BasePoint& anchor,
                                       const geom::ModelPoint& h0,
                                       const geom::ModelPoint& p,
                                       const PipelineOptions& opt);

// sup over determined transitions of d(A(w) s(w), s(sigma w)).
double invariance_residual(const cocycle::InteriorSection& s,
                           const cocycle::IsometryCocycle& A);

// Max pointwise fiber gap between two interior sections.
double section_gap(const cocycle::InteriorSection& s1,
                   const cocycle::InteriorSection& s2);

// Parameter on a geodesic where the Busemann function b_{p,alpha} vanishes.
// Bisection on the bracket in the half-plane (the function is affine with
// slope -1 along the geodesic); exact in the tree.
double busemann_zero_parameter(const geom::Geodesic& g, const geom::ModelPoint& p,
                               const geom::BoundaryPoint& alpha, double bracket,
                               double tol);

// Per-anchor invariant boundary sections for the transfer reconstruction.
struct SectionFamily {
  std::function<cocycle::BoundarySection(const geom::ModelPoint&)> alpha;
  std::function<cocycle::BoundarySection(const geom::ModelPoint&)> beta;
};

struct TransferReconstruction {
  std::vector<geom::ModelPoint> anchors;
  std::vector<cocycle::InteriorSection> images;  // per anchor: w -> B(w) h
  double invariance = 0.0;       // max invariance residual across anchors
  double isometry_defect = 0.0;  // pairwise anchor-distance defect
  double anchor_identity = 0.0;  // max d(B(omega0) h, h) over anchors
};

// Samples the transfer function B as the family of interior sections through
// (omega0, h), one per anchor; B(omega0) = id by construction.
TransferReconstruction reconstruct_transfer(const cocycle::IsometryCocycle& A,
                                            const base::BasePoint& anchor_base,
                                            std::span<const geom::ModelPoint> anchors,
                                            const SectionFamily& family,
                                            const geom::ModelPoint& p,
                                            const PipelineOptions& opt);

// Boundary section from two interior sections: per cylinder the forward
// endpoint of the ray from s_p(w) through s_pbar(w).
cocycle::BoundarySection boundary_section_from_interior(
    const cocycle::InteriorSection& s_p, const cocycle::InteriorSection& s_pbar);

}  // namespace horo::reduction
