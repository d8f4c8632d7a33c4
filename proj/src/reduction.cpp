#include "horo/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "horo/rng.hpp"
#include "horo/sampling.hpp"

namespace horo::reduction {

namespace {

int innermost_difference(const std::vector<std::uint8_t>& w1,
                         const std::vector<std::uint8_t>& w2, int depth) {
  for (int k = 0; k <= depth; ++k) {
    if (w1[static_cast<size_t>(depth + k)] != w2[static_cast<size_t>(depth + k)] ||
        w1[static_cast<size_t>(depth - k)] != w2[static_cast<size_t>(depth - k)])
      return k;
  }
  return -1;
}

void check_section_invariance(const cocycle::IsometryCocycle& A,
                              const cocycle::BoundarySection& section,
                              double tol, const char* which) {
  const auto inv = cocycle::boundary_section_invariance(A, section);
  if (inv.residual > tol)
    throw InvarianceError(std::string(which) +
                              " section is not invariant: worst residual " +
                              std::to_string(inv.residual) + " at cylinder " +
                              std::to_string(inv.worst_word),
                          inv.worst_word, inv.residual);
}

}  // namespace

TranslationCocycle induce_translation(const cocycle::IsometryCocycle& A,
                                      const cocycle::BoundarySection& alpha,
                                      const geom::ModelPoint& p,
                                      double invariance_tol) {
  if (A.alphabet() != alpha.alphabet())
    throw DomainError("induce_translation: alphabet mismatch");
  check_section_invariance(A, alpha, invariance_tol, "alpha");

  const int R = std::max(A.depth(), alpha.depth()) + 1;
  const long total = base::cylinder_count(A.alphabet(), R);
  std::vector<double> table;
  table.reserve(static_cast<size_t>(total));
  for (long idx = 0; idx < total; ++idx) {
    const geom::Isometry& g = A.at_subindex(idx, R, 0);
    const geom::BoundaryPoint& a_next = alpha.at_subindex(idx, R, 1);
    table.push_back(-geom::busemann(p, a_next, geom::apply_isometry(g, p)));
  }
  return TranslationCocycle{livsic::RealCocycle(A.alphabet(), R, std::move(table)), p,
                            A.depth(), alpha.depth()};
}

double factor_residual(const cocycle::IsometryCocycle& A,
                       const cocycle::BoundarySection& alpha,
                       const TranslationCocycle& phi, const geom::ModelPoint& p,
                       long samples, std::uint64_t seed) {
  Rng rng(seed);
  const int R = phi.values.depth();
  const int sample_depth = R + 2;
  const long words = base::cylinder_count(A.alphabet(), sample_depth);
  double residual = 0.0;
  for (long i = 0; i < samples; ++i) {
    const long idx = rng.uniform_int(words);
    const base::BasePoint omega =
        base::cylinder_point(idx, A.alphabet(), sample_depth);
    const geom::ModelPoint h = sampling::random_point(p.model, rng);
    const double level_next =
        -geom::busemann(p, alpha(omega.shifted(1)),
                        geom::apply_isometry(A.at(omega), h));
    const double level_here = -geom::busemann(p, alpha(omega), h);
    const double r = std::abs(level_next - (level_here + phi.values.at(omega)));
    residual = std::max(residual, r);
  }
  return residual;
}

double factor_check(const cocycle::IsometryCocycle& A,
                    const cocycle::BoundarySection& alpha, const geom::ModelPoint& p,
                    long samples, std::uint64_t seed, double invariance_tol) {
  const TranslationCocycle phi = induce_translation(A, alpha, p, invariance_tol);
  return factor_residual(A, alpha, phi, p, samples, seed);
}

double translation_holder_estimate(const TranslationCocycle& phi, double tau) {
  const int depth = phi.values.depth();
  const long n = phi.values.size();
  std::vector<std::vector<std::uint8_t>> words;
  words.reserve(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i)
    words.push_back(base::index_to_word(i, phi.values.alphabet(), depth));
  double best = 0.0;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < i; ++j) {
      const int k = innermost_difference(words[static_cast<size_t>(i)],
                                         words[static_cast<size_t>(j)], depth);
      if (k < 0) continue;
      best = std::max(best, std::abs(phi.values.at_index(i) - phi.values.at_index(j)) *
                                std::pow(2.0, tau * k));
    }
  return best;
}

HolderConstants measured_constants(const cocycle::IsometryCocycle& A,
                                   const cocycle::BoundarySection& alpha,
                                   const geom::ModelPoint& p, double tau) {
  const int M = std::max(A.depth(), alpha.depth());
  const long n = base::cylinder_count(A.alphabet(), M);
  std::vector<std::vector<std::uint8_t>> words;
  std::vector<geom::ModelPoint> pts;
  words.reserve(static_cast<size_t>(n));
  pts.reserve(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    words.push_back(base::index_to_word(i, A.alphabet(), M));
    pts.push_back(
        geom::apply_isometry(A.at_subindex(i, M, 0).inverse(), p));
  }
  HolderConstants out;
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      if (i == j) continue;
      const int k = innermost_difference(words[static_cast<size_t>(i)],
                                         words[static_cast<size_t>(j)], M);
      if (k < 0) continue;
      const double scale = std::pow(2.0, tau * k);
      if (j < i)
        out.inverse_cocycle =
            std::max(out.inverse_cocycle,
                     geom::distance(pts[static_cast<size_t>(i)],
                                    pts[static_cast<size_t>(j)]) *
                         scale);
      const double bi =
          geom::busemann(p, alpha.at_subindex(i, M, 0), pts[static_cast<size_t>(i)]);
      const double bj =
          geom::busemann(p, alpha.at_subindex(j, M, 0), pts[static_cast<size_t>(i)]);
      out.busemann_section = std::max(out.busemann_section, std::abs(bi - bj) * scale);
    }
  }
  return out;
}

double busemann_zero_parameter(const geom::Geodesic& g, const geom::ModelPoint& p,
                               const geom::BoundaryPoint& alpha, double bracket,
                               double tol) {
  if (g.model == geom::Model::Tree) {
    // along the line the level is affine with slope -1, so the zero sits at
    // the level of the current origin
    return geom::busemann(p, alpha, g.eval(0.0));
  }
  double lo = -bracket, hi = bracket;
  const double flo = geom::busemann(p, alpha, g.eval(lo));
  const double fhi = geom::busemann(p, alpha, g.eval(hi));
  if (!(flo >= 0.0 && fhi <= 0.0))
    throw DomainError("busemann_zero_parameter: bracket failure");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (geom::busemann(p, alpha, g.eval(mid)) >= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

ReductionResult build_interior_section(const cocycle::IsometryCocycle& A,
                                       const cocycle::BoundarySection& alpha,
                                       const cocycle::BoundarySection& beta,
                                       const base::BasePoint& anchor,
                                       const geom::ModelPoint& h0,
                                       const geom::ModelPoint& p,
                                       const PipelineOptions& opt) {
  const int m = A.alphabet();
  const int d_eff = std::max({opt.depth, alpha.depth(), beta.depth()});

  const auto probes = geom::default_probe_points(A.model(), p);
  const auto ppo = cocycle::periodic_obstruction_check(A, opt.ppo_max_period,
                                                       opt.ppo_tol, probes);
  if (!ppo.pass)
    throw ObstructionError("build_interior_section: cocycle fails the periodic "
                           "obstruction check",
                           0, ppo.max_displacement);
  check_section_invariance(A, beta, opt.invariance_tol, "beta");

  TranslationCocycle phi = induce_translation(A, alpha, p, opt.invariance_tol);

  const double u0 = -geom::busemann(p, alpha(anchor), h0);
  livsic::SolveOptions sopt;
  sopt.depth = d_eff;
  sopt.orbit_budget = opt.orbit_budget;
  sopt.tau = opt.tau;
  sopt.obstruction_max_period = opt.obstruction_max_period;
  sopt.obstruction_tol = opt.obstruction_tol;
  livsic::RealSolution sol = livsic::solve(phi.values, anchor, u0, sopt);

  const long total = base::cylinder_count(m, d_eff);
  std::vector<geom::ModelPoint> table;
  table.reserve(static_cast<size_t>(total));
  for (long idx = 0; idx < total; ++idx) {
    const geom::BoundaryPoint& aw = alpha.at_subindex(idx, d_eff, 0);
    const geom::BoundaryPoint& bw = beta.at_subindex(idx, d_eff, 0);
    if (geom::boundary_equal(aw, bw))
      throw DomainError("build_interior_section: alpha and beta collide at cylinder " +
                        std::to_string(idx));
    const geom::Geodesic line = geom::geodesic_between_boundary(bw, aw, p);
    const double tzero =
        busemann_zero_parameter(line, p, aw, opt.root_bracket, opt.root_tol);
    table.push_back(line.eval(tzero + sol.section.at_index(idx)));
  }
  cocycle::InteriorSection section(A.model(), m, d_eff, std::move(table));

  ReductionResult out{std::move(section), std::move(sol), alpha, beta,
                      std::move(phi),     0.0,            ErrorBudget{}};
  out.invariance = invariance_residual(out.section, A);
  const bool tree = A.model() == geom::Model::Tree;
  out.budget.busemann_eval = tree ? 0.0 : 1e-12;
  out.budget.tabulation = out.solution.tabulation_bound;
  out.budget.root_solve = tree ? 0.0 : opt.root_tol;
  return out;
}

double invariance_residual(const cocycle::InteriorSection& s,
                           const cocycle::IsometryCocycle& A) {
  if (s.alphabet() != A.alphabet())
    throw DomainError("invariance_residual: alphabet mismatch");
  const int D = std::max(s.depth() + 1, A.depth());
  const long total = base::cylinder_count(s.alphabet(), D);
  double residual = 0.0;
  for (long idx = 0; idx < total; ++idx) {
    const geom::ModelPoint image =
        geom::apply_isometry(A.at_subindex(idx, D, 0), s.at_subindex(idx, D, 0));
    residual = std::max(residual, geom::distance(image, s.at_subindex(idx, D, 1)));
  }
  return residual;
}

double section_gap(const cocycle::InteriorSection& s1,
                   const cocycle::InteriorSection& s2) {
  if (s1.alphabet() != s2.alphabet()) throw DomainError("section_gap: alphabet mismatch");
  const int D = std::max(s1.depth(), s2.depth());
  const long total = base::cylinder_count(s1.alphabet(), D);
  double gap = 0.0;
  for (long idx = 0; idx < total; ++idx)
    gap = std::max(gap, geom::distance(s1.at_subindex(idx, D, 0),
                                       s2.at_subindex(idx, D, 0)));
  return gap;
}

TransferReconstruction reconstruct_transfer(const cocycle::IsometryCocycle& A,
                                            const base::BasePoint& anchor_base,
                                            std::span<const geom::ModelPoint> anchors,
                                            const SectionFamily& family,
                                            const geom::ModelPoint& p,
                                            const PipelineOptions& opt) {
  if (anchors.empty()) throw DomainError("reconstruct_transfer: no anchors");
  TransferReconstruction out;
  out.anchors.assign(anchors.begin(), anchors.end());
  for (const auto& h : anchors) {
    const cocycle::BoundarySection a = family.alpha(h);
    const cocycle::BoundarySection b = family.beta(h);
    ReductionResult res = build_interior_section(A, a, b, anchor_base, h, p, opt);
    out.invariance = std::max(out.invariance, res.invariance);
    out.images.push_back(std::move(res.section));
  }
  // B(omega0) = id: the section through (omega0, h) passes through h
  for (size_t i = 0; i < out.images.size(); ++i) {
    const geom::ModelPoint at_anchor = out.images[i](anchor_base);
    out.anchor_identity =
        std::max(out.anchor_identity, geom::distance(at_anchor, out.anchors[i]));
  }
  // sampled B(w) preserves pairwise anchor distances
  int D = 0;
  for (const auto& s : out.images) D = std::max(D, s.depth());
  const long total = base::cylinder_count(A.alphabet(), D);
  for (size_t i = 0; i < out.images.size(); ++i)
    for (size_t j = 0; j < i; ++j) {
      const double ref = geom::distance(out.anchors[i], out.anchors[j]);
      for (long idx = 0; idx < total; ++idx) {
        const double dij = geom::distance(out.images[i].at_subindex(idx, D, 0),
                                          out.images[j].at_subindex(idx, D, 0));
        out.isometry_defect = std::max(out.isometry_defect, std::abs(dij - ref));
      }
    }
  return out;
}

cocycle::BoundarySection boundary_section_from_interior(
    const cocycle::InteriorSection& s_p, const cocycle::InteriorSection& s_pbar) {
  if (s_p.alphabet() != s_pbar.alphabet())
    throw DomainError("boundary_section_from_interior: alphabet mismatch");
  const int D = std::max(s_p.depth(), s_pbar.depth());
  const long total = base::cylinder_count(s_p.alphabet(), D);
  std::vector<geom::BoundaryPoint> table;
  table.reserve(static_cast<size_t>(total));
  for (long idx = 0; idx < total; ++idx) {
    const geom::ModelPoint& a = s_p.at_subindex(idx, D, 0);
    const geom::ModelPoint& b = s_pbar.at_subindex(idx, D, 0);
    if (geom::distance(a, b) <= 1e-12)
      throw DomainError("boundary_section_from_interior: coincident section values "
                        "at cylinder " +
                        std::to_string(idx));
    table.push_back(geom::ray_endpoint_through(a, b));
  }
  return cocycle::BoundarySection(s_p.model(), s_p.alphabet(), D, std::move(table));
}

}  // namespace horo::reduction
