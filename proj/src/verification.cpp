#include "horo/verification.hpp"

#include <algorithm>
#include <cmath>

#include "horo/rng.hpp"
#include "horo/sampling.hpp"

namespace horo::verification {

namespace {

using geom::BoundaryPoint;
using geom::Geodesic;
using geom::Model;
using geom::ModelPoint;

SuiteItem item(std::string name, double statistic, double threshold,
               std::string relation, long instances) {
  const bool pass =
      relation == "<=" ? statistic <= threshold : statistic > threshold;
  return SuiteItem{std::move(name), statistic, threshold, std::move(relation), pass,
                   instances};
}

// A complete geodesic re-anchored so the Busemann level at parameter 0
// vanishes.
Geodesic anchored_line(const ModelPoint& p, const BoundaryPoint& alpha,
                       const BoundaryPoint& beta) {
  const Geodesic line = geom::geodesic_between_boundary(beta, alpha, p);
  const double level0 = geom::busemann(p, alpha, line.eval(0.0));
  // level along the line is affine with slope -1
  return line.reanchored(level0);
}

std::pair<BoundaryPoint, BoundaryPoint> distinct_boundary_pair(Model model, Rng& rng,
                                                               double min_gap) {
  const BoundaryPoint a = sampling::random_boundary(model, rng);
  for (;;) {
    const BoundaryPoint b = sampling::random_boundary(model, rng);
    if (geom::boundary_gap(a, b) >= min_gap) return {a, b};
  }
}

}  // namespace

SuiteReport busemann_suite(Model model, int instances, std::uint64_t seed,
                           double tol) {
  Rng rng(seed);
  const bool tree = model == Model::Tree;
  double along = 0.0, equivariance = 0.0, lipschitz = 0.0, base_change = 0.0;

  for (int i = 0; i < instances; ++i) {
    const ModelPoint p = sampling::random_point(model, rng);
    auto [beta, alpha] = distinct_boundary_pair(model, rng, 0.05);

    const Geodesic line = anchored_line(p, alpha, beta);
    for (int k = -10; k <= 10; ++k) {
      const double s = tree ? static_cast<double>(k) : 0.97 * k;
      along = std::max(along,
                       std::abs(geom::busemann(p, alpha, line.eval(s)) + s));
    }

    const geom::Isometry A = sampling::random_isometry(model, rng);
    equivariance = std::max(
        equivariance,
        std::abs(geom::busemann(p, geom::boundary_action(A, alpha),
                                geom::apply_isometry(A, p)) +
                 geom::busemann(p, alpha, geom::apply_isometry(A.inverse(), p))));

    const ModelPoint h = sampling::random_point(model, rng);
    const ModelPoint g = sampling::random_point(model, rng);
    lipschitz = std::max(
        lipschitz, std::abs(geom::busemann(p, alpha, h) - geom::busemann(p, alpha, g)) -
                       geom::distance(h, g));

    const ModelPoint p2 = sampling::random_point(model, rng);
    base_change = std::max(
        base_change,
        std::abs(geom::busemann(p, alpha, h) -
                 (geom::busemann(p2, alpha, h) + geom::busemann(p, alpha, p2))));
  }

  SuiteReport report{"busemann", {}};
  report.items.push_back(item("level_along_geodesics", along, tol, "<=", instances));
  report.items.push_back(item("isometry_equivariance", equivariance, tol, "<=", instances));
  report.items.push_back(
      item("one_lipschitz_violation", std::max(lipschitz, 0.0), 1e-9, "<=", instances));
  report.items.push_back(item("base_point_change", base_change, tol, "<=", instances));
  return report;
}

SuiteReport boundary_action_suite(Model model, int instances, std::uint64_t seed,
                                  double tol) {
  Rng rng(seed);
  const ModelPoint p = geom::default_base_point(model);
  const auto probes = geom::default_boundary_probes(model);

  double composition = 0.0;
  double min_motion = std::numeric_limits<double>::infinity();
  double lipschitz_excess = 0.0;

  for (int i = 0; i < instances; ++i) {
    const geom::Isometry A = sampling::random_isometry(model, rng);
    const geom::Isometry B = sampling::random_isometry(model, rng);
    const BoundaryPoint xi = sampling::random_boundary(model, rng);
    composition = std::max(
        composition, geom::boundary_gap(geom::boundary_action(A.compose(B), xi),
                                        geom::boundary_action(
                                            A, geom::boundary_action(B, xi))));

    const geom::Isometry G = sampling::random_nonidentity_isometry(model, rng);
    double moved = 0.0;
    for (size_t k = 0; k < 3 && k < probes.size(); ++k)
      moved = std::max(
          moved, geom::boundary_gap(geom::boundary_action(G, probes[k]), probes[k]));
    min_motion = std::min(min_motion, moved);

    // visual-metric expansion of a boundary map is at most e^{d(p, G^{-1} p)}
    const double bound = std::exp(
        geom::distance(p, geom::apply_isometry(G.inverse(), p)));
    for (int q = 0; q < 4; ++q) {
      auto [xi1, xi2] = distinct_boundary_pair(model, rng, 0.05);
      const double before = geom::boundary_metric(xi1, xi2, p, 1.0);
      const double after = geom::boundary_metric(geom::boundary_action(G, xi1),
                                                 geom::boundary_action(G, xi2), p, 1.0);
      lipschitz_excess = std::max(lipschitz_excess, after / before - bound);
    }
  }

  SuiteReport report{"boundary_action", {}};
  report.items.push_back(item("composition_compatibility", composition, tol, "<=", instances));
  report.items.push_back(item("nonidentity_moves_boundary", min_motion, 1e-12, ">", instances));
  report.items.push_back(
      item("lipschitz_bound_excess", lipschitz_excess, 1e-9, "<=", instances));
  return report;
}

SuiteReport strong_hyperbolicity_suite(Model model, double epsilon, long samples,
                                       int agreement_instances, std::uint64_t seed) {
  Rng rng(seed);
  const ModelPoint p = geom::default_base_point(model);
  const geom::HyperbolicityReport hyp =
      geom::strong_hyperbolicity_check(p, epsilon, samples, rng.next());

  double agreement = 0.0;
  for (int i = 0; i < agreement_instances; ++i) {
    const ModelPoint q = sampling::random_point(model, rng);
    const ModelPoint h = sampling::random_point(model, rng);
    const BoundaryPoint alpha = sampling::random_boundary(model, rng);
    agreement = std::max(agreement, std::abs(geom::busemann(q, alpha, h) -
                                             geom::busemann_limit(q, alpha, h, 30)));
  }

  SuiteReport report{"strong_hyperbolicity", {}};
  report.items.push_back(item("triangle_violations",
                              static_cast<double>(hyp.violations), 0.0, "<=", samples));
  report.items.push_back(
      item("worst_margin", hyp.worst_margin, -1e-15, ">", samples));
  report.items.push_back(item("busemann_closed_vs_limit", agreement, 1e-7, "<=",
                              agreement_instances));
  return report;
}

SuiteReport regularity_suite(Model model, int instances, std::uint64_t seed) {
  Rng rng(seed);
  const bool tree = model == Model::Tree;
  const ModelPoint p = geom::default_base_point(model);

  double endpoint_stability = 0.0;
  double convexity_excess = 0.0;
  double backward_gap = 0.0;
  double monotone_violation = 0.0;

  for (int i = 0; i < instances; ++i) {
    // endpoint perturbation: nearby boundary data gives a nearby geodesic
    auto [beta, alpha] = distinct_boundary_pair(model, rng, 0.2);
    const Geodesic line = geom::geodesic_between_boundary(beta, alpha, p);
    BoundaryPoint alpha2 = alpha;
    BoundaryPoint beta2 = beta;
    if (!tree) {
      const double da = 1e-6 * rng.uniform(-1.0, 1.0);
      alpha2 = geom::BoundaryPoint::projective(alpha.u + da * alpha.v,
                                               alpha.v - da * alpha.u);
      const double db = 1e-6 * rng.uniform(-1.0, 1.0);
      beta2 = geom::BoundaryPoint::projective(beta.u + db * beta.v,
                                              beta.v - db * beta.u);
    } else {
      // keep the first 12 letters, swap the cyclic tail
      geom::Word pre;
      for (long k = 0; k < 12; ++k)
        pre.push_back(static_cast<std::uint8_t>(alpha.letter(k)));
      const int last = pre.back();
      const int e1 = last == 0 ? 1 : 0;
      const int e2 = e1 == 0 ? 1 : 0;
      alpha2 = geom::BoundaryPoint::tree_end(
          pre, {static_cast<std::uint8_t>(e1), static_cast<std::uint8_t>(e2)});
    }
    const Geodesic line2 = geom::geodesic_between_boundary(beta2, alpha2, p);
    for (int k = -2; k <= 2; ++k) {
      const double s = tree ? static_cast<double>(k) : 0.9 * k;
      double best = std::numeric_limits<double>::infinity();
      for (int t = -8; t <= 8; ++t) {
        const double u = tree ? s + t : s + 0.125 * t;
        best = std::min(best, geom::distance(line2.eval(u), line.eval(s)));
      }
      endpoint_stability = std::max(endpoint_stability, best);
    }

    // ball convexity
    const ModelPoint h = sampling::random_point(model, rng);
    const double radius = tree ? 1.0 + rng.uniform_int(2) : rng.uniform(0.2, 1.0);
    ModelPoint x = h, y = h;
    for (int tries = 0; tries < 128; ++tries) {
      const ModelPoint cand = sampling::random_point(model, rng);
      if (geom::distance(cand, h) <= radius) {
        x = cand;
        break;
      }
    }
    for (int tries = 0; tries < 128; ++tries) {
      const ModelPoint cand = sampling::random_point(model, rng);
      if (geom::distance(cand, h) <= radius &&
          geom::distance(cand, x) > 1e-12) {
        y = cand;
        break;
      }
    }
    if (geom::distance(x, y) > 1e-12) {
      const Geodesic seg = geom::geodesic_between(x, y);
      const double len = geom::distance(x, y);
      const long steps = tree ? std::lround(len) : 16;
      for (long k = 0; k <= steps; ++k) {
        const double t =
            tree ? static_cast<double>(k)
                 : len * static_cast<double>(k) / static_cast<double>(steps);
        convexity_excess =
            std::max(convexity_excess, geom::distance(h, seg.eval(t)) - radius);
      }
    }

    // continuity of the backward endpoint in the interior point; tree rays
    // extend backward by the deterministic smallest-letter rule
    const BoundaryPoint dir = sampling::random_boundary(model, rng);
    const ModelPoint h1 = sampling::random_point(model, rng);
    ModelPoint h2 = h1;
    if (!tree) {
      h2 = geom::ModelPoint::half_plane(h1.x + 1e-6, h1.y * (1.0 + 1e-6));
    } else {
      geom::Word w = h1.addr;
      w.push_back(static_cast<std::uint8_t>(w.empty() || w.back() != 0 ? 0 : 1));
      h2 = geom::ModelPoint::tree(w);
    }
    auto backward_end = [&](const ModelPoint& h) {
      const geom::Geodesic ray = geom::ray_to_boundary(h, dir);
      if (tree) return geom::ray_endpoint_through(ray.eval(1.0), h);
      return ray.backward_endpoint();
    };
    if (!geom::boundary_equal(dir, geom::ray_endpoint_through(h1, h2))) {
      backward_gap = std::max(backward_gap,
                              geom::boundary_gap(backward_end(h1), backward_end(h2)) -
                                  (tree ? 1.0 : 1e-2));
    }

    // Busemann limit estimates settle monotonically
    const ModelPoint q = sampling::random_point(model, rng);
    const ModelPoint hh = sampling::random_point(model, rng);
    const BoundaryPoint aa = sampling::random_boundary(model, rng);
    double prev = std::abs(geom::busemann_limit(q, aa, hh, 8) -
                           geom::busemann_limit(q, aa, hh, 4));
    for (int n = 8; n <= 16; n *= 2) {
      const double diff = std::abs(geom::busemann_limit(q, aa, hh, 2 * n) -
                                   geom::busemann_limit(q, aa, hh, n));
      monotone_violation = std::max(monotone_violation, diff - prev);
      prev = diff;
    }
  }

  SuiteReport report{"regularity", {}};
  report.items.push_back(
      item("geodesic_endpoint_stability", endpoint_stability, tree ? 1e-12 : 5e-2,
           "<=", instances));
  report.items.push_back(
      item("ball_convexity_excess", convexity_excess, 1e-9, "<=", instances));
  report.items.push_back(
      item("backward_endpoint_gap_excess", backward_gap, 0.0, "<=", instances));
  report.items.push_back(
      item("busemann_limit_monotone_violation", monotone_violation, 1e-12, "<=",
           instances));
  return report;
}

}  // namespace horo::verification
