// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Thresholds are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "horo/livsic.hpp"
#include "horo/reduction.hpp"
#include "horo/sampling.hpp"
#include "horo/serialize.hpp"
#include "horo/verification.hpp"

using namespace horo;
using geom::Model;
using geom::ModelPoint;

namespace {

struct Criterion {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

class Timer {
public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// 1. Busemann identity suite: residuals <= 1e-8 over >= 100 instances in the
//    half-plane, exactly zero in the tree; under 10 s.
Criterion criterion_busemann_suite() {
  Timer timer;
  const auto hp = verification::busemann_suite(Model::HalfPlane, 120, 2001, 1e-8);
  const auto tree = verification::busemann_suite(Model::Tree, 120, 2002, 1e-8);
  bool pass = hp.pass();
  double worst = 0.0;
  for (const auto& item : hp.items) worst = std::max(worst, item.statistic);
  bool tree_exact = true;
  for (const auto& item : tree.items) tree_exact = tree_exact && item.statistic == 0.0;
  pass = pass && tree_exact;
  const double elapsed = timer.seconds();
  pass = pass && elapsed < 10.0;
  return {1, "busemann lemma suite", pass,
          "half-plane worst residual " + fmt(worst) +
              (tree_exact ? ", tree exact" : ", TREE NOT EXACT"),
          elapsed};
}

// 2. Strong hyperbolicity at eps = 1 with 10^4 triples per model, plus
//    closed-form vs limit Busemann agreement <= 1e-7.
Criterion criterion_strong_hyperbolicity() {
  Timer timer;
  long violations = 0;
  double agreement = 0.0;
  Rng rng(3001);
  for (Model model : {Model::HalfPlane, Model::Tree}) {
    const auto report = geom::strong_hyperbolicity_check(
        geom::default_base_point(model), 1.0, 10000, rng.next());
    violations += report.violations;
    for (int i = 0; i < 200; ++i) {
      const ModelPoint p = sampling::random_point(model, rng);
      const ModelPoint h = sampling::random_point(model, rng);
      const auto alpha = sampling::random_boundary(model, rng);
      agreement = std::max(agreement, std::abs(geom::busemann(p, alpha, h) -
                                               geom::busemann_limit(p, alpha, h, 30)));
    }
  }
  const bool pass = violations == 0 && agreement <= 1e-7;
  return {2, "strong hyperbolicity and busemann agreement", pass,
          std::to_string(violations) + " violations, agreement " + fmt(agreement),
          timer.seconds()};
}

// 3. Factor relation residual <= 1e-7 over 10^3 states for 10 seeded
//    instances.
Criterion criterion_factor_relation() {
  Timer timer;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto setup = sampling::coboundary_setup(Model::HalfPlane, 2, 2, 5, 4000 + seed);
    worst = std::max(worst, reduction::factor_check(setup.instance.cocycle, setup.alpha,
                                                    setup.p, 1000, seed));
  }
  return {3, "factor relation", worst <= 1e-7, "worst residual " + fmt(worst),
          timer.seconds()};
}

// 4. Livsic solver: ground-truth recovery within the reported bound,
//    monotone refinement over depths 4 -> 6 -> 8, obstruction always raised,
//    under 30 s per instance at depth 8.
Criterion criterion_livsic() {
  Timer timer;
  bool pass = true;
  std::string detail;
  double worst_gap = 0.0;
  double worst_depth8 = 0.0;

  for (std::uint64_t seed = 1; seed <= 10 && pass; ++seed) {
    Rng rng(5000 + seed);
    const auto g = sampling::random_real_cocycle(2, 2, rng);
    const auto psi = livsic::telescoped(g);  // depth 3
    double prev_gap = std::numeric_limits<double>::infinity();
    for (int depth : {4, 6, 8}) {
      Timer solve_timer;
      livsic::SolveOptions opt;
      opt.depth = depth;
      const auto tp = base::transitive_point(2, depth);
      const auto sol = livsic::solve(psi, tp.point, rng.uniform(-1.0, 1.0), opt);

      const int D = std::max(depth, g.depth());
      const double shift = sol.section.at_subindex(0, D, 0) - g.at_subindex(0, D, 0);
      double gap = 0.0;
      for (long idx = 0; idx < base::cylinder_count(2, D); ++idx)
        gap = std::max(gap, std::abs(sol.section.at_subindex(idx, D, 0) -
                                     g.at_subindex(idx, D, 0) - shift));
      if (gap > sol.tabulation_bound + 1e-12) {
        pass = false;
        detail = "gap " + fmt(gap) + " above bound " + fmt(sol.tabulation_bound);
      }
      if (gap > prev_gap + 1e-12) {
        pass = false;
        detail = "gap not monotone in depth";
      }
      prev_gap = gap;
      worst_gap = std::max(worst_gap, gap);
      if (depth == 8) {
        const double t = solve_timer.seconds();
        worst_depth8 = std::max(worst_depth8, t);
        if (t >= 30.0) {
          pass = false;
          detail = "depth-8 solve took " + fmt(t) + " s";
        }
      }
    }
  }

  int raised = 0;
  Rng rng(5999);
  for (int trial = 0; trial < 20; ++trial) {
    auto table = sampling::random_real_cocycle(2, 1, rng).table();
    for (auto& v : table) v += 0.41;
    const livsic::RealCocycle bad(2, 1, std::move(table));
    livsic::SolveOptions opt;
    opt.depth = 3;
    try {
      livsic::solve(bad, base::transitive_point(2, 3).point, 0.0, opt);
    } catch (const ObstructionError&) {
      ++raised;
    }
  }
  if (raised != 20) {
    pass = false;
    detail = "obstruction raised only " + std::to_string(raised) + "/20 times";
  }
  if (detail.empty())
    detail = "worst gap " + fmt(worst_gap) + ", depth-8 time " + fmt(worst_depth8) + " s";
  return {4, "livsic solver", pass, detail, timer.seconds()};
}

// 5. End-to-end pipeline on 10 hidden coboundaries at cylinder depth 6:
//    invariance <= 1e-6, transfer matches ground truth <= 1e-5, anchor
//    distances preserved <= 1e-6, under 2 min per instance.
Criterion criterion_pipeline() {
  Timer timer;
  bool pass = true;
  std::string detail;
  double worst_invariance = 0.0, worst_transfer = 0.0, worst_defect = 0.0;
  double worst_time = 0.0;

  for (std::uint64_t seed = 1; seed <= 10 && pass; ++seed) {
    Timer instance_timer;
    const auto setup = sampling::coboundary_setup(Model::HalfPlane, 2, 2, 6, 6000 + seed);
    reduction::PipelineOptions opt;
    opt.depth = 6;
    opt.orbit_budget = setup.orbit_horizon;

    const auto result = reduction::build_interior_section(
        setup.instance.cocycle, setup.alpha, setup.beta, setup.anchor, setup.h0,
        setup.p, opt);
    worst_invariance = std::max(worst_invariance, result.invariance);
    if (result.invariance > 1e-6) {
      pass = false;
      detail = "invariance " + fmt(result.invariance);
    }

    const auto probes = geom::default_probe_points(Model::HalfPlane, setup.p);
    const std::vector<ModelPoint> anchors(probes.begin(), probes.begin() + 3);
    const auto family = sampling::section_family(setup.instance);
    const auto recon = reduction::reconstruct_transfer(
        setup.instance.cocycle, setup.anchor, anchors, family, setup.p, opt);
    for (size_t i = 0; i < anchors.size(); ++i) {
      const auto truth = setup.instance.interior_section(anchors[i]);
      worst_transfer =
          std::max(worst_transfer, reduction::section_gap(recon.images[i], truth));
    }
    worst_defect = std::max(worst_defect, recon.isometry_defect);
    if (worst_transfer > 1e-5) {
      pass = false;
      detail = "transfer gap " + fmt(worst_transfer);
    }
    if (recon.isometry_defect > 1e-6) {
      pass = false;
      detail = "isometry defect " + fmt(recon.isometry_defect);
    }
    const double t = instance_timer.seconds();
    worst_time = std::max(worst_time, t);
    if (t >= 120.0) {
      pass = false;
      detail = "instance took " + fmt(t) + " s";
    }
  }
  if (detail.empty())
    detail = "invariance " + fmt(worst_invariance) + ", transfer gap " +
             fmt(worst_transfer) + ", defect " + fmt(worst_defect) + ", slowest " +
             fmt(worst_time) + " s";
  return {5, "interior reduction pipeline", pass, detail, timer.seconds()};
}

// 6. Obstruction transfer: interior pass implies boundary pass and the
//    induced translation sums to zero (<= 1e-8) on periodic orbits.
Criterion criterion_obstruction_transfer() {
  Timer timer;
  bool pass = true;
  double worst_boundary = 0.0, worst_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 10 && pass; ++seed) {
    const auto setup = sampling::coboundary_setup(Model::HalfPlane, 2, 2, 5, 6000 + seed);
    const auto& A = setup.instance.cocycle;
    const auto probes = geom::default_probe_points(Model::HalfPlane, setup.p);
    const auto interior = cocycle::periodic_obstruction_check(A, 5, 1e-9, probes);
    if (!interior.pass) {
      pass = false;
      continue;
    }
    const auto bprobes = geom::default_boundary_probes(Model::HalfPlane);
    const auto boundary =
        cocycle::boundary_periodic_obstruction_check(A, 5, 1e-9, bprobes);
    worst_boundary = std::max(worst_boundary, boundary.max_displacement);
    pass = pass && boundary.pass;

    const auto phi = reduction::induce_translation(A, setup.alpha, setup.p, 1e-9);
    const auto sums = livsic::periodic_sum_check(phi.values, 5, 1e-8);
    worst_sum = std::max(worst_sum, sums.max_abs_sum);
    pass = pass && sums.pass;
  }
  return {6, "periodic obstruction transfer", pass,
          "worst boundary displacement " + fmt(worst_boundary) + ", worst orbit sum " +
              fmt(worst_sum),
          timer.seconds()};
}

// 7. Byte-identical reports for identical configs and seeds.
Criterion criterion_determinism() {
  Timer timer;
  io::ExperimentConfig cfg;
  cfg.instances = 40;
  cfg.samples = 2000;
  cfg.depth = 4;
  cfg.generator_depth = 1;
  cfg.seed = 424242;

  const bool lemmas =
      io::dump(io::lemma_report(cfg)) == io::dump(io::lemma_report(cfg));
  const bool ppo = io::dump(io::ppo_report(cfg)) == io::dump(io::ppo_report(cfg));
  const auto reduce1 = io::run_reduce(cfg);
  const auto reduce2 = io::run_reduce(cfg);
  const bool reduce = io::dump(reduce1.report) == io::dump(reduce2.report) &&
                      io::dump(reduce1.result) == io::dump(reduce2.result) &&
                      reduce1.residual_csv == reduce2.residual_csv;
  const auto livsic1 = io::run_livsic(cfg);
  const auto livsic2 = io::run_livsic(cfg);
  const bool livsic_same = io::dump(livsic1.report) == io::dump(livsic2.report) &&
                           livsic1.residual_csv == livsic2.residual_csv;
  const bool pass = lemmas && ppo && reduce && livsic_same;
  return {7, "report determinism", pass,
          std::string(lemmas ? "" : "lemmas differ; ") + (ppo ? "" : "ppo differs; ") +
              (reduce ? "" : "reduce differs; ") +
              (livsic_same ? "byte-identical reports" : "livsic differs"),
          timer.seconds()};
}

}  // namespace

int main() {
  std::vector<Criterion> results;
  results.push_back(criterion_busemann_suite());
  results.push_back(criterion_strong_hyperbolicity());
  results.push_back(criterion_factor_relation());
  results.push_back(criterion_livsic());
  results.push_back(criterion_pipeline());
  results.push_back(criterion_obstruction_transfer());
  results.push_back(criterion_determinism());

  int failures = 0;
  for (const auto& r : results) {
    std::printf("[%s] criterion %d: %s (%s; %.1f s)\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str(), r.seconds);
    if (!r.pass) ++failures;
  }
  return failures;
}
