#include "horo/livsic.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

namespace horo::livsic {

RealCocycle::RealCocycle(int alphabet, int depth, std::vector<double> table)
    : m_(alphabet), depth_(depth), table_(std::move(table)) {
  if (static_cast<long>(table_.size()) != base::cylinder_count(alphabet, depth))
    throw DomainError("RealCocycle: table size does not match depth");
  for (double v : table_)
    if (!std::isfinite(v)) throw DomainError("RealCocycle: values must be finite");
}

RealPpoReport periodic_sum_check(const RealCocycle& psi, int max_period, double tol) {
  RealPpoReport report;
  report.tol = tol;
  for (auto& orbit : base::enumerate_periodic_orbits(psi.alphabet(), max_period)) {
    const base::BasePoint w = orbit.point();
    double sum = 0.0;
    for (int j = 0; j < orbit.period; ++j) sum += psi.at(w.shifted(j));
    report.max_abs_sum = std::max(report.max_abs_sum, std::abs(sum));
    report.orbits.push_back(OrbitSum{std::move(orbit), sum});
  }
  report.pass = report.max_abs_sum <= tol;
  return report;
}

RealSolution solve(const RealCocycle& psi, const base::BasePoint& anchor,
                   double u_anchor, const SolveOptions& opt) {
  const int m = anchor.alphabet();
  if (psi.alphabet() != m) throw DomainError("solve: alphabet mismatch");
  const int d = opt.depth;
  const int r = psi.depth();

  const RealPpoReport obstruction =
      periodic_sum_check(psi, opt.obstruction_max_period, opt.obstruction_tol);
  if (!obstruction.pass) {
    int worst_period = 0;
    double worst = 0.0;
    for (const auto& o : obstruction.orbits)
      if (std::abs(o.sum) > worst) {
        worst = std::abs(o.sum);
        worst_period = o.orbit.period;
      }
    throw ObstructionError(
        "solve: periodic orbit sums obstruct the equation (Birkhoff sums at a "
        "violated orbit diverge linearly)",
        worst_period, worst);
  }

  const long total = base::cylinder_count(m, d);
  const long budget =
      opt.orbit_budget > 0 ? opt.orbit_budget : base::transitive_point(m, d).horizon;

  std::vector<double> table(static_cast<size_t>(total), 0.0);
  std::vector<long> first_hit(static_cast<size_t>(total), -1);

  // pow(2, tau*k) for the near-return ratios, k up to the horizon
  std::vector<double> scale(static_cast<size_t>(base::kEqualityHorizon + 1), 0.0);
  for (int k = 0; k <= base::kEqualityHorizon; ++k)
    scale[static_cast<size_t>(k)] = std::pow(2.0, opt.tau * k);

  long idx_u = base::word_index(anchor, d);
  long idx_psi = base::word_index(anchor, r);
  const long mod_u = total / m;
  const long mod_psi = psi.size() / m;

  double sum = u_anchor, comp = 0.0;  // Kahan accumulation of the Birkhoff sum
  double abs_accum = std::abs(u_anchor);
  long hits = 0;
  long steps = 0;
  double holder = 0.0;

  for (long n = 0; n <= budget; ++n) {
    steps = n;
    if (first_hit[static_cast<size_t>(idx_u)] < 0) {
      first_hit[static_cast<size_t>(idx_u)] = n;
      table[static_cast<size_t>(idx_u)] = sum;
      if (++hits == total) break;
    } else {
      // near-return: same depth-d cylinder, so the orbit points agree for
      // |i| <= d; scan outward for the first disagreement.
      const long n1 = first_hit[static_cast<size_t>(idx_u)];
      int k = d + 1;
      while (k < base::kEqualityHorizon &&
             anchor.symbol(n1 + k) == anchor.symbol(n + k) &&
             anchor.symbol(n1 - k) == anchor.symbol(n - k))
        ++k;
      if (k < base::kEqualityHorizon) {
        const double du = std::abs(sum - table[static_cast<size_t>(idx_u)]);
        holder = std::max(holder, du * scale[static_cast<size_t>(k)]);
      }
    }
    const double value = psi.at_index(idx_psi);
    const double y = value - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    abs_accum += std::abs(value);
    idx_u = (idx_u % mod_u) * m + anchor.symbol(n + 1 + d);
    idx_psi = (idx_psi % mod_psi) * m + anchor.symbol(n + 1 + r);
  }

  if (hits < total) {
    std::vector<long> unhit;
    long count = 0;
    for (long i = 0; i < total; ++i)
      if (first_hit[static_cast<size_t>(i)] < 0) {
        ++count;
        if (unhit.size() < 64) unhit.push_back(i);
      }
    throw CoverageError("solve: orbit budget " + std::to_string(budget) +
                            " left " + std::to_string(count) + " cylinders unhit",
                        std::move(unhit), count);
  }

  RealSolution out{cocycle::RealSection(geom::Model::HalfPlane, m, d, std::move(table)),
                   0.0,
                   holder,
                   0.0,
                   0.0,
                   steps};
  out.residual = solution_residual(out.section, psi);
  out.float_term = 2.0 * DBL_EPSILON * abs_accum;
  out.tabulation_bound = holder * std::pow(2.0, -opt.tau * d) + out.float_term;
  return out;
}

double solution_residual(const cocycle::RealSection& u, const RealCocycle& psi) {
  if (u.alphabet() != psi.alphabet())
    throw DomainError("solution_residual: alphabet mismatch");
  const int D = std::max(u.depth() + 1, psi.depth());
  const long total = base::cylinder_count(u.alphabet(), D);
  double residual = 0.0;
  for (long idx = 0; idx < total; ++idx) {
    const double r = std::abs(u.at_subindex(idx, D, 1) - u.at_subindex(idx, D, 0) -
                              psi.at_subindex(idx, D, 0));
    residual = std::max(residual, r);
  }
  return residual;
}

VerifyReport verify_solution(const cocycle::RealSection& u, const RealCocycle& psi,
                             double tol) {
  const double r = solution_residual(u, psi);
  return VerifyReport{r, tol, r <= tol};
}

RealCocycle telescoped(const RealCocycle& g) {
  const int R = g.depth() + 1;
  const long total = base::cylinder_count(g.alphabet(), R);
  std::vector<double> table;
  table.reserve(static_cast<size_t>(total));
  for (long idx = 0; idx < total; ++idx)
    table.push_back(g.at_subindex(idx, R, 1) - g.at_subindex(idx, R, 0));
  return RealCocycle(g.alphabet(), R, std::move(table));
}

}  // namespace horo::livsic
