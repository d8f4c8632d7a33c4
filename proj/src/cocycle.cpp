#include "horo/cocycle.hpp"

#include <algorithm>
#include <cmath>

namespace horo::cocycle {

namespace {

// Innermost index (absolute value) at which two central words differ, or -1
// if equal. Words are indexed -depth..depth.
int innermost_difference(const std::vector<std::uint8_t>& w1,
                         const std::vector<std::uint8_t>& w2, int depth) {
  for (int k = 0; k <= depth; ++k) {
    if (w1[static_cast<size_t>(depth + k)] != w2[static_cast<size_t>(depth + k)] ||
        w1[static_cast<size_t>(depth - k)] != w2[static_cast<size_t>(depth - k)])
      return k;
  }
  return -1;
}

std::vector<std::vector<std::uint8_t>> all_words(int alphabet, int depth) {
  const long n = base::cylinder_count(alphabet, depth);
  std::vector<std::vector<std::uint8_t>> words;
  words.reserve(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) words.push_back(base::index_to_word(i, alphabet, depth));
  return words;
}

}  // namespace

IsometryCocycle::IsometryCocycle(geom::Model model, int alphabet, int depth,
                                 std::vector<geom::Isometry> table)
    : model_(model), m_(alphabet), depth_(depth), table_(std::move(table)) {
  if (static_cast<long>(table_.size()) != base::cylinder_count(alphabet, depth))
    throw DomainError("IsometryCocycle: table size does not match depth");
  for (const auto& g : table_)
    if (g.model != model) throw DomainError("IsometryCocycle: entry model mismatch");
}

geom::Isometry orbit_product(const IsometryCocycle& A, const base::BasePoint& omega,
                             int n) {
  geom::Isometry out = geom::Isometry::identity(A.model());
  base::BasePoint x = omega;
  for (int i = 0; i < n; ++i) {
    out = A.at(x).compose(out);
    x = x.shifted(1);
  }
  return out;
}

SkewState skew_step(const IsometryCocycle& A, const SkewState& state) {
  return SkewState{state.point.shifted(1),
                   geom::apply_isometry(A.at(state.point), state.fiber)};
}

geom::BoundaryPoint BoundaryCocycle::apply(const base::BasePoint& omega,
                                           const geom::BoundaryPoint& xi) const {
  return geom::boundary_action(table_.at(omega), xi);
}

geom::BoundaryPoint BoundaryCocycle::orbit_apply(const base::BasePoint& omega, int n,
                                                 const geom::BoundaryPoint& xi) const {
  geom::BoundaryPoint out = xi;
  base::BasePoint x = omega;
  for (int i = 0; i < n; ++i) {
    out = geom::boundary_action(table_.at(x), out);
    x = x.shifted(1);
  }
  return out;
}

PpoReport periodic_obstruction_check(const IsometryCocycle& A, int max_period,
                                     double tol,
                                     std::span<const geom::ModelPoint> probes) {
  if (probes.empty()) throw DomainError("periodic_obstruction_check: empty probe set");
  PpoReport report;
  report.tol = tol;
  for (auto& orbit : base::enumerate_periodic_orbits(A.alphabet(), max_period)) {
    const geom::Isometry g = orbit_product(A, orbit.point(), orbit.period);
    double disp = 0.0;
    for (const auto& h : probes)
      disp = std::max(disp, geom::distance(geom::apply_isometry(g, h), h));
    report.max_displacement = std::max(report.max_displacement, disp);
    report.orbits.push_back(OrbitCheck{std::move(orbit), disp});
  }
  report.pass = report.max_displacement <= tol;
  return report;
}

PpoReport boundary_periodic_obstruction_check(
    const IsometryCocycle& A, int max_period, double tol,
    std::span<const geom::BoundaryPoint> probes) {
  if (probes.empty())
    throw DomainError("boundary_periodic_obstruction_check: empty probe set");
  PpoReport report;
  report.tol = tol;
  for (auto& orbit : base::enumerate_periodic_orbits(A.alphabet(), max_period)) {
    const geom::Isometry g = orbit_product(A, orbit.point(), orbit.period);
    double disp = 0.0;
    for (const auto& xi : probes)
      disp = std::max(disp, geom::boundary_gap(geom::boundary_action(g, xi), xi));
    report.max_displacement = std::max(report.max_displacement, disp);
    report.orbits.push_back(OrbitCheck{std::move(orbit), disp});
  }
  report.pass = report.max_displacement <= tol;
  return report;
}

double holder_constant(const IsometryCocycle& A,
                       std::span<const geom::ModelPoint> probes, double tau) {
  if (probes.empty()) throw DomainError("holder_constant: empty probe set");
  const long n = A.size();
  const int depth = A.depth();
  const auto words = all_words(A.alphabet(), depth);

  std::vector<std::vector<geom::ModelPoint>> images(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    images[static_cast<size_t>(i)].reserve(probes.size());
    for (const auto& h : probes)
      images[static_cast<size_t>(i)].push_back(geom::apply_isometry(A.at_index(i), h));
  }

  double best = 0.0;
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < i; ++j) {
      const int k = innermost_difference(words[static_cast<size_t>(i)],
                                         words[static_cast<size_t>(j)], depth);
      if (k < 0) continue;
      const double scale = std::pow(2.0, tau * k);
      for (size_t q = 0; q < probes.size(); ++q) {
        const double d = geom::distance(images[static_cast<size_t>(i)][q],
                                        images[static_cast<size_t>(j)][q]);
        best = std::max(best, d * scale);
      }
    }
  }
  return best;
}

double inverse_holder_constant(const IsometryCocycle& A, const geom::ModelPoint& p,
                               double tau) {
  const long n = A.size();
  const int depth = A.depth();
  const auto words = all_words(A.alphabet(), depth);
  std::vector<geom::ModelPoint> pts;
  pts.reserve(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i)
    pts.push_back(geom::apply_isometry(A.at_index(i).inverse(), p));
  double best = 0.0;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < i; ++j) {
      const int k = innermost_difference(words[static_cast<size_t>(i)],
                                         words[static_cast<size_t>(j)], depth);
      if (k < 0) continue;
      best = std::max(best, geom::distance(pts[static_cast<size_t>(i)],
                                           pts[static_cast<size_t>(j)]) *
                                std::pow(2.0, tau * k));
    }
  return best;
}

double busemann_holder_constant(const BoundarySection& alpha,
                                const geom::ModelPoint& p,
                                std::span<const geom::ModelPoint> probes,
                                double tau) {
  if (probes.empty()) throw DomainError("busemann_holder_constant: empty probe set");
  const long n = alpha.size();
  const int depth = alpha.depth();
  const auto words = all_words(alpha.alphabet(), depth);
  std::vector<std::vector<double>> values(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    values[static_cast<size_t>(i)].reserve(probes.size());
    for (const auto& h : probes)
      values[static_cast<size_t>(i)].push_back(geom::busemann(p, alpha.at_index(i), h));
  }
  double best = 0.0;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < i; ++j) {
      const int k = innermost_difference(words[static_cast<size_t>(i)],
                                         words[static_cast<size_t>(j)], depth);
      if (k < 0) continue;
      const double scale = std::pow(2.0, tau * k);
      for (size_t q = 0; q < probes.size(); ++q)
        best = std::max(best, std::abs(values[static_cast<size_t>(i)][q] -
                                       values[static_cast<size_t>(j)][q]) *
                                  scale);
    }
  return best;
}

SectionInvariance boundary_section_invariance(const IsometryCocycle& A,
                                              const BoundarySection& alpha) {
  const int D = std::max(A.depth(), alpha.depth() + 1);
  const long total = base::cylinder_count(A.alphabet(), D);
  SectionInvariance out;
  for (long idx = 0; idx < total; ++idx) {
    const geom::BoundaryPoint image =
        geom::boundary_action(A.at_subindex(idx, D, 0), alpha.at_subindex(idx, D, 0));
    const double gap = geom::boundary_gap(image, alpha.at_subindex(idx, D, 1));
    if (gap > out.residual) {
      out.residual = gap;
      out.worst_word = idx;
    }
  }
  return out;
}

geom::Isometry CoboundaryInstance::transfer_at(long word_idx) const {
  return generator.at_index(word_idx).compose(anchor_inverse);
}

geom::Isometry CoboundaryInstance::transfer(const base::BasePoint& omega) const {
  return generator.at(omega).compose(anchor_inverse);
}

BoundarySection CoboundaryInstance::boundary_section(
    const geom::BoundaryPoint& xi0) const {
  std::vector<geom::BoundaryPoint> table;
  table.reserve(static_cast<size_t>(generator.size()));
  for (long i = 0; i < generator.size(); ++i)
    table.push_back(geom::boundary_action(generator.at_index(i), xi0));
  return BoundarySection(generator.model(), generator.alphabet(), generator.depth(),
                         std::move(table));
}

BoundarySection CoboundaryInstance::transfer_boundary_section(
    const geom::BoundaryPoint& zeta) const {
  std::vector<geom::BoundaryPoint> table;
  table.reserve(static_cast<size_t>(generator.size()));
  for (long i = 0; i < generator.size(); ++i)
    table.push_back(geom::boundary_action(transfer_at(i), zeta));
  return BoundarySection(generator.model(), generator.alphabet(), generator.depth(),
                         std::move(table));
}

InteriorSection CoboundaryInstance::interior_section(const geom::ModelPoint& h0) const {
  std::vector<geom::ModelPoint> table;
  table.reserve(static_cast<size_t>(generator.size()));
  for (long i = 0; i < generator.size(); ++i)
    table.push_back(geom::apply_isometry(transfer_at(i), h0));
  return InteriorSection(generator.model(), generator.alphabet(), generator.depth(),
                         std::move(table));
}

CoboundaryInstance make_coboundary(IsometryCocycle generator, base::BasePoint anchor) {
  if (generator.alphabet() != anchor.alphabet())
    throw DomainError("make_coboundary: alphabet mismatch");
  const int r = generator.depth();
  const int R = r + 1;
  const long total = base::cylinder_count(generator.alphabet(), R);
  std::vector<geom::Isometry> table;
  table.reserve(static_cast<size_t>(total));
  for (long idx = 0; idx < total; ++idx) {
    const geom::Isometry& next = generator.at_subindex(idx, R, 1);
    const geom::Isometry& here = generator.at_subindex(idx, R, 0);
    table.push_back(next.compose(here.inverse()));
  }
  IsometryCocycle A(generator.model(), generator.alphabet(), R, std::move(table));
  geom::Isometry anchor_inv = generator.at(anchor).inverse();
  return CoboundaryInstance{std::move(generator), std::move(A), std::move(anchor),
                            std::move(anchor_inv)};
}

}  // namespace horo::cocycle
