#include "horo/sampling.hpp"

#include <cmath>

namespace horo::sampling {

namespace {

geom::Word random_reduced_word(Rng& rng, long max_len) {
  const long len = rng.uniform_int(max_len + 1);
  geom::Word w;
  for (long i = 0; i < len; ++i) {
    int l = static_cast<int>(rng.uniform_int(3));
    while (!w.empty() && l == w.back()) l = (l + 1) % 3;
    w.push_back(static_cast<std::uint8_t>(l));
  }
  return w;
}

std::array<std::uint8_t, 3> random_perm(Rng& rng) {
  static constexpr std::array<std::array<std::uint8_t, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  return perms[static_cast<size_t>(rng.uniform_int(6))];
}

}  // namespace

geom::ModelPoint random_point(geom::Model model, Rng& rng) {
  if (model == geom::Model::HalfPlane)
    return geom::ModelPoint::half_plane(
        rng.uniform(-3.0, 3.0), std::exp(rng.uniform(std::log(0.2), std::log(5.0))));
  return geom::ModelPoint::tree(random_reduced_word(rng, 6));
}

geom::BoundaryPoint random_boundary(geom::Model model, Rng& rng) {
  if (model == geom::Model::HalfPlane) {
    const double theta = rng.uniform(0.0, 3.14159265358979323846);
    return geom::BoundaryPoint::projective(std::cos(theta), std::sin(theta));
  }
  geom::Word prefix = random_reduced_word(rng, 3);
  for (;;) {
    const int a = static_cast<int>(rng.uniform_int(3));
    const int b = static_cast<int>(rng.uniform_int(3));
    if (a == b) continue;
    if (!prefix.empty() && prefix.back() == a) continue;
    return geom::BoundaryPoint::tree_end(
        prefix, {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)});
  }
}

geom::Isometry random_isometry(geom::Model model, Rng& rng) {
  if (model == geom::Model::Tree)
    return geom::Isometry::tree(random_reduced_word(rng, 4), random_perm(rng));
  // K A K decomposition with a bounded translation part keeps entries small
  const double t1 = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
  const double t2 = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
  const double s = rng.uniform(-1.2, 1.2);
  const double c1 = std::cos(t1), s1 = std::sin(t1);
  const double c2 = std::cos(t2), s2 = std::sin(t2);
  const double ea = std::exp(0.5 * s), eb = std::exp(-0.5 * s);
  // R(t1) * diag(ea, eb) * R(t2)
  const double a = c1 * ea * c2 - s1 * eb * s2;
  const double b = -c1 * ea * s2 - s1 * eb * c2;
  const double c = s1 * ea * c2 + c1 * eb * s2;
  const double d = -s1 * ea * s2 + c1 * eb * c2;
  return geom::Isometry::half_plane(a, b, c, d);
}

geom::Isometry random_nonidentity_isometry(geom::Model model, Rng& rng) {
  for (int tries = 0; tries < 64; ++tries) {
    geom::Isometry g = random_isometry(model, rng);
    if (!g.is_identity(1e-6)) return g;
  }
  throw Error("random_nonidentity_isometry: generator stuck at the identity");
}

cocycle::IsometryCocycle random_cocycle(geom::Model model, int alphabet, int depth,
                                        Rng& rng) {
  const long n = base::cylinder_count(alphabet, depth);
  std::vector<geom::Isometry> table;
  table.reserve(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) table.push_back(random_isometry(model, rng));
  return cocycle::IsometryCocycle(model, alphabet, depth, std::move(table));
}

livsic::RealCocycle random_real_cocycle(int alphabet, int depth, Rng& rng,
                                        double amplitude) {
  const long n = base::cylinder_count(alphabet, depth);
  std::vector<double> table;
  table.reserve(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) table.push_back(rng.uniform(-amplitude, amplitude));
  return livsic::RealCocycle(alphabet, depth, std::move(table));
}

CoboundarySetup coboundary_setup(geom::Model model, int alphabet, int generator_depth,
                                 int pipeline_depth, std::uint64_t seed) {
  Rng rng(seed);
  const base::TransitivePoint tp = base::transitive_point(alphabet, pipeline_depth);
  cocycle::CoboundaryInstance instance = cocycle::make_coboundary(
      random_cocycle(model, alphabet, generator_depth, rng), tp.point);

  const geom::BoundaryPoint xi0 = random_boundary(model, rng);
  geom::BoundaryPoint eta0 = random_boundary(model, rng);
  for (int tries = 0; tries < 64 && geom::boundary_gap(xi0, eta0) < 0.05; ++tries)
    eta0 = random_boundary(model, rng);
  if (geom::boundary_gap(xi0, eta0) < 0.05)
    throw Error("coboundary_setup: could not separate the boundary pair");

  const geom::ModelPoint p = geom::default_base_point(model);
  const geom::Geodesic line = geom::geodesic_between_boundary(eta0, xi0, p);
  const double t =
      model == geom::Model::Tree ? 0.0 : rng.uniform(-1.0, 1.0);
  const geom::ModelPoint q0 = line.eval(t);
  const geom::ModelPoint h0 =
      geom::apply_isometry(instance.generator.at(tp.point), q0);

  cocycle::BoundarySection alpha = instance.boundary_section(xi0);
  cocycle::BoundarySection beta = instance.boundary_section(eta0);
  return CoboundarySetup{std::move(instance), std::move(alpha), std::move(beta),
                         xi0,  eta0,          h0,
                         p,    tp.point,      tp.horizon};
}

reduction::SectionFamily section_family(const cocycle::CoboundaryInstance& instance) {
  reduction::SectionFamily family;
  family.alpha = [&instance](const geom::ModelPoint& h) {
    return instance.transfer_boundary_section(geom::canonical_line_ends(h).second);
  };
  family.beta = [&instance](const geom::ModelPoint& h) {
    return instance.transfer_boundary_section(geom::canonical_line_ends(h).first);
  };
  return family;
}

}  // namespace horo::sampling
