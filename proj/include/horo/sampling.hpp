#pragma once

#include <cstdint>

#include "horo/cocycle.hpp"
#include "horo/livsic.hpp"
#include "horo/reduction.hpp"
#include "horo/rng.hpp"

// Seeded generators for points, isometries, cocycles and whole coboundary
// test instances. Everything is driven by the splitmix generator so a single
// seed reproduces an experiment.
namespace horo::sampling {

geom::ModelPoint random_point(geom::Model model, Rng& rng);
geom::BoundaryPoint random_boundary(geom::Model model, Rng& rng);
geom::Isometry random_isometry(geom::Model model, Rng& rng);
geom::Isometry random_nonidentity_isometry(geom::Model model, Rng& rng);

cocycle::IsometryCocycle random_cocycle(geom::Model model, int alphabet, int depth,
                                        Rng& rng);
livsic::RealCocycle random_real_cocycle(int alphabet, int depth, Rng& rng,
                                        double amplitude = 1.0);

// A hidden-coboundary experiment: generator B, cocycle A, exact invariant
// boundary sections through a random distinct end pair, and an interior
// anchor h0 = B(omega0) q0 with q0 on the geodesic between the ends.
struct CoboundarySetup {
  cocycle::CoboundaryInstance instance;
  cocycle::BoundarySection alpha;
  cocycle::BoundarySection beta;
  geom::BoundaryPoint xi0;
  geom::BoundaryPoint eta0;
  geom::ModelPoint h0;
  geom::ModelPoint p;
  base::BasePoint anchor;  // omega0, the canonical transitive point
  long orbit_horizon = 0;
};

CoboundarySetup coboundary_setup(geom::Model model, int alphabet, int generator_depth,
                                 int pipeline_depth, std::uint64_t seed);

// Per-anchor invariant sections through the canonical line through each
// anchor, built from the instance's gauge-fixed transfer. The instance must
// outlive the returned family (captured by reference).
reduction::SectionFamily section_family(const cocycle::CoboundaryInstance& instance);

}  // namespace horo::sampling
