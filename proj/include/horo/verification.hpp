#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "horo/geometry.hpp"

// Randomized verification suites for the geometric identities the rest of
// the project leans on: Busemann calculus, boundary actions, strong
// hyperbolicity and regularity spot-checks. Tree statistics are exact
// integers; half-plane statistics carry floating-point tolerances.
namespace horo::verification {

struct SuiteItem {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string relation = "<=";  // "<=" or ">"
  bool pass = true;
  long instances = 0;
};

struct SuiteReport {
  std::string suite;
  std::vector<SuiteItem> items;
  bool pass() const {
    for (const auto& it : items)
      if (!it.pass) return false;
    return true;
  }
};

// Busemann identities along geodesics, under isometries, 1-Lipschitz
// property and base-point change.
SuiteReport busemann_suite(geom::Model model, int instances, std::uint64_t seed,
                           double tol);

// Boundary extension: compatibility with composition, faithfulness, and the
// Lipschitz bound of the induced boundary maps.
SuiteReport boundary_action_suite(geom::Model model, int instances,
                                  std::uint64_t seed, double tol);

// Exponential triangle inequality on sampled triples plus agreement of the
// closed-form Busemann evaluation with the defining limit.
SuiteReport strong_hyperbolicity_suite(geom::Model model, double epsilon,
                                       long samples, int agreement_instances,
                                       std::uint64_t seed);

// Empirical regularity checks: geodesic stability under endpoint
// perturbation, convexity of small balls, continuity of the backward
// endpoint, and monotone convergence of the Busemann limit.
SuiteReport regularity_suite(geom::Model model, int instances, std::uint64_t seed);

}  // namespace horo::verification
