#pragma once

#include <vector>

#include "horo/base.hpp"
#include "horo/cocycle.hpp"

// Constructive solver for the real cohomological equation
// u(T omega) - u(omega) = psi(omega) over the shift, with periodic-orbit
// obstruction checking and residual reporting.
namespace horo::livsic {

// Locally-constant real-valued cocycle: central word -> value.
class RealCocycle {
public:
  RealCocycle(int alphabet, int depth, std::vector<double> table);

  int alphabet() const { return m_; }
  int depth() const { return depth_; }
  long size() const { return static_cast<long>(table_.size()); }

  double at_index(long idx) const { return table_[static_cast<size_t>(idx)]; }
  double at(const base::BasePoint& omega) const {
    return table_[static_cast<size_t>(base::word_index(omega, depth_))];
  }
  double at_subindex(long deeper_idx, int deeper_depth, int shift = 0) const {
    return table_[static_cast<size_t>(
        base::central_subindex(deeper_idx, m_, deeper_depth, depth_, shift))];
  }
  const std::vector<double>& table() const { return table_; }

private:
  int m_;
  int depth_;
  std::vector<double> table_;
};

struct OrbitSum {
  base::PeriodicOrbit orbit;
  double sum = 0.0;
};

struct RealPpoReport {
  std::vector<OrbitSum> orbits;
  double max_abs_sum = 0.0;
  double tol = 0.0;
  bool pass = true;
};

// Orbit sums of psi over every periodic orbit of period <= max_period; the
// necessary obstruction for solvability.
RealPpoReport periodic_sum_check(const RealCocycle& psi, int max_period, double tol);

struct SolveOptions {
  int depth = 6;            // tabulation depth of the solution
  long orbit_budget = 0;    // 0: the transitive hitting horizon for `depth`
  double tau = 1.0;         // exponent for the Holder consistency report
  int obstruction_max_period = 8;
  double obstruction_tol = 1e-8;
};

struct RealSolution {
  cocycle::RealSection section;
  double residual = 0.0;         // sup |u(sigma w) - u(w) - psi(w)|
  double holder_estimate = 0.0;  // sup |du| / d^tau over orbit near-returns
  double tabulation_bound = 0.0; // holder_estimate * 2^(-depth*tau) + float term
  double float_term = 0.0;       // summation-error part of the bound
  long steps = 0;
};

// Birkhoff-sum construction along the forward orbit of `anchor`:
// u(anchor) = u_anchor, first orbit hit of each cylinder freezes its value.
// Throws ObstructionError when psi fails the periodic-sum check and
// CoverageError when the orbit misses cylinders within the budget.
RealSolution solve(const RealCocycle& psi, const base::BasePoint& anchor,
                   double u_anchor, const SolveOptions& opt);

// Exhaustive residual of a tabulated solution over all determined cylinder
// transitions.
double solution_residual(const cocycle::RealSection& u, const RealCocycle& psi);

struct VerifyReport {
  double residual = 0.0;
  double tol = 0.0;
  bool pass = true;
};

VerifyReport verify_solution(const cocycle::RealSection& u, const RealCocycle& psi,
                             double tol);

// psi = g(sigma .) - g(.), one depth deeper than g. Telescopes to zero over
// every periodic orbit.
RealCocycle telescoped(const RealCocycle& g);

}  // namespace horo::livsic
