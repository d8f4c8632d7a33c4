#pragma once

#include <span>
#include <vector>

#include "horo/base.hpp"
#include "horo/geometry.hpp"

// Isometry-valued cocycles over the shift: dynamical products, skew
// products, induced boundary cocycles, periodic-obstruction checks, Holder
// estimates and the coboundary test generator.
namespace horo::cocycle {

// Locally-constant cocycle: a total table from central words of length
// 2*depth+1 to isometries of one model space.
class IsometryCocycle {
public:
  IsometryCocycle(geom::Model model, int alphabet, int depth,
                  std::vector<geom::Isometry> table);

  geom::Model model() const { return model_; }
  int alphabet() const { return m_; }
  int depth() const { return depth_; }
  long size() const { return static_cast<long>(table_.size()); }

  const geom::Isometry& at_index(long word_idx) const {
    return table_[static_cast<size_t>(word_idx)];
  }
  // Evaluate on a shift point: table lookup on its central word.
  const geom::Isometry& at(const base::BasePoint& omega) const {
    return table_[static_cast<size_t>(base::word_index(omega, depth_))];
  }
  // Lookup from a deeper word index; shift = 1 evaluates at the shifted
  // point.
  const geom::Isometry& at_subindex(long deeper_idx, int deeper_depth,
                                    int shift = 0) const {
    return table_[static_cast<size_t>(
        base::central_subindex(deeper_idx, m_, deeper_depth, depth_, shift))];
  }
  const std::vector<geom::Isometry>& table() const { return table_; }

private:
  geom::Model model_;
  int m_;
  int depth_;
  std::vector<geom::Isometry> table_;
};

// A^n(omega): ordered product of the cocycle along the orbit; A^0 = id.
geom::Isometry orbit_product(const IsometryCocycle& A, const base::BasePoint& omega,
                             int n);

struct SkewState {
  base::BasePoint point;
  geom::ModelPoint fiber;
};

// One step of the skew product (omega, h) -> (T omega, A(omega) h).
SkewState skew_step(const IsometryCocycle& A, const SkewState& state);

// The induced cocycle on the boundary: same table, actions routed through
// the boundary extension.
class BoundaryCocycle {
public:
  explicit BoundaryCocycle(IsometryCocycle table) : table_(std::move(table)) {}
  const IsometryCocycle& table() const { return table_; }
  geom::BoundaryPoint apply(const base::BasePoint& omega,
                            const geom::BoundaryPoint& xi) const;
  // (A*)^n applied to xi along the orbit of omega.
  geom::BoundaryPoint orbit_apply(const base::BasePoint& omega, int n,
                                  const geom::BoundaryPoint& xi) const;

private:
  IsometryCocycle table_;
};

// Tabulated section over depth-d cylinders with nearest-cylinder extension.
template <class V>
class Section {
public:
  Section(geom::Model model, int alphabet, int depth, std::vector<V> table)
      : model_(model), m_(alphabet), depth_(depth), table_(std::move(table)) {
    if (static_cast<long>(table_.size()) != base::cylinder_count(alphabet, depth))
      throw DomainError("Section: table size does not match depth");
  }

  geom::Model model() const { return model_; }
  int alphabet() const { return m_; }
  int depth() const { return depth_; }
  long size() const { return static_cast<long>(table_.size()); }

  const V& at_index(long idx) const { return table_[static_cast<size_t>(idx)]; }
  const V& operator()(const base::BasePoint& omega) const {
    return table_[static_cast<size_t>(base::word_index(omega, depth_))];
  }
  const V& at_subindex(long deeper_idx, int deeper_depth, int shift = 0) const {
    return table_[static_cast<size_t>(
        base::central_subindex(deeper_idx, m_, deeper_depth, depth_, shift))];
  }
  const std::vector<V>& table() const { return table_; }

private:
  geom::Model model_;
  int m_;
  int depth_;
  std::vector<V> table_;
};

using BoundarySection = Section<geom::BoundaryPoint>;
using InteriorSection = Section<geom::ModelPoint>;
using RealSection = Section<double>;

struct OrbitCheck {
  base::PeriodicOrbit orbit;
  double displacement = 0.0;
};

struct PpoReport {
  std::vector<OrbitCheck> orbits;
  double max_displacement = 0.0;
  double tol = 0.0;
  bool pass = true;
};

// Periodic obstruction: A^{n*}(omega*) must act as the identity at every
// periodic point of period <= max_period; displacement is measured on the
// probe set (modulo sign in the half-plane, where -I acts trivially).
PpoReport periodic_obstruction_check(const IsometryCocycle& A, int max_period,
                                     double tol,
                                     std::span<const geom::ModelPoint> probes);

// Same check for the induced boundary cocycle, displacement in the chart gap.
PpoReport boundary_periodic_obstruction_check(
    const IsometryCocycle& A, int max_period, double tol,
    std::span<const geom::BoundaryPoint> probes);

// Empirical Holder constant sup d(A(w1)h, A(w2)h) / d(w1,w2)^tau over an
// exhaustive scan of cylinder pairs and the probe set.
double holder_constant(const IsometryCocycle& A,
                       std::span<const geom::ModelPoint> probes, double tau);

// Same for the inverse cocycle evaluated at p.
double inverse_holder_constant(const IsometryCocycle& A, const geom::ModelPoint& p,
                               double tau);

// Empirical Holder-Busemann constant of a boundary section:
// sup |b_{p,alpha(w1)}(h) - b_{p,alpha(w2)}(h)| / d(w1,w2)^tau.
double busemann_holder_constant(const BoundarySection& alpha,
                                const geom::ModelPoint& p,
                                std::span<const geom::ModelPoint> probes,
                                double tau);

struct SectionInvariance {
  double residual = 0.0;
  long worst_word = -1;
};

// Residual of A*(w) alpha(w) = alpha(sigma w) over all determined cylinder
// transitions.
SectionInvariance boundary_section_invariance(const IsometryCocycle& A,
                                              const BoundarySection& alpha);

// Coboundary generator: A(w) = B(sigma w) B(w)^{-1} from a generator B,
// gauge-fixed at an anchor point. Retains exact invariant sections and the
// ground-truth transfer for oracle comparisons.
struct CoboundaryInstance {
  IsometryCocycle generator;        // B, depth r
  IsometryCocycle cocycle;          // A, depth r + 1
  base::BasePoint anchor;           // omega0
  geom::Isometry anchor_inverse;    // B(omega0)^{-1}

  // Ground-truth transfer C(w) = B(w) B(omega0)^{-1}; C(omega0) = id.
  geom::Isometry transfer_at(long word_idx) const;
  geom::Isometry transfer(const base::BasePoint& omega) const;

  // Exact invariant sections: w -> B*(w) xi0 and w -> B(w) B(omega0)^{-1} h0.
  BoundarySection boundary_section(const geom::BoundaryPoint& xi0) const;
  BoundarySection transfer_boundary_section(const geom::BoundaryPoint& zeta) const;
  InteriorSection interior_section(const geom::ModelPoint& h0) const;
};

CoboundaryInstance make_coboundary(IsometryCocycle generator,
                                   base::BasePoint anchor);

}  // namespace horo::cocycle
