#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "horo/errors.hpp"

// Two concrete unique-visibility Gromov hyperbolic models: the Poincare
// upper half-plane and the 3-regular tree. Points, boundaries, geodesics,
// Gromov products, Busemann functions, horospheres and the exponential
// boundary metric share one operation surface across both models.
//
// Tree conventions: edges carry a proper 3-coloring by {0,1,2}; a vertex is
// the reduced word of edge colors on its root path (reduced = no two equal
// adjacent letters), an end is an infinite reduced word stored as prefix +
// repeating cycle. All tree quantities are exact integers.
namespace horo::geom {

enum class Model { HalfPlane, Tree };

using Word = std::vector<std::uint8_t>;

bool is_reduced(const Word& w);
// Concatenate and cancel at the junction (letters are involutions).
Word reduce_concat(const Word& a, const Word& b);
Word reversed_word(const Word& w);
int lcp_length(const Word& a, const Word& b);
std::string word_to_string(const Word& w);
Word word_from_string(const std::string& s);

struct ModelPoint {
  Model model = Model::HalfPlane;
  double x = 0.0, y = 1.0;  // half-plane coordinates, y > 0
  Word addr;                // tree vertex address

  static ModelPoint half_plane(double x, double y);
  static ModelPoint tree(Word addr);
};

struct BoundaryPoint {
  Model model = Model::HalfPlane;
  // Half-plane: projective chart pair [u : v] on the extended real line,
  // kept unit-normalized; [1 : 0] is the point at infinity.
  double u = 1.0, v = 0.0;
  // Tree: end letters, prefix then repeating cycle (cycle length >= 2).
  Word prefix;
  Word cycle;

  static BoundaryPoint half_plane(double xi);
  static BoundaryPoint half_plane_infinity();
  static BoundaryPoint projective(double u, double v);
  static BoundaryPoint tree_end(Word prefix, Word cycle);

  bool is_infinity(double tol = 1e-9) const;
  double finite_value() const;  // u / v; requires a finite point
  int letter(long i) const;     // tree end letter at position i >= 0
};

// Chart-aware equality: half-plane points compare by the projective cross
// term |u1 v2 - u2 v1|, tree ends by letters.
bool boundary_equal(const BoundaryPoint& a, const BoundaryPoint& b,
                    double tol = 1e-9);
// Residual-style gap: the cross term (half-plane) or 2^-lcp (tree).
double boundary_gap(const BoundaryPoint& a, const BoundaryPoint& b);

// Letters of a path, possibly eventually periodic (infinite when cycle is
// nonempty).
struct LetterStream {
  Word head;
  Word cycle;
  bool infinite() const { return !cycle.empty(); }
  long length() const;  // head size for finite streams
  int letter(long i) const;
};

// Unit-speed geodesic (segment, ray or complete line). Half-plane geodesics
// evaluate anywhere; tree geodesics evaluate at integer parameters inside
// their streams.
struct Geodesic {
  Model model = Model::HalfPlane;

  enum class Kind { Vertical, Semicircle, TreeLine };
  Kind kind = Kind::Vertical;
  // Canonical parametrizations: vertical (c, e^s); semicircle
  // (c + r tanh s, r sech s). eval(t) = canonical(sign * t + t0).
  double c = 0.0, r = 1.0;
  double sign = 1.0, t0 = 0.0;

  double tmin = -std::numeric_limits<double>::infinity();
  double tmax = std::numeric_limits<double>::infinity();

  // Tree line: anchor vertex with forward/backward letter streams.
  Word anchor;
  LetterStream fwd, bwd;

  ModelPoint eval(double t) const;
  BoundaryPoint forward_endpoint() const;
  BoundaryPoint backward_endpoint() const;
  // The geodesic t -> eval(t + delta).
  Geodesic reanchored(double delta) const;
};

struct Isometry {
  Model model = Model::HalfPlane;
  // Half-plane: unimodular matrix acting by fractional-linear maps.
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
  // Tree: image of the root plus a global letter permutation; the vertex
  // action is addr -> reduce(root_image . perm(addr)).
  Word root_image;
  std::array<std::uint8_t, 3> letter_perm{0, 1, 2};

  static Isometry half_plane(double a, double b, double c, double d);
  static Isometry tree(Word root_image, std::array<std::uint8_t, 3> perm);
  static Isometry identity(Model model);

  Isometry inverse() const;
  Isometry compose(const Isometry& other) const;  // this after other
  // Half-plane identity is the coset {+I, -I}.
  bool is_identity(double tol = 1e-9) const;
};

double distance(const ModelPoint& a, const ModelPoint& b);

Geodesic geodesic_between(const ModelPoint& a, const ModelPoint& b);
Geodesic ray_to_boundary(const ModelPoint& a, const BoundaryPoint& alpha);
// Complete geodesic from beta to alpha, anchored so that eval(0) is the
// point closest to anchor_ref (half-plane) or the common-prefix vertex
// (tree).
Geodesic geodesic_between_boundary(const BoundaryPoint& beta,
                                   const BoundaryPoint& alpha,
                                   const ModelPoint& anchor_ref);

double gromov_product(const ModelPoint& x, const ModelPoint& y,
                      const ModelPoint& p);

struct BoundaryProduct {
  double value = 0.0;
  double convergence = 0.0;  // |value(n_max) - value(n_max / 2)|
};

// (xi, eta)_p as the limit of products along the rays from p, evaluated at
// n_max; +infinity iff the ends coincide. Exact for the tree.
BoundaryProduct gromov_product_boundary(const BoundaryPoint& xi,
                                        const BoundaryPoint& eta,
                                        const ModelPoint& p, int n_max = 30);

// (xi, x)_p for a boundary point and an interior point; closed form in the
// half-plane, exact in the tree.
double gromov_product_boundary_interior(const BoundaryPoint& xi,
                                        const ModelPoint& x,
                                        const ModelPoint& p);

// Busemann value b_{p,alpha}(h), computed through the extended Gromov
// product (closed form); busemann_limit is the defining limit along the ray
// from p, kept as a cross-check.
double busemann(const ModelPoint& p, const BoundaryPoint& alpha,
                const ModelPoint& h);
double busemann_limit(const ModelPoint& p, const BoundaryPoint& alpha,
                      const ModelPoint& h, int n);

// rho_eps(xi, eta) = exp(-eps (xi, eta)_p).
double boundary_metric(const BoundaryPoint& xi, const BoundaryPoint& eta,
                       const ModelPoint& p, double epsilon);

struct HyperbolicityReport {
  long samples = 0;
  long violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
};

// Samples interior triples and checks the exponential triangle inequality
// rho_eps(x,y) <= rho_eps(x,z) + rho_eps(y,z).
HyperbolicityReport strong_hyperbolicity_check(const ModelPoint& p,
                                               double epsilon, long samples,
                                               std::uint64_t seed);

// Smallest delta (estimated on a grid) such that the triangle xyz is
// delta-slim.
double slimness_estimate(const ModelPoint& x, const ModelPoint& y,
                         const ModelPoint& z, int grid);

ModelPoint apply_isometry(const Isometry& g, const ModelPoint& a);
BoundaryPoint boundary_action(const Isometry& g, const BoundaryPoint& xi);

// Forward endpoint of the ray from `a` through `b`. In the tree the
// extension past b follows the smallest non-backtracking letter.
BoundaryPoint ray_endpoint_through(const ModelPoint& a, const ModelPoint& b);

// The two ends (backward, forward) of a canonical geodesic line through h:
// the vertical line in the half-plane, the root line in the tree.
std::pair<BoundaryPoint, BoundaryPoint> canonical_line_ends(const ModelPoint& h);

struct Horosphere {
  ModelPoint base;
  BoundaryPoint direction;
  double level = 0.0;
  bool contains(const ModelPoint& h, double tol = 1e-8) const;
};

// Eight fixed probe points in the ball of radius 3 around p.
std::vector<ModelPoint> default_probe_points(Model model, const ModelPoint& p);
// Eight fixed boundary probes.
std::vector<BoundaryPoint> default_boundary_probes(Model model);

ModelPoint default_base_point(Model model);

}  // namespace horo::geom
