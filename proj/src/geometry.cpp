#include "horo/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "horo/rng.hpp"

namespace horo::geom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_model(Model a, Model b, const char* what) {
  if (a != b) throw DomainError(std::string(what) + ": model mismatch");
}

void step_vertex(Word& v, int letter) {
  if (!v.empty() && v.back() == letter)
    v.pop_back();
  else
    v.push_back(static_cast<std::uint8_t>(letter));
}

Word apply_perm(const std::array<std::uint8_t, 3>& perm, const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto l : w) out.push_back(perm[l]);
  return out;
}

// Letters of an end starting at position k, re-aligned to (head, cycle).
std::pair<Word, Word> end_suffix(const BoundaryPoint& e, long k) {
  const long plen = static_cast<long>(e.prefix.size());
  const long clen = static_cast<long>(e.cycle.size());
  if (k < plen)
    return {Word(e.prefix.begin() + k, e.prefix.end()), e.cycle};
  const long rot = (k - plen) % clen;
  Word cyc;
  cyc.reserve(e.cycle.size());
  for (long i = 0; i < clen; ++i)
    cyc.push_back(e.cycle[static_cast<size_t>((rot + i) % clen)]);
  return {Word{}, cyc};
}

// The end reached by following an infinite stream from an anchor vertex,
// as a reduced word from the root. The walk cancels into the anchor for a
// while; once a step appends, every later step appends.
BoundaryPoint tree_end_from(const Word& anchor, const LetterStream& s) {
  if (!s.infinite()) throw DomainError("tree geodesic endpoint: finite stream");
  Word v = anchor;
  long t = 0;
  const long max_cancel = static_cast<long>(anchor.size());
  while (t <= max_cancel) {
    const int l = s.letter(t);
    if (v.empty() || v.back() != l) break;
    v.pop_back();
    ++t;
  }
  const long headlen = static_cast<long>(s.head.size());
  const long clen = static_cast<long>(s.cycle.size());
  while (t < headlen || (t - headlen) % clen != 0) {
    v.push_back(static_cast<std::uint8_t>(s.letter(t)));
    ++t;
  }
  return BoundaryPoint::tree_end(v, s.cycle);
}

LetterStream stream_drop(const LetterStream& s, long n) {
  const long headlen = static_cast<long>(s.head.size());
  if (n <= headlen)
    return LetterStream{Word(s.head.begin() + n, s.head.end()), s.cycle};
  if (!s.infinite()) throw DomainError("stream_drop: past the end of a finite stream");
  const long clen = static_cast<long>(s.cycle.size());
  const long rot = (n - headlen) % clen;
  Word cyc;
  for (long i = 0; i < clen; ++i)
    cyc.push_back(s.cycle[static_cast<size_t>((rot + i) % clen)]);
  return LetterStream{Word{}, cyc};
}

LetterStream stream_prepend(const Word& prep, const LetterStream& s) {
  Word head = prep;
  head.insert(head.end(), s.head.begin(), s.head.end());
  return LetterStream{head, s.cycle};
}

// |v z - u|^2 for the chart pair [u : v] and z = (x, y).
double chart_sq(const BoundaryPoint& xi, const ModelPoint& z) {
  const double re = xi.v * z.x - xi.u;
  const double im = xi.v * z.y;
  return re * re + im * im;
}

long tree_gp_bound(const BoundaryPoint& xi, const BoundaryPoint& eta,
                   const ModelPoint& p) {
  return static_cast<long>(p.addr.size() + xi.prefix.size() + eta.prefix.size() +
                           2 * (xi.cycle.size() + eta.cycle.size())) +
         16;
}

ModelPoint sample_interior(Model model, Rng& rng) {
  if (model == Model::HalfPlane)
    return ModelPoint::half_plane(rng.uniform(-3.0, 3.0),
                                  std::exp(rng.uniform(std::log(0.2), std::log(5.0))));
  const long len = rng.uniform_int(7);
  Word w;
  for (long i = 0; i < len; ++i) {
    int l = static_cast<int>(rng.uniform_int(3));
    if (!w.empty() && l == w.back()) l = (l + 1 + static_cast<int>(rng.uniform_int(2))) % 3;
    if (!w.empty() && l == w.back()) l = (l + 1) % 3;
    w.push_back(static_cast<std::uint8_t>(l));
  }
  return ModelPoint::tree(w);
}

}  // namespace

// ---- words ----

bool is_reduced(const Word& w) {
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 2) return false;
    if (i + 1 < w.size() && w[i] == w[i + 1]) return false;
  }
  return true;
}

Word reduce_concat(const Word& a, const Word& b) {
  Word out = a;
  for (auto l : b) step_vertex(out, l);
  return out;
}

Word reversed_word(const Word& w) { return Word(w.rbegin(), w.rend()); }

int lcp_length(const Word& a, const Word& b) {
  const size_t n = std::min(a.size(), b.size());
  size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return static_cast<int>(i);
}

std::string word_to_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (auto l : w) s.push_back(static_cast<char>('0' + l));
  return s;
}

Word word_from_string(const std::string& s) {
  Word w;
  w.reserve(s.size());
  for (char c : s) {
    if (c < '0' || c > '9') throw DomainError("word_from_string: bad digit");
    w.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return w;
}

// ---- points ----

ModelPoint ModelPoint::half_plane(double x, double y) {
  if (!(y > 0.0)) throw DomainError("half-plane point needs y > 0");
  ModelPoint p;
  p.model = Model::HalfPlane;
  p.x = x;
  p.y = y;
  return p;
}

ModelPoint ModelPoint::tree(Word addr) {
  if (!is_reduced(addr)) throw DomainError("tree address must be a reduced word");
  ModelPoint p;
  p.model = Model::Tree;
  p.addr = std::move(addr);
  return p;
}

BoundaryPoint BoundaryPoint::projective(double u, double v) {
  const double n = std::hypot(u, v);
  if (!(n > 0.0)) throw DomainError("projective chart pair must be nonzero");
  u /= n;
  v /= n;
  if (v < 0.0 || (v == 0.0 && u < 0.0)) {
    u = -u;
    v = -v;
  }
  BoundaryPoint b;
  b.model = Model::HalfPlane;
  b.u = u;
  b.v = v;
  return b;
}

BoundaryPoint BoundaryPoint::half_plane(double xi) { return projective(xi, 1.0); }

BoundaryPoint BoundaryPoint::half_plane_infinity() { return projective(1.0, 0.0); }

BoundaryPoint BoundaryPoint::tree_end(Word prefix, Word cycle) {
  if (cycle.size() < 2) throw DomainError("tree end needs a cycle of length >= 2");
  BoundaryPoint b;
  b.model = Model::Tree;
  b.prefix = std::move(prefix);
  b.cycle = std::move(cycle);
  for (long i = 0; i < static_cast<long>(b.prefix.size() + 2 * b.cycle.size()); ++i)
    if (b.letter(i) == b.letter(i + 1))
      throw DomainError("tree end must be a reduced word");
  return b;
}

bool BoundaryPoint::is_infinity(double tol) const {
  if (model != Model::HalfPlane) throw DomainError("is_infinity: half-plane only");
  return std::abs(v) <= tol;
}

double BoundaryPoint::finite_value() const {
  if (is_infinity()) throw DomainError("finite_value: point at infinity");
  return u / v;
}

int BoundaryPoint::letter(long i) const {
  const long plen = static_cast<long>(prefix.size());
  if (i < plen) return prefix[static_cast<size_t>(i)];
  return cycle[static_cast<size_t>((i - plen) % static_cast<long>(cycle.size()))];
}

bool boundary_equal(const BoundaryPoint& a, const BoundaryPoint& b, double tol) {
  if (a.model != b.model) return false;
  if (a.model == Model::HalfPlane) return std::abs(a.u * b.v - a.v * b.u) <= tol;
  const long horizon = static_cast<long>(std::max(a.prefix.size(), b.prefix.size()) +
                                         a.cycle.size() * b.cycle.size()) +
                       4;
  for (long i = 0; i < horizon; ++i)
    if (a.letter(i) != b.letter(i)) return false;
  return true;
}

double boundary_gap(const BoundaryPoint& a, const BoundaryPoint& b) {
  if (a.model != b.model) throw DomainError("boundary_gap: model mismatch");
  if (a.model == Model::HalfPlane) return std::abs(a.u * b.v - a.v * b.u);
  const long horizon = static_cast<long>(std::max(a.prefix.size(), b.prefix.size()) +
                                         a.cycle.size() * b.cycle.size()) +
                       4;
  for (long i = 0; i < horizon; ++i)
    if (a.letter(i) != b.letter(i)) return std::ldexp(1.0, static_cast<int>(-i));
  return 0.0;
}

// ---- streams & geodesics ----

long LetterStream::length() const {
  return infinite() ? -1 : static_cast<long>(head.size());
}

int LetterStream::letter(long i) const {
  const long headlen = static_cast<long>(head.size());
  if (i < headlen) return head[static_cast<size_t>(i)];
  if (!infinite()) throw DomainError("letter stream: index past a finite stream");
  return cycle[static_cast<size_t>((i - headlen) % static_cast<long>(cycle.size()))];
}

ModelPoint Geodesic::eval(double t) const {
  if (model == Model::HalfPlane) {
    const double s = sign * t + t0;
    if (kind == Kind::Vertical) return ModelPoint::half_plane(c, std::exp(s));
    return ModelPoint::half_plane(c + r * std::tanh(s), r / std::cosh(s));
  }
  const long it = std::lround(t);
  if (std::abs(t - static_cast<double>(it)) > 1e-6)
    throw DomainError("tree geodesic: parameter must be an integer");
  const LetterStream& s = it >= 0 ? fwd : bwd;
  const long n = std::labs(it);
  if (!s.infinite() && n > s.length())
    throw DomainError("tree geodesic: parameter outside the stream");
  Word v = anchor;
  for (long i = 0; i < n; ++i) step_vertex(v, s.letter(i));
  return ModelPoint::tree(std::move(v));
}

BoundaryPoint Geodesic::forward_endpoint() const {
  if (model == Model::HalfPlane) {
    if (kind == Kind::Vertical)
      return sign > 0 ? BoundaryPoint::half_plane_infinity() : BoundaryPoint::half_plane(c);
    return BoundaryPoint::half_plane(sign > 0 ? c + r : c - r);
  }
  return tree_end_from(anchor, fwd);
}

BoundaryPoint Geodesic::backward_endpoint() const {
  if (model == Model::HalfPlane) {
    if (kind == Kind::Vertical)
      return sign > 0 ? BoundaryPoint::half_plane(c) : BoundaryPoint::half_plane_infinity();
    return BoundaryPoint::half_plane(sign > 0 ? c - r : c + r);
  }
  return tree_end_from(anchor, bwd);
}

Geodesic Geodesic::reanchored(double delta) const {
  Geodesic out = *this;
  out.tmin = tmin - delta;
  out.tmax = tmax - delta;
  if (model == Model::HalfPlane) {
    out.t0 = t0 + sign * delta;
    return out;
  }
  const long dd = std::lround(delta);
  if (std::abs(delta - static_cast<double>(dd)) > 1e-6)
    throw DomainError("tree geodesic: reanchor step must be an integer");
  if (dd == 0) return out;
  Word v = anchor;
  if (dd > 0) {
    for (long i = 0; i < dd; ++i) step_vertex(v, fwd.letter(i));
    Word back_prep;
    for (long i = dd - 1; i >= 0; --i) back_prep.push_back(static_cast<std::uint8_t>(fwd.letter(i)));
    out.anchor = std::move(v);
    out.fwd = stream_drop(fwd, dd);
    out.bwd = stream_prepend(back_prep, bwd);
  } else {
    const long n = -dd;
    for (long i = 0; i < n; ++i) step_vertex(v, bwd.letter(i));
    Word fwd_prep;
    for (long i = n - 1; i >= 0; --i) fwd_prep.push_back(static_cast<std::uint8_t>(bwd.letter(i)));
    out.anchor = std::move(v);
    out.bwd = stream_drop(bwd, n);
    out.fwd = stream_prepend(fwd_prep, fwd);
  }
  return out;
}

// ---- isometries ----

Isometry Isometry::half_plane(double a, double b, double c, double d) {
  if (std::abs(a * d - b * c - 1.0) > 1e-9)
    throw DomainError("half-plane isometry: matrix must be unimodular");
  Isometry g;
  g.model = Model::HalfPlane;
  g.a = a;
  g.b = b;
  g.c = c;
  g.d = d;
  return g;
}

Isometry Isometry::tree(Word root_image, std::array<std::uint8_t, 3> perm) {
  if (!is_reduced(root_image)) throw DomainError("tree isometry: root image must be reduced");
  bool seen[3] = {false, false, false};
  for (auto l : perm) {
    if (l > 2 || seen[l]) throw DomainError("tree isometry: bad letter permutation");
    seen[l] = true;
  }
  Isometry g;
  g.model = Model::Tree;
  g.root_image = std::move(root_image);
  g.letter_perm = perm;
  return g;
}

Isometry Isometry::identity(Model model) {
  Isometry g;
  g.model = model;
  return g;
}

Isometry Isometry::inverse() const {
  if (model == Model::HalfPlane) return half_plane(d, -b, -c, a);
  std::array<std::uint8_t, 3> ip{};
  for (std::uint8_t l = 0; l < 3; ++l) ip[letter_perm[l]] = l;
  return tree(apply_perm(ip, reversed_word(root_image)), ip);
}

Isometry Isometry::compose(const Isometry& other) const {
  require_model(model, other.model, "compose");
  if (model == Model::HalfPlane)
    return half_plane(a * other.a + b * other.c, a * other.b + b * other.d,
                      c * other.a + d * other.c, c * other.b + d * other.d);
  std::array<std::uint8_t, 3> p{};
  for (std::uint8_t l = 0; l < 3; ++l) p[l] = letter_perm[other.letter_perm[l]];
  return tree(reduce_concat(root_image, apply_perm(letter_perm, other.root_image)), p);
}

bool Isometry::is_identity(double tol) const {
  if (model == Model::Tree)
    return root_image.empty() && letter_perm[0] == 0 && letter_perm[1] == 1 &&
           letter_perm[2] == 2;
  const double plus = std::max(std::max(std::abs(a - 1), std::abs(d - 1)),
                               std::max(std::abs(b), std::abs(c)));
  const double minus = std::max(std::max(std::abs(a + 1), std::abs(d + 1)),
                                std::max(std::abs(b), std::abs(c)));
  return std::min(plus, minus) <= tol;
}

// ---- metric ----

double distance(const ModelPoint& a, const ModelPoint& b) {
  require_model(a.model, b.model, "distance");
  if (a.model == Model::HalfPlane) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    const double t = (dx * dx + dy * dy) / (2.0 * a.y * b.y);
    // acosh(1 + t) written to stay accurate for nearby points, where the
    // naive form collapses to zero
    return std::log1p(t + std::sqrt(t * (t + 2.0)));
  }
  const int l = lcp_length(a.addr, b.addr);
  return static_cast<double>(a.addr.size() + b.addr.size()) - 2.0 * l;
}

// ---- geodesic constructions ----

Geodesic geodesic_between(const ModelPoint& a, const ModelPoint& b) {
  require_model(a.model, b.model, "geodesic_between");
  Geodesic g;
  g.model = a.model;
  g.tmin = 0.0;
  if (a.model == Model::Tree) {
    if (a.addr == b.addr) throw DomainError("geodesic_between: coincident points");
    const int l = lcp_length(a.addr, b.addr);
    Word head = reversed_word(Word(a.addr.begin() + l, a.addr.end()));
    head.insert(head.end(), b.addr.begin() + l, b.addr.end());
    g.kind = Geodesic::Kind::TreeLine;
    g.anchor = a.addr;
    g.fwd = LetterStream{std::move(head), {}};
    g.bwd = LetterStream{{}, {}};
    g.tmax = static_cast<double>(g.fwd.head.size());
    return g;
  }
  if (a.x == b.x && a.y == b.y) throw DomainError("geodesic_between: coincident points");
  g.tmax = distance(a, b);
  const double scale = std::max({1.0, std::abs(a.x), std::abs(b.x)});
  if (std::abs(a.x - b.x) <= 1e-12 * scale) {
    g.kind = Geodesic::Kind::Vertical;
    g.c = a.x;
    g.sign = (b.y > a.y) ? 1.0 : -1.0;
    g.t0 = std::log(a.y);
    return g;
  }
  g.kind = Geodesic::Kind::Semicircle;
  g.c = (a.x * a.x + a.y * a.y - b.x * b.x - b.y * b.y) / (2.0 * (a.x - b.x));
  g.r = std::hypot(a.x - g.c, a.y);
  g.sign = (b.x > a.x) ? 1.0 : -1.0;
  g.t0 = std::atanh((a.x - g.c) / g.r);
  return g;
}

Geodesic ray_to_boundary(const ModelPoint& a, const BoundaryPoint& alpha) {
  require_model(a.model, alpha.model, "ray_to_boundary");
  Geodesic g;
  g.model = a.model;
  g.tmin = 0.0;
  g.tmax = kInf;
  if (a.model == Model::Tree) {
    long l = 0;
    while (l < static_cast<long>(a.addr.size()) &&
           a.addr[static_cast<size_t>(l)] == alpha.letter(l))
      ++l;
    Word head = reversed_word(Word(a.addr.begin() + l, a.addr.end()));
    auto [sh, sc] = end_suffix(alpha, l);
    head.insert(head.end(), sh.begin(), sh.end());
    g.kind = Geodesic::Kind::TreeLine;
    g.anchor = a.addr;
    g.fwd = LetterStream{std::move(head), std::move(sc)};
    g.bwd = LetterStream{{}, {}};
    return g;
  }
  if (alpha.is_infinity()) {
    g.kind = Geodesic::Kind::Vertical;
    g.c = a.x;
    g.sign = 1.0;
    g.t0 = std::log(a.y);
    return g;
  }
  const double xi = alpha.finite_value();
  const double scale = std::max({1.0, std::abs(a.x), std::abs(xi)});
  if (std::abs(a.x - xi) <= 1e-12 * scale) {
    g.kind = Geodesic::Kind::Vertical;
    g.c = a.x;
    g.sign = -1.0;
    g.t0 = std::log(a.y);
    return g;
  }
  g.kind = Geodesic::Kind::Semicircle;
  g.c = (xi * xi - a.x * a.x - a.y * a.y) / (2.0 * (xi - a.x));
  g.r = std::hypot(a.x - g.c, a.y);
  g.sign = (xi > g.c) ? 1.0 : -1.0;
  g.t0 = std::atanh((a.x - g.c) / g.r);
  return g;
}

Geodesic geodesic_between_boundary(const BoundaryPoint& beta,
                                   const BoundaryPoint& alpha,
                                   const ModelPoint& anchor_ref) {
  require_model(beta.model, alpha.model, "geodesic_between_boundary");
  require_model(beta.model, anchor_ref.model, "geodesic_between_boundary");
  if (boundary_equal(beta, alpha))
    throw DomainError("geodesic_between_boundary: coincident endpoints");
  Geodesic g;
  g.model = beta.model;
  if (beta.model == Model::Tree) {
    long L = 0;
    while (alpha.letter(L) == beta.letter(L)) ++L;
    Word anchor;
    anchor.reserve(static_cast<size_t>(L));
    for (long i = 0; i < L; ++i) anchor.push_back(static_cast<std::uint8_t>(alpha.letter(i)));
    auto [fh, fc] = end_suffix(alpha, L);
    auto [bh, bc] = end_suffix(beta, L);
    g.kind = Geodesic::Kind::TreeLine;
    g.anchor = std::move(anchor);
    g.fwd = LetterStream{std::move(fh), std::move(fc)};
    g.bwd = LetterStream{std::move(bh), std::move(bc)};
    return g;
  }
  const bool ainf = alpha.is_infinity();
  const bool binf = beta.is_infinity();
  const double px = anchor_ref.x, py = anchor_ref.y;
  if (ainf || binf) {
    g.kind = Geodesic::Kind::Vertical;
    g.c = ainf ? beta.finite_value() : alpha.finite_value();
    g.sign = ainf ? 1.0 : -1.0;
    g.t0 = std::log(std::hypot(px - g.c, py));
    return g;
  }
  const double av = alpha.finite_value();
  const double bv = beta.finite_value();
  g.kind = Geodesic::Kind::Semicircle;
  g.c = 0.5 * (av + bv);
  g.r = 0.5 * std::abs(av - bv);
  g.sign = (av > bv) ? 1.0 : -1.0;
  const double dm = std::hypot(px - (g.c - g.r), py);
  const double dp = std::hypot(px - (g.c + g.r), py);
  g.t0 = std::log(dm) - std::log(dp);
  return g;
}

// ---- Gromov products and Busemann functions ----

double gromov_product(const ModelPoint& x, const ModelPoint& y, const ModelPoint& p) {
  return 0.5 * (distance(x, p) + distance(y, p) - distance(x, y));
}

BoundaryProduct gromov_product_boundary(const BoundaryPoint& xi,
                                        const BoundaryPoint& eta,
                                        const ModelPoint& p, int n_max) {
  require_model(xi.model, p.model, "gromov_product_boundary");
  require_model(eta.model, p.model, "gromov_product_boundary");
  if (boundary_equal(xi, eta)) return BoundaryProduct{kInf, 0.0};
  const Geodesic gx = ray_to_boundary(p, xi);
  const Geodesic ge = ray_to_boundary(p, eta);
  auto value_at = [&](long n) {
    return gromov_product(gx.eval(static_cast<double>(n)),
                          ge.eval(static_cast<double>(n)), p);
  };
  long n = n_max;
  if (p.model == Model::Tree) n = 2 * tree_gp_bound(xi, eta, p);
  const double v = value_at(n);
  const double conv = std::abs(v - value_at(n / 2));
  return BoundaryProduct{v, conv};
}

double gromov_product_boundary_interior(const BoundaryPoint& xi,
                                        const ModelPoint& x,
                                        const ModelPoint& p) {
  require_model(xi.model, p.model, "gromov_product_boundary_interior");
  require_model(x.model, p.model, "gromov_product_boundary_interior");
  if (p.model == Model::HalfPlane) {
    const double ratio = (x.y * chart_sq(xi, p)) / (p.y * chart_sq(xi, x));
    return 0.5 * (distance(x, p) + std::log(ratio));
  }
  const Geodesic ray = ray_to_boundary(p, xi);
  const long bound =
      static_cast<long>(p.addr.size() + x.addr.size() + xi.prefix.size() +
                        2 * xi.cycle.size()) +
      8;
  const ModelPoint xn = ray.eval(static_cast<double>(bound));
  return gromov_product(xn, x, p);
}

double busemann(const ModelPoint& p, const BoundaryPoint& alpha, const ModelPoint& h) {
  return 2.0 * gromov_product_boundary_interior(alpha, p, h) - distance(p, h);
}

double busemann_limit(const ModelPoint& p, const BoundaryPoint& alpha,
                      const ModelPoint& h, int n) {
  const Geodesic ray = ray_to_boundary(p, alpha);
  long steps = n;
  if (p.model == Model::Tree)
    steps = static_cast<long>(p.addr.size() + h.addr.size() + alpha.prefix.size() +
                              2 * alpha.cycle.size()) +
            8;
  const ModelPoint xn = ray.eval(static_cast<double>(steps));
  return distance(xn, h) - distance(xn, p);
}

double boundary_metric(const BoundaryPoint& xi, const BoundaryPoint& eta,
                       const ModelPoint& p, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("boundary_metric: epsilon must be positive");
  const BoundaryProduct gp = gromov_product_boundary(xi, eta, p);
  return std::exp(-epsilon * gp.value);
}

HyperbolicityReport strong_hyperbolicity_check(const ModelPoint& p, double epsilon,
                                               long samples, std::uint64_t seed) {
  if (!(epsilon > 0.0))
    throw DomainError("strong_hyperbolicity_check: epsilon must be positive");
  Rng rng(seed);
  HyperbolicityReport report;
  report.samples = samples;
  auto rho = [&](const ModelPoint& a, const ModelPoint& b) {
    return std::exp(-epsilon * gromov_product(a, b, p));
  };
  for (long i = 0; i < samples; ++i) {
    const ModelPoint x = sample_interior(p.model, rng);
    const ModelPoint y = sample_interior(p.model, rng);
    const ModelPoint z = sample_interior(p.model, rng);
    const double margin = rho(x, z) + rho(y, z) - rho(x, y);
    if (margin < 0.0) ++report.violations;
    report.worst_margin = std::min(report.worst_margin, margin);
  }
  return report;
}

namespace {

// Distance from a point to a geodesic segment: the foot of the
// perpendicular has a closed-form canonical parameter, clamped to the
// segment.
double point_to_segment(const ModelPoint& p, const Geodesic& g) {
  double foot;  // canonical parameter of the closest point on the full line
  if (g.kind == Geodesic::Kind::Vertical) {
    foot = std::log(std::hypot(p.x - g.c, p.y));
  } else {
    foot = std::log(std::hypot(p.x - (g.c - g.r), p.y)) -
           std::log(std::hypot(p.x - (g.c + g.r), p.y));
  }
  double t = g.sign * (foot - g.t0);
  t = std::min(std::max(t, g.tmin), g.tmax);
  return distance(p, g.eval(t));
}

}  // namespace

double slimness_estimate(const ModelPoint& x, const ModelPoint& y,
                         const ModelPoint& z, int grid) {
  if (grid < 2) throw DomainError("slimness_estimate: grid must be >= 2");
  struct Side {
    Geodesic geo;
    double len;
  };
  const Side sides[3] = {{geodesic_between(x, y), distance(x, y)},
                         {geodesic_between(y, z), distance(y, z)},
                         {geodesic_between(x, z), distance(x, z)}};
  const bool tree = x.model == Model::Tree;
  auto params = [&](const Side& s, int n) {
    std::vector<double> ts;
    if (tree) {
      const long m = std::lround(s.len);
      for (long k = 0; k <= m; ++k) ts.push_back(static_cast<double>(k));
    } else {
      for (int k = 0; k < n; ++k)
        ts.push_back(s.len * static_cast<double>(k) / static_cast<double>(n - 1));
    }
    return ts;
  };
  double delta = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int j1 = (i + 1) % 3, j2 = (i + 2) % 3;
    std::vector<ModelPoint> tree_targets;
    if (tree) {
      for (int j : {j1, j2})
        for (double t : params(sides[j], 0)) tree_targets.push_back(sides[j].geo.eval(t));
    }
    for (double t : params(sides[i], grid)) {
      const ModelPoint q = sides[i].geo.eval(t);
      double best = kInf;
      if (tree) {
        for (const ModelPoint& w : tree_targets) best = std::min(best, distance(q, w));
      } else {
        best = std::min(point_to_segment(q, sides[j1].geo),
                        point_to_segment(q, sides[j2].geo));
      }
      delta = std::max(delta, best);
    }
  }
  return delta;
}

// ---- actions ----

ModelPoint apply_isometry(const Isometry& g, const ModelPoint& a) {
  require_model(g.model, a.model, "apply_isometry");
  if (g.model == Model::Tree)
    return ModelPoint::tree(reduce_concat(g.root_image, apply_perm(g.letter_perm, a.addr)));
  const double det = g.a * g.d - g.b * g.c;
  if (std::abs(det - 1.0) > 1e-9)
    throw DomainError("apply_isometry: matrix must be unimodular");
  const double den = (g.c * a.x + g.d) * (g.c * a.x + g.d) + (g.c * a.y) * (g.c * a.y);
  const double nx = (g.a * a.x + g.b) * (g.c * a.x + g.d) + g.a * g.c * a.y * a.y;
  const double ny = det * a.y;
  return ModelPoint::half_plane(nx / den, ny / den);
}

BoundaryPoint boundary_action(const Isometry& g, const BoundaryPoint& xi) {
  require_model(g.model, xi.model, "boundary_action");
  if (g.model == Model::HalfPlane) {
    const double det = g.a * g.d - g.b * g.c;
    if (std::abs(det - 1.0) > 1e-9)
      throw DomainError("boundary_action: matrix must be unimodular");
    return BoundaryPoint::projective(g.a * xi.u + g.b * xi.v, g.c * xi.u + g.d * xi.v);
  }
  const BoundaryPoint mapped =
      BoundaryPoint::tree_end(apply_perm(g.letter_perm, xi.prefix),
                              apply_perm(g.letter_perm, xi.cycle));
  Word head = g.root_image;
  long i = 0;
  while (!head.empty() && head.back() == mapped.letter(i)) {
    head.pop_back();
    ++i;
  }
  auto [sh, sc] = end_suffix(mapped, i);
  head.insert(head.end(), sh.begin(), sh.end());
  return BoundaryPoint::tree_end(std::move(head), std::move(sc));
}

BoundaryPoint ray_endpoint_through(const ModelPoint& a, const ModelPoint& b) {
  require_model(a.model, b.model, "ray_endpoint_through");
  if (a.model == Model::HalfPlane) return geodesic_between(a, b).forward_endpoint();
  if (a.addr == b.addr) throw DomainError("ray_endpoint_through: coincident points");
  const int l = lcp_length(a.addr, b.addr);
  Word head = reversed_word(Word(a.addr.begin() + l, a.addr.end()));
  head.insert(head.end(), b.addr.begin() + l, b.addr.end());
  const int last = head.back();
  const int e1 = last == 0 ? 1 : 0;
  const int e2 = e1 == 0 ? 1 : 0;
  LetterStream stream{std::move(head),
                      {static_cast<std::uint8_t>(e1), static_cast<std::uint8_t>(e2)}};
  return tree_end_from(a.addr, stream);
}

std::pair<BoundaryPoint, BoundaryPoint> canonical_line_ends(const ModelPoint& h) {
  if (h.model == Model::HalfPlane)
    return {BoundaryPoint::half_plane(h.x), BoundaryPoint::half_plane_infinity()};
  if (h.addr.empty())
    return {BoundaryPoint::tree_end({}, {2, 0}), BoundaryPoint::tree_end({}, {0, 1})};
  const int last = h.addr.back();
  const int f1 = last == 0 ? 1 : 0;
  const int f2 = f1 == 0 ? 1 : 0;
  BoundaryPoint forward = BoundaryPoint::tree_end(
      h.addr, {static_cast<std::uint8_t>(f1), static_cast<std::uint8_t>(f2)});
  // backward: down to the root, then away along letters avoiding the arrival
  // edge
  const int first = h.addr.front();
  const int b1 = first == 0 ? 1 : 0;
  const int b2 = b1 == 0 ? 1 : 0;
  BoundaryPoint backward = BoundaryPoint::tree_end(
      {}, {static_cast<std::uint8_t>(b1), static_cast<std::uint8_t>(b2)});
  return {backward, forward};
}

bool Horosphere::contains(const ModelPoint& h, double tol) const {
  return std::abs(busemann(base, direction, h) - level) <= tol;
}

// ---- probe sets ----

std::vector<ModelPoint> default_probe_points(Model model, const ModelPoint& p) {
  std::vector<ModelPoint> out;
  if (model == Model::HalfPlane) {
    const double px = p.x, py = p.y;
    out.push_back(ModelPoint::half_plane(px, py * std::exp(1.5)));
    out.push_back(ModelPoint::half_plane(px, py * std::exp(-1.5)));
    out.push_back(ModelPoint::half_plane(px + 1.2 * py, py));
    out.push_back(ModelPoint::half_plane(px - 1.2 * py, py));
    out.push_back(ModelPoint::half_plane(px + 0.8 * py, py * std::exp(0.8)));
    out.push_back(ModelPoint::half_plane(px - 0.8 * py, py * std::exp(0.8)));
    out.push_back(ModelPoint::half_plane(px + 0.8 * py, py * std::exp(-0.8)));
    out.push_back(ModelPoint::half_plane(px - 0.8 * py, py * std::exp(-0.8)));
    return out;
  }
  // breadth-first over the tree, parent before children, skipping p itself
  std::vector<Word> frontier{p.addr};
  std::vector<Word> next;
  for (int depth = 1; depth <= 3 && out.size() < 8; ++depth) {
    next.clear();
    for (const Word& w : frontier) {
      for (int l = 0; l < 3; ++l) {
        Word v = w;
        step_vertex(v, l);
        next.push_back(v);
        if (out.size() < 8 && !(v == p.addr)) {
          bool dup = false;
          for (const auto& q : out) dup = dup || q.addr == v;
          if (!dup) out.push_back(ModelPoint::tree(v));
        }
      }
    }
    frontier = next;
  }
  return out;
}

std::vector<BoundaryPoint> default_boundary_probes(Model model) {
  std::vector<BoundaryPoint> out;
  if (model == Model::HalfPlane) {
    out.push_back(BoundaryPoint::half_plane_infinity());
    for (double v : {0.0, 1.0, -1.0, 2.0, -2.0, 0.5, -0.5})
      out.push_back(BoundaryPoint::half_plane(v));
    return out;
  }
  out.push_back(BoundaryPoint::tree_end({}, {0, 1}));
  out.push_back(BoundaryPoint::tree_end({}, {1, 0}));
  out.push_back(BoundaryPoint::tree_end({}, {1, 2}));
  out.push_back(BoundaryPoint::tree_end({}, {2, 1}));
  out.push_back(BoundaryPoint::tree_end({}, {0, 2}));
  out.push_back(BoundaryPoint::tree_end({}, {2, 0}));
  out.push_back(BoundaryPoint::tree_end({2}, {0, 1}));
  out.push_back(BoundaryPoint::tree_end({1}, {2, 0}));
  return out;
}

ModelPoint default_base_point(Model model) {
  if (model == Model::HalfPlane) return ModelPoint::half_plane(0.0, 1.0);
  return ModelPoint::tree({});
}

}  // namespace horo::geom
