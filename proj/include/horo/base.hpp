#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "horo/errors.hpp"

// The base system: the two-sided full shift on m symbols with the 2^-k
// metric, transitive points, periodic orbits and the exact closing property.
namespace horo::base {

// How symbols outside the stored window are generated.
enum class TailRule { ZeroFill, PeriodicFill, EnumerationFill };

// Equality of shift points is decided up to this horizon on each side.
// Everything downstream is locally constant, so deeper symbols never
// influence a computed value.
inline constexpr int kEqualityHorizon = 64;

// Symbol at position j >= 0 of the fixed enumeration sequence: all words
// over {0..m-1} listed by length, then lexicographically, concatenated.
// Positions j < 0 read as 0.
int enumeration_symbol(int alphabet, long j);

// A point of the full shift: an exact symbol window plus a deterministic
// tail rule, viewed through a movable origin so that shifting is O(1).
class BasePoint {
public:
  BasePoint(int alphabet, TailRule rule, std::vector<std::uint8_t> window,
            long window_origin);

  static BasePoint constant(int alphabet, std::uint8_t symbol);
  // Word centered at the origin (odd length), tails by `rule`.
  static BasePoint from_central_word(int alphabet,
                                     const std::vector<std::uint8_t>& word,
                                     TailRule rule = TailRule::ZeroFill);

  int alphabet() const { return m_; }
  TailRule tail_rule() const { return rule_; }

  // Symbol at index i relative to the current origin.
  int symbol(long i) const;

  BasePoint shifted(long n = 1) const;

  // Central window, symbols at indices -depth..depth.
  std::vector<std::uint8_t> window(int depth) const;

private:
  int m_;
  TailRule rule_;
  std::vector<std::uint8_t> win_;
  long lo_ = 0;   // raw index of win_[0]
  long org_ = 0;  // symbol(i) reads raw index org_ + i
  int raw(long j) const;
};

bool equal_points(const BasePoint& x, const BasePoint& y,
                  int horizon = kEqualityHorizon);

// d(x, y) = 2^-k with k the largest n such that the windows agree for
// |i| < n; 0 once agreement reaches the horizon.
double metric(const BasePoint& x, const BasePoint& y,
              int horizon = kEqualityHorizon);

// One application of the shift: (Tx)_i = x_{i+1}.
BasePoint shift_step(const BasePoint& x);

struct PeriodicOrbit {
  int alphabet = 2;
  int period = 1;
  std::vector<std::uint8_t> word;  // repeating word, length == period

  // The induced periodic point, optionally phase-shifted.
  BasePoint point(int phase = 0) const;
};

// Exact closing constants for the full shift with the 2^-k metric.
struct ClosingCertificate {
  double c = 1.0;
  double lambda = 0.0;
  double delta0 = 1.0;
  static ClosingCertificate full_shift() {
    return ClosingCertificate{1.0, std::log(2.0), 1.0};
  }
};

struct TransitivePoint {
  BasePoint point;
  long horizon;  // every word of length 2*depth+1 is visited by this time
};

// A point whose forward orbit is 2^-depth dense, together with the hitting
// horizon N(depth). Built by concatenating the enumeration of all finite
// words to the right of the origin, zeros to the left.
TransitivePoint transitive_point(int alphabet, int depth);

// One representative per cyclic class of primitive words of length
// <= max_period (no duplicates across divisor periods).
std::vector<PeriodicOrbit> enumerate_periodic_orbits(int alphabet,
                                                     int max_period,
                                                     long cap = 1L << 20);

// The period-k point that copies x on indices [0, k). Requires
// d(x, T^k x) < delta0 of the shift certificate.
PeriodicOrbit closing_point(const BasePoint& x, int k);

// ---- cylinder/word helpers ----

// m^(2*depth+1), guarded by a cap.
long cylinder_count(int alphabet, int depth, long cap = 1L << 26);

// Index of the central word of x at `depth` (leftmost symbol most
// significant).
long word_index(const BasePoint& x, int depth);

std::vector<std::uint8_t> index_to_word(long idx, int alphabet, int depth);
long index_from_word(const std::vector<std::uint8_t>& word, int alphabet);

// The representative point of a cylinder: its word, tails by `rule`.
BasePoint cylinder_point(long idx, int alphabet, int depth,
                         TailRule rule = TailRule::ZeroFill);

// Central sub-word index: from a depth `from_depth` word index, the index of
// the depth `to_depth` word centered at position `shift` (shift = 1 reads
// the central word of the shifted point). Requires |shift| + to_depth <=
// from_depth.
long central_subindex(long idx, int alphabet, int from_depth, int to_depth,
                      int shift = 0);

}  // namespace horo::base
