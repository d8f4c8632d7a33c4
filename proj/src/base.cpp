#include "horo/base.hpp"

#include <algorithm>
#include <string>

namespace horo::base {

namespace {

long mod_floor(long a, long n) {
  long r = a % n;
  return r < 0 ? r + n : r;
}

long checked_pow(int m, int e, long cap, const char* what) {
  long v = 1;
  for (int i = 0; i < e; ++i) {
    if (v > cap / m) throw ResourceError(std::string(what) + ": table size exceeds cap");
    v *= m;
  }
  return v;
}

}  // namespace

int enumeration_symbol(int alphabet, long j) {
  if (j < 0) return 0;
  const long m = alphabet;
  long start = 0;  // first position of the block of length-L words
  long count = m;  // number of words of length L
  for (long L = 1;; ++L) {
    const long block = L * count;
    if (j < start + block) {
      const long offset = j - start;
      const long word = offset / L;
      const long pos = offset % L;
      long div = 1;
      for (long t = 0; t < L - 1 - pos; ++t) div *= m;
      return static_cast<int>((word / div) % m);
    }
    start += block;
    if (count > (1L << 60) / m) throw ResourceError("enumeration_symbol: position out of range");
    count *= m;
  }
}

BasePoint::BasePoint(int alphabet, TailRule rule, std::vector<std::uint8_t> window,
                     long window_origin)
    : m_(alphabet), rule_(rule), win_(std::move(window)), lo_(window_origin) {
  if (m_ < 2) throw DomainError("BasePoint: alphabet size must be >= 2");
  if (rule_ == TailRule::PeriodicFill && win_.empty())
    throw DomainError("BasePoint: periodic fill needs a nonempty window");
  for (auto s : win_)
    if (s >= m_) throw DomainError("BasePoint: symbol outside alphabet");
}

BasePoint BasePoint::constant(int alphabet, std::uint8_t symbol) {
  return BasePoint(alphabet, TailRule::PeriodicFill, {symbol}, 0);
}

BasePoint BasePoint::from_central_word(int alphabet,
                                       const std::vector<std::uint8_t>& word,
                                       TailRule rule) {
  if (word.size() % 2 == 0) throw DomainError("from_central_word: length must be odd");
  const long lo = -static_cast<long>(word.size() / 2);
  return BasePoint(alphabet, rule, word, lo);
}

int BasePoint::raw(long j) const {
  const long n = static_cast<long>(win_.size());
  if (n > 0 && j >= lo_ && j < lo_ + n) return win_[static_cast<size_t>(j - lo_)];
  switch (rule_) {
    case TailRule::ZeroFill:
      return 0;
    case TailRule::PeriodicFill:
      return win_[static_cast<size_t>(mod_floor(j - lo_, n))];
    case TailRule::EnumerationFill:
      return enumeration_symbol(m_, j);
  }
  return 0;
}

int BasePoint::symbol(long i) const { return raw(org_ + i); }

BasePoint BasePoint::shifted(long n) const {
  BasePoint out = *this;
  out.org_ += n;
  return out;
}

std::vector<std::uint8_t> BasePoint::window(int depth) const {
  std::vector<std::uint8_t> w;
  w.reserve(2 * depth + 1);
  for (long i = -depth; i <= depth; ++i) w.push_back(static_cast<std::uint8_t>(symbol(i)));
  return w;
}

bool equal_points(const BasePoint& x, const BasePoint& y, int horizon) {
  if (x.alphabet() != y.alphabet()) return false;
  for (long k = 0; k < horizon; ++k)
    if (x.symbol(k) != y.symbol(k) || x.symbol(-k) != y.symbol(-k)) return false;
  return true;
}

double metric(const BasePoint& x, const BasePoint& y, int horizon) {
  if (x.alphabet() != y.alphabet()) throw DomainError("metric: alphabet mismatch");
  for (long k = 0; k < horizon; ++k)
    if (x.symbol(k) != y.symbol(k) || x.symbol(-k) != y.symbol(-k))
      return std::ldexp(1.0, static_cast<int>(-k));
  return 0.0;
}

BasePoint shift_step(const BasePoint& x) { return x.shifted(1); }

BasePoint PeriodicOrbit::point(int phase) const {
  BasePoint p(alphabet, TailRule::PeriodicFill, word, 0);
  return p.shifted(phase);
}

TransitivePoint transitive_point(int alphabet, int depth) {
  if (depth < 0) throw DomainError("transitive_point: negative depth");
  const int W = depth;
  const long L = 2L * depth + 1;
  std::vector<std::uint8_t> win;
  win.reserve(2 * W + 1);
  for (long j = -W; j <= W; ++j)
    win.push_back(static_cast<std::uint8_t>(enumeration_symbol(alphabet, j)));
  BasePoint pt(alphabet, TailRule::EnumerationFill, win, -W);

  // The block of length-L words ends at sum_{j<=L} j m^j - 1; the last such
  // word is centered in the window once the orbit time reaches its start + W.
  long horizon = W;
  long count = alphabet;
  long start = 0;
  for (long j = 1; j <= L; ++j) {
    start += j * count;
    if (count > (1L << 60) / alphabet) throw ResourceError("transitive_point: depth too large");
    count *= alphabet;
  }
  horizon = (start - L) + W;
  return TransitivePoint{pt, horizon};
}

std::vector<PeriodicOrbit> enumerate_periodic_orbits(int alphabet, int max_period,
                                                     long cap) {
  if (max_period < 1) throw DomainError("enumerate_periodic_orbits: period must be >= 1");
  checked_pow(alphabet, max_period, cap, "enumerate_periodic_orbits");

  std::vector<PeriodicOrbit> out;
  std::vector<std::uint8_t> w, rot;
  for (int n = 1; n <= max_period; ++n) {
    long total = 1;
    for (int i = 0; i < n; ++i) total *= alphabet;
    for (long idx = 0; idx < total; ++idx) {
      w.assign(n, 0);
      long v = idx;
      for (int i = n - 1; i >= 0; --i) {
        w[static_cast<size_t>(i)] = static_cast<std::uint8_t>(v % alphabet);
        v /= alphabet;
      }
      // keep w only if strictly smaller than all its nontrivial rotations:
      // this picks one representative per cyclic class and drops words whose
      // primitive period divides n.
      bool minimal = true;
      for (int r = 1; r < n && minimal; ++r) {
        rot.clear();
        rot.insert(rot.end(), w.begin() + r, w.end());
        rot.insert(rot.end(), w.begin(), w.begin() + r);
        if (!std::lexicographical_compare(w.begin(), w.end(), rot.begin(), rot.end()))
          minimal = false;
      }
      if (minimal) out.push_back(PeriodicOrbit{alphabet, n, w});
    }
  }
  return out;
}

PeriodicOrbit closing_point(const BasePoint& x, int k) {
  if (k < 1) throw DomainError("closing_point: period must be positive");
  const double gap = metric(x, x.shifted(k));
  if (!(gap < ClosingCertificate::full_shift().delta0))
    throw DomainError("closing_point: d(x, T^k x) is not below delta0");
  std::vector<std::uint8_t> w;
  w.reserve(k);
  for (long i = 0; i < k; ++i) w.push_back(static_cast<std::uint8_t>(x.symbol(i)));
  return PeriodicOrbit{x.alphabet(), k, w};
}

long cylinder_count(int alphabet, int depth, long cap) {
  return checked_pow(alphabet, 2 * depth + 1, cap, "cylinder_count");
}

long word_index(const BasePoint& x, int depth) {
  long idx = 0;
  for (long i = -depth; i <= depth; ++i) idx = idx * x.alphabet() + x.symbol(i);
  return idx;
}

std::vector<std::uint8_t> index_to_word(long idx, int alphabet, int depth) {
  const int len = 2 * depth + 1;
  std::vector<std::uint8_t> w(static_cast<size_t>(len), 0);
  for (int i = len - 1; i >= 0; --i) {
    w[static_cast<size_t>(i)] = static_cast<std::uint8_t>(idx % alphabet);
    idx /= alphabet;
  }
  return w;
}

long index_from_word(const std::vector<std::uint8_t>& word, int alphabet) {
  long idx = 0;
  for (auto s : word) idx = idx * alphabet + s;
  return idx;
}

BasePoint cylinder_point(long idx, int alphabet, int depth, TailRule rule) {
  return BasePoint::from_central_word(alphabet, index_to_word(idx, alphabet, depth), rule);
}

long central_subindex(long idx, int alphabet, int from_depth, int to_depth, int shift) {
  if (std::abs(shift) + to_depth > from_depth)
    throw DomainError("central_subindex: target window exceeds source word");
  const int len = 2 * from_depth + 1;
  std::vector<int> digits(static_cast<size_t>(len), 0);
  for (int i = len - 1; i >= 0; --i) {
    digits[static_cast<size_t>(i)] = static_cast<int>(idx % alphabet);
    idx /= alphabet;
  }
  long out = 0;
  const int first = from_depth + shift - to_depth;
  for (int t = 0; t < 2 * to_depth + 1; ++t)
    out = out * alphabet + digits[static_cast<size_t>(first + t)];
  return out;
}

}  // namespace horo::base
