#pragma once

// Eventually periodic subsets of Z: a finite block on [-N0, N0] and, beyond
// it, membership decided by residue mod p separately on each tail.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "deltaset/error.hpp"

namespace deltaset {

namespace ep_limits {
inline constexpr std::int64_t kMaxPeriod = std::int64_t{1} << 20;
inline constexpr std::int64_t kMaxCutoff = std::int64_t{1} << 22;
}  // namespace ep_limits

inline std::int64_t mod_floor(std::int64_t n, std::int64_t p) {
  std::int64_t r = n % p;
  return r < 0 ? r + p : r;
}

inline std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  std::int64_t l = std::lcm(a, b);
  if (l > ep_limits::kMaxPeriod)
    throw DomainError("period " + std::to_string(l) + " exceeds supported bound");
  return l;
}

class EPSet {
 public:
  using Pattern = std::vector<bool>;

  /// The empty set.
  EPSet() : p_(1), pos_(1, false), neg_(1, false), n0_(0) {}

  /// Raw constructor; the result is canonicalized. Block entries outside
  /// [-n0, n0] are rejected.
  EPSet(std::int64_t p, Pattern pos, Pattern neg, std::int64_t n0,
        std::vector<std::int64_t> block)
      : p_(p), pos_(std::move(pos)), neg_(std::move(neg)), n0_(n0),
        block_(std::move(block)) {
    if (p_ < 1 || p_ > ep_limits::kMaxPeriod)
      throw DomainError("period out of range");
    if (static_cast<std::int64_t>(pos_.size()) != p_ ||
        static_cast<std::int64_t>(neg_.size()) != p_)
      throw DomainError("pattern length must equal the period");
    if (n0_ < 0 || n0_ > ep_limits::kMaxCutoff)
      throw DomainError("cutoff out of range");
    std::sort(block_.begin(), block_.end());
    block_.erase(std::unique(block_.begin(), block_.end()), block_.end());
    for (std::int64_t b : block_)
      if (b < -n0_ || b > n0_) throw DomainError("block element outside cutoff");
    canonicalize();
  }

  static EPSet empty() { return EPSet(); }
  static EPSet integers() { return EPSet(1, {true}, {true}, 0, {0}); }

  /// {a + d*k : k in Z}
  static EPSet ap(std::int64_t a, std::int64_t d) {
    if (d < 1) throw DomainError("ap: modulus must be positive");
    Pattern pat(d, false);
    pat[mod_floor(a, d)] = true;
    return EPSet(d, pat, pat, 0, mod_floor(a, d) == 0 ? std::vector<std::int64_t>{0}
                                                     : std::vector<std::int64_t>{});
  }

  /// {a + d*k : k >= 0} (up) or {a - d*k : k >= 0} (down).
  static EPSet ray(std::int64_t a, std::int64_t d, bool up) {
    if (d < 1) throw DomainError("ray: step must be positive");
    std::int64_t n0 = std::abs(a);
    if (n0 > ep_limits::kMaxCutoff) throw DomainError("ray: start out of range");
    Pattern pat(d, false), none(d, false);
    pat[mod_floor(a, d)] = true;
    std::vector<std::int64_t> block;
    for (std::int64_t x = -n0; x <= n0; ++x)
      if (mod_floor(x - a, d) == 0 && (up ? x >= a : x <= a)) block.push_back(x);
    return up ? EPSet(d, pat, none, n0, block) : EPSet(d, none, pat, n0, block);
  }

  static EPSet finite(std::vector<std::int64_t> xs) {
    std::int64_t n0 = 0;
    for (std::int64_t x : xs) {
      if (x > ep_limits::kMaxCutoff || x < -ep_limits::kMaxCutoff)
        throw DomainError("finite element out of range for periodic algebra");
      n0 = std::max(n0, std::abs(x));
    }
    return EPSet(1, {false}, {false}, n0, std::move(xs));
  }

  std::int64_t period() const { return p_; }
  std::int64_t cutoff() const { return n0_; }
  const Pattern& pos_pattern() const { return pos_; }
  const Pattern& neg_pattern() const { return neg_; }
  const std::vector<std::int64_t>& block() const { return block_; }

  bool tail_member(std::int64_t n) const {
    std::int64_t r = mod_floor(n, p_);
    return n > 0 ? pos_[r] : (n < 0 ? neg_[r] : false);
  }

  bool contains(std::int64_t n) const {
    if (n > n0_ || n < -n0_) return tail_member(n);
    return std::binary_search(block_.begin(), block_.end(), n);
  }

  bool pos_empty() const { return std::none_of(pos_.begin(), pos_.end(), [](bool b) { return b; }); }
  bool neg_empty() const { return std::none_of(neg_.begin(), neg_.end(), [](bool b) { return b; }); }
  bool is_finite() const { return pos_empty() && neg_empty(); }
  bool is_empty() const { return is_finite() && block_.empty(); }
  bool is_integers() const { return p_ == 1 && pos_[0] && neg_[0] && n0_ == 0 && block_.size() == 1; }

  /// Elements in [-r, r], ascending.
  std::vector<std::int64_t> window(std::int64_t r) const {
    std::vector<std::int64_t> out;
    for (std::int64_t x = -r; x <= r; ++x)
      if (contains(x)) out.push_back(x);
    return out;
  }

  /// Pattern of this set expanded to a multiple L of the period.
  Pattern pos_at(std::int64_t L) const { return expand(pos_, L); }
  Pattern neg_at(std::int64_t L) const { return expand(neg_, L); }

  friend bool operator==(const EPSet& a, const EPSet& b) {
    return a.p_ == b.p_ && a.n0_ == b.n0_ && a.pos_ == b.pos_ && a.neg_ == b.neg_ &&
           a.block_ == b.block_;
  }

  bool subset_of(const EPSet& other) const;

 private:
  Pattern expand(const Pattern& pat, std::int64_t L) const {
    Pattern out(L);
    for (std::int64_t r = 0; r < L; ++r) out[r] = pat[r % p_];
    return out;
  }

  void canonicalize() {
    for (std::int64_t d = 1; d <= p_; ++d) {
      if (p_ % d != 0) continue;
      bool ok = true;
      for (std::int64_t r = d; r < p_ && ok; ++r)
        ok = pos_[r] == pos_[r % d] && neg_[r] == neg_[r % d];
      if (ok) {
        pos_.resize(d);
        neg_.resize(d);
        p_ = d;
        break;
      }
    }
    while (n0_ > 0) {
      bool hi = std::binary_search(block_.begin(), block_.end(), n0_);
      bool lo = std::binary_search(block_.begin(), block_.end(), -n0_);
      if (hi != pos_[mod_floor(n0_, p_)] || lo != neg_[mod_floor(-n0_, p_)]) break;
      if (hi) block_.pop_back();
      if (lo) block_.erase(block_.begin());
      --n0_;
    }
  }

  std::int64_t p_;
  Pattern pos_, neg_;
  std::int64_t n0_;
  std::vector<std::int64_t> block_;
};

/// Pointwise combination of two sets under a boolean operator.
template <typename Op>
EPSet ep_combine(const EPSet& a, const EPSet& b, Op op) {
  std::int64_t L = checked_lcm(a.period(), b.period());
  std::int64_t N = std::max(a.cutoff(), b.cutoff());
  EPSet::Pattern pos(L), neg(L);
  for (std::int64_t r = 0; r < L; ++r) {
    pos[r] = op(a.pos_pattern()[r % a.period()], b.pos_pattern()[r % b.period()]);
    neg[r] = op(a.neg_pattern()[r % a.period()], b.neg_pattern()[r % b.period()]);
  }
  std::vector<std::int64_t> block;
  for (std::int64_t x = -N; x <= N; ++x)
    if (op(a.contains(x), b.contains(x))) block.push_back(x);
  return EPSet(L, std::move(pos), std::move(neg), N, std::move(block));
}

inline EPSet ep_union(const EPSet& a, const EPSet& b) {
  return ep_combine(a, b, [](bool x, bool y) { return x || y; });
}
inline EPSet ep_intersect(const EPSet& a, const EPSet& b) {
  return ep_combine(a, b, [](bool x, bool y) { return x && y; });
}
inline EPSet ep_minus(const EPSet& a, const EPSet& b) {
  return ep_combine(a, b, [](bool x, bool y) { return x && !y; });
}

inline bool EPSet::subset_of(const EPSet& other) const {
  return ep_minus(*this, other).is_empty();
}

inline EPSet ep_complement(const EPSet& a) {
  EPSet::Pattern pos = a.pos_pattern(), neg = a.neg_pattern();
  pos.flip();
  neg.flip();
  std::vector<std::int64_t> block;
  for (std::int64_t x = -a.cutoff(); x <= a.cutoff(); ++x)
    if (!a.contains(x)) block.push_back(x);
  return EPSet(a.period(), std::move(pos), std::move(neg), a.cutoff(), std::move(block));
}

/// g + A
inline EPSet ep_translate(const EPSet& a, std::int64_t g) {
  if (g > ep_limits::kMaxCutoff || g < -ep_limits::kMaxCutoff)
    throw DomainError("translation amount out of range");
  std::int64_t p = a.period();
  std::int64_t N = a.cutoff() + std::abs(g);
  if (N > ep_limits::kMaxCutoff) throw DomainError("translated cutoff out of range");
  EPSet::Pattern pos(p), neg(p);
  for (std::int64_t r = 0; r < p; ++r) {
    pos[r] = a.pos_pattern()[mod_floor(r - g, p)];
    neg[r] = a.neg_pattern()[mod_floor(r - g, p)];
  }
  std::vector<std::int64_t> block;
  for (std::int64_t x = -N; x <= N; ++x)
    if (a.contains(x - g)) block.push_back(x);
  return EPSet(p, std::move(pos), std::move(neg), N, std::move(block));
}

/// -A
inline EPSet ep_invert(const EPSet& a) {
  std::int64_t p = a.period();
  EPSet::Pattern pos(p), neg(p);
  for (std::int64_t r = 0; r < p; ++r) {
    pos[r] = a.neg_pattern()[mod_floor(-r, p)];
    neg[r] = a.pos_pattern()[mod_floor(-r, p)];
  }
  std::vector<std::int64_t> block;
  for (std::int64_t b : a.block()) block.push_back(-b);
  return EPSet(p, std::move(pos), std::move(neg), a.cutoff(), std::move(block));
}

namespace detail {

// Bit array over an integer interval [lo, lo + size).
struct IntervalBits {
  std::int64_t lo = 0;
  std::vector<std::uint64_t> words;
  std::int64_t size = 0;

  IntervalBits(std::int64_t lo_, std::int64_t size_)
      : lo(lo_), words((size_ + 63) / 64, 0), size(size_) {}
  void set(std::int64_t x) {
    std::int64_t i = x - lo;
    words[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  bool test(std::int64_t x) const {
    std::int64_t i = x - lo;
    if (i < 0 || i >= size) return false;
    return (words[i >> 6] >> (i & 63)) & 1;
  }
  // this |= src shifted so that src position y lands on y + shift.
  void or_shifted(const IntervalBits& src, std::int64_t shift) {
    std::int64_t off = src.lo + shift - lo;  // bit index of src bit 0 in this
    for (std::size_t w = 0; w < src.words.size(); ++w) {
      std::uint64_t v = src.words[w];
      if (!v) continue;
      std::int64_t base = off + static_cast<std::int64_t>(w) * 64;
      std::int64_t dw = base >> 6;  // floor
      std::int64_t bit = base - dw * 64;
      auto put = [&](std::int64_t idx, std::uint64_t bits) {
        if (idx >= 0 && idx < static_cast<std::int64_t>(words.size())) words[idx] |= bits;
      };
      put(dw, v << bit);
      if (bit) put(dw + 1, v >> (64 - bit));
    }
    // Clear stray bits past the end.
    if (size % 64) words.back() &= (std::uint64_t{1} << (size % 64)) - 1;
  }
};

}  // namespace detail

/// Exact sumset A + B.
inline EPSet ep_sumset(const EPSet& a, const EPSet& b) {
  if (a.is_empty() || b.is_empty()) return EPSet::empty();
  const std::int64_t pA = a.period(), pB = b.period();
  const std::int64_t nA = a.cutoff(), nB = b.cutoff();
  const std::int64_t L = checked_lcm(pA, pB);
  const std::int64_t g = std::gcd(pA, pB);

  // Positive tail of one operand plus negative tail of the other fills
  // whole classes mod gcd(pA, pB).
  std::vector<bool> cross(g, false);
  for (std::int64_t s = 0; s < pA; ++s)
    for (std::int64_t t = 0; t < pB; ++t)
      if ((a.pos_pattern()[s] && b.neg_pattern()[t]) ||
          (a.neg_pattern()[s] && b.pos_pattern()[t]))
        cross[(s + t) % g] = true;

  // All remaining pair types are L-periodic beyond M on each side.
  const std::int64_t M = nA + nB + pA + pB + L;
  const std::int64_t W = M + L;
  if (W > ep_limits::kMaxCutoff) throw DomainError("sumset window out of range");
  const std::int64_t bR = 2 * W + nB;

  detail::IntervalBits bAll(-bR, 2 * bR + 1), bNoNeg(-bR, 2 * bR + 1),
      bNoPos(-bR, 2 * bR + 1);
  for (std::int64_t y = -bR; y <= bR; ++y) {
    if (!b.contains(y)) continue;
    bAll.set(y);
    if (y >= -nB) bNoNeg.set(y);
    if (y <= nB) bNoPos.set(y);
  }
  detail::IntervalBits sum(-W, 2 * W + 1);
  const std::int64_t aR = W + nB;
  for (std::int64_t x = -aR; x <= aR; ++x) {
    if (!a.contains(x)) continue;
    if (x > nA)
      sum.or_shifted(bNoNeg, x);
    else if (x < -nA)
      sum.or_shifted(bNoPos, x);
    else
      sum.or_shifted(bAll, x);
  }

  auto member = [&](std::int64_t x) { return sum.test(x) || cross[mod_floor(x, g)]; };
  EPSet::Pattern pos(L), neg(L);
  for (std::int64_t x = M + 1; x <= M + L; ++x) pos[mod_floor(x, L)] = member(x);
  for (std::int64_t x = -M - L; x <= -M - 1; ++x) neg[mod_floor(x, L)] = member(x);
  std::vector<std::int64_t> block;
  for (std::int64_t x = -M; x <= M; ++x)
    if (member(x)) block.push_back(x);
  return EPSet(L, std::move(pos), std::move(neg), M, std::move(block));
}

/// A - A
inline EPSet ep_diffset(const EPSet& a) { return ep_sumset(a, ep_invert(a)); }

}  // namespace deltaset
