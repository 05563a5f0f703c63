#pragma once

// Stage-certified constructions: a set X with prescribed Δ(X), the sparse and
// translate-meeting variants, witnesses inside FP-sets, and Δ-trajectories.
// Candidates are always taken in canonical order, so runs are deterministic.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "deltaset/symbolic_set.hpp"

namespace deltaset {

struct CertificateCheck {
  std::string name;
  bool ok = true;
};

struct StageRecord {
  std::size_t n = 0;
  std::vector<Element> targets;  // a_i served at this stage, in order
  std::vector<Element> chosen;   // x_{ni}
  std::vector<Element> planted;  // a_i * x_{ni}
  std::vector<std::pair<Element, Element>> met;  // (z, g*z) pairs planted to meet g
  std::vector<Element> added;    // elements new to the set at this stage, canonical order
  std::uint64_t forbidden_radius = 0;
  std::vector<CertificateCheck> certificates;

  bool passed() const {
    return std::all_of(certificates.begin(), certificates.end(),
                       [](const CertificateCheck& c) { return c.ok; });
  }
};

struct ConstructOptions {
  std::optional<SymbolicSet> source;  // draw every x_{ni} from this set
  bool sparse = false;
  bool meet_all_translates = false;
  std::uint64_t search_budget = 400'000'000;
  // Z only: among the first focus_candidates admissible x, prefer the one that
  // adds the most witness pairs inside ball(focus_window) for members of
  // ball(focus_ball) that still have fewer than focus_depth. 0 disables.
  std::size_t focus_candidates = 64;
  std::int64_t focus_ball = 64;
  std::int64_t focus_window = 4096;
  std::size_t focus_depth = 3;
};

struct ConstructionLog {
  std::string kind;
  GroupId group = GroupId::IntegersZ;
  std::optional<SymbolicSet> target;
  ConstructOptions options;
  std::vector<StageRecord> stages;

  std::vector<Element> elements() const {
    std::vector<Element> out;
    for (const StageRecord& s : stages) out.insert(out.end(), s.added.begin(), s.added.end());
    sort_canonical(out);
    return out;
  }
};

struct Construction {
  StreamSet set;
  ConstructionLog log;
};

/// Forbidden radius r_n of stage n for the inverse construction.
inline std::uint64_t stage_radius(GroupId g, std::size_t n) {
  if (g == GroupId::FreeF2) return 2 + (n + 3) / 4;
  return std::uint64_t{64} << std::min<std::size_t>(n / 32, 14);
}

/// Radius of F_s in the trajectory schemes; F_0 = {e}.
inline std::uint64_t trajectory_radius(GroupId g, std::size_t s) {
  if (s == 0) return 0;
  if (g == GroupId::FreeF2) return std::min<std::size_t>(s, 12);
  return std::uint64_t{1} << std::min<std::size_t>((s + 3) / 4 + 4, 20);
}

/// Number of canonical group elements stage n must meet in the
/// translate-meeting variant.
inline std::size_t meet_count(std::size_t n) { return 64 * (n + 1) + 1; }

class SearchBudget {
 public:
  explicit SearchBudget(std::uint64_t limit) : left_(limit) {}
  void spend() {
    if (left_ == 0) throw SearchBudgetExceeded("construction search budget exhausted");
    --left_;
  }

 private:
  std::uint64_t left_;
};

namespace construct_detail {

struct Mode {
  bool sparse = false;       // nothing of the set may sit within the radius
  bool reuse = false;        // elements already present may serve as x or a*x
  bool cross_block = false;  // elements of other chains block their whole ball
};

inline std::int64_t iabs(std::int64_t v) { return v < 0 ? -v : v; }

/// Bookkeeping for one growing subset of Z. A point u is blocked when some
/// member w has u - w in the current forbidden difference set. A dense grid
/// with skip pointers over dead points makes canonical scans cheap; points
/// outside the grid fall back to ordered range queries.
class ZSpace {
 public:
  using Value = std::int64_t;

  static Value mul(Value a, Value b) { return a + b; }
  static Value inv(Value a) { return -a; }
  static bool is_e(Value a) { return a == 0; }
  static Value identity() { return 0; }
  static Element to_element(Value a) { return Element::integer(a); }
  static Value from_element(const Element& g) {
    Value v = g.to_i64();
    if (iabs(v) > (Value{1} << 60)) throw DomainError("construction element exceeds 2^60");
    return v;
  }

  void configure(std::uint64_t r, const std::function<bool(Value)>& allowed, Mode mode) {
    r_ = static_cast<std::int64_t>(r);
    mode_ = mode;
    allowed_.assign(static_cast<std::size_t>(2 * r_ + 1), 0);
    bad_.clear();
    for (Value d = -r_; d <= r_; ++d) {
      bool ok = d == 0 || allowed(d);
      allowed_[static_cast<std::size_t>(d + r_)] = ok;
      if (d != 0 && (mode.sparse || !ok)) bad_.push_back(d);
    }
    G_ = 0;
  }

  std::int64_t radius() const { return r_; }
  /// d in ball(r) minus the allowed set.
  bool forbidden(Value d) const {
    if (d == 0 || iabs(d) > r_) return false;
    return !allowed_[static_cast<std::size_t>(d + r_)];
  }
  /// A difference a new element may not have with a member.
  bool bad(Value d) const { return mode_.sparse ? (d != 0 && iabs(d) <= r_) : forbidden(d); }
  bool near(Value d) const { return iabs(d) <= r_; }
  bool own(Value u) const { return own_.count(u) > 0; }
  bool taken(Value u) const { return foreign_.count(u) > 0; }
  std::size_t size() const { return own_.size(); }

  bool blocked(Value u) const {
    if (G_ && iabs(u) <= G_) return (flags_[idx(u)] & kBlocked) != 0;
    for (auto it = sorted_.lower_bound(u - r_); it != sorted_.end() && *it <= u + r_; ++it)
      if (*it != u && bad(u - *it)) return true;
    if (mode_.cross_block)
      for (auto it = foreign_sorted_.lower_bound(u - r_);
           it != foreign_sorted_.end() && *it <= u + r_; ++it)
        if (*it != u) return true;
    return false;
  }
  bool fresh_ok(Value u) const { return !own(u) && !taken(u) && !blocked(u); }
  bool usable(Value u) const { return (mode_.reuse && own(u)) || fresh_ok(u); }

  /// Is g*w in the set for some member w?
  bool meets(Value g) const {
    for (Value w : own_)
      if (own_.count(w + g)) return true;
    return false;
  }

  void add_own(const std::vector<Value>& batch) {
    for (Value u : batch) {
      own_.insert(u);
      sorted_.insert(u);
      if (in_grid(u)) flags_[idx(u)] |= kOwn;
    }
    if (!G_) return;
    for (Value u : batch) {
      refresh(u);
      for (Value d : bad_) mark(u + d);
    }
  }

  void add_foreign(const std::vector<Value>& batch) {
    for (Value u : batch) {
      if (u == 0) continue;
      foreign_.insert(u);
      foreign_sorted_.insert(u);
      if (!in_grid(u)) continue;
      flags_[idx(u)] |= kTaken;
      refresh(u);
    }
    if (!G_ || !mode_.cross_block) return;
    for (Value u : batch) {
      if (u == 0) continue;
      for (Value d = -r_; d <= r_; ++d)
        if (d) mark(u + d);
    }
  }

  /// Canonically least usable x accepted by `accept`.
  template <class F>
  Value scan(F&& accept, SearchBudget& budget) {
    for (;;) {
      ensure_grid();
      std::int64_t p = find(pos_, 0), q = find(neg_, 1);
      bool regrow = false;
      for (;;) {
        bool positive = p <= q;
        std::int64_t mag = positive ? p : q;
        if (mag > G_) {
          regrow = true;
          break;
        }
        Value x = positive ? p : -q;
        budget.spend();
        if (accept(x)) return x;
        if (positive)
          p = find(pos_, p + 1);
        else
          q = find(neg_, q + 1);
      }
      if (regrow) build(G_ * 2);
    }
  }

  /// Members of the ordered set within [lo, hi].
  template <class F>
  void for_range(Value lo, Value hi, F&& f) const {
    for (auto it = sorted_.lower_bound(lo); it != sorted_.end() && *it <= hi; ++it) f(*it);
  }

 private:
  static constexpr std::uint8_t kOwn = 1, kTaken = 2, kBlocked = 4;
  static constexpr std::int64_t kMaxGrid = std::int64_t{1} << 25;

  bool in_grid(Value u) const { return G_ && iabs(u) <= G_; }
  std::size_t idx(Value u) const { return static_cast<std::size_t>(u + G_); }

  bool dead_flags(std::uint8_t f) const {
    if (mode_.reuse && (f & kOwn)) return false;
    return f != 0;
  }

  void kill(Value u) {
    if (u >= 0) {
      auto i = static_cast<std::size_t>(u);
      if (pos_[i] == static_cast<std::int32_t>(u)) pos_[i] = static_cast<std::int32_t>(u + 1);
    } else {
      auto i = static_cast<std::size_t>(-u);
      if (neg_[i] == static_cast<std::int32_t>(-u)) neg_[i] = static_cast<std::int32_t>(-u + 1);
    }
  }
  void refresh(Value u) {
    if (in_grid(u) && dead_flags(flags_[idx(u)])) kill(u);
  }
  void mark(Value p) {
    if (!in_grid(p)) return;
    std::uint8_t& f = flags_[idx(p)];
    if (f & kBlocked) return;
    f |= kBlocked;
    if (dead_flags(f)) kill(p);
  }

  static std::int64_t find(std::vector<std::int32_t>& par, std::int64_t i) {
    auto k = static_cast<std::size_t>(i);
    while (par[k] != static_cast<std::int32_t>(k)) {
      par[k] = par[static_cast<std::size_t>(par[k])];
      k = static_cast<std::size_t>(par[k]);
    }
    return static_cast<std::int64_t>(k);
  }

  void ensure_grid() {
    if (G_) return;
    std::int64_t span = 0;
    if (!sorted_.empty()) span = std::max(iabs(*sorted_.begin()), iabs(*sorted_.rbegin()));
    build(std::max<std::int64_t>(std::int64_t{1} << 12, 4 * (span + r_)));
  }

  void build(std::int64_t G) {
    if (G > kMaxGrid) throw SearchBudgetExceeded("construction grid exceeds its size bound");
    G_ = G;
    flags_.assign(static_cast<std::size_t>(2 * G_ + 1), 0);
    for (Value u : own_)
      if (in_grid(u)) flags_[idx(u)] |= kOwn;
    for (Value u : foreign_)
      if (in_grid(u)) flags_[idx(u)] |= kTaken;
    auto block = [&](Value p) {
      if (in_grid(p)) flags_[idx(p)] |= kBlocked;
    };
    for (Value u : own_) {
      if (iabs(u) > G_ + r_) continue;
      for (Value d : bad_) block(u + d);
    }
    if (mode_.cross_block)
      for (Value u : foreign_) {
        if (iabs(u) > G_ + r_) continue;
        for (Value d = -r_; d <= r_; ++d)
          if (d) block(u + d);
      }
    auto n = static_cast<std::size_t>(G_ + 2);
    pos_.assign(n, 0);
    neg_.assign(n, 0);
    for (std::int64_t i = 0; i <= G_ + 1; ++i) {
      bool dpos = i <= G_ && dead_flags(flags_[idx(i)]);
      bool dneg = i == 0 || (i <= G_ && dead_flags(flags_[idx(-i)]));
      pos_[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(dpos ? i + 1 : i);
      neg_[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(dneg ? i + 1 : i);
    }
  }

  std::int64_t r_ = 0;
  Mode mode_;
  std::vector<char> allowed_;
  std::vector<Value> bad_;
  std::unordered_set<Value> own_, foreign_;
  std::set<Value> sorted_, foreign_sorted_;
  std::int64_t G_ = 0;
  std::vector<std::uint8_t> flags_;
  std::vector<std::int32_t> pos_, neg_;
};

/// The same bookkeeping for F2 by direct products; sets stay small there.
class F2Space {
 public:
  using Value = Element;

  static Value mul(const Value& a, const Value& b) { return deltaset::mul(a, b); }
  static Value inv(const Value& a) { return deltaset::inv(a); }
  static bool is_e(const Value& a) { return a.is_identity(); }
  static Value identity() { return Element::identity(GroupId::FreeF2); }
  static Element to_element(const Value& a) { return a; }
  static Value from_element(const Element& g) { return g; }

  void configure(std::uint64_t r, const std::function<bool(const Value&)>& allowed, Mode mode) {
    r_ = r;
    allowed_ = allowed;
    mode_ = mode;
  }

  std::uint64_t radius() const { return r_; }
  bool forbidden(const Value& d) const {
    return !d.is_identity() && d.norm_le(r_) && !allowed_(d);
  }
  bool bad(const Value& d) const {
    if (d.is_identity() || !d.norm_le(r_)) return false;
    return mode_.sparse || !allowed_(d);
  }
  bool near(const Value& d) const { return d.norm_le(r_); }

  /// Every member, for callers that want to filter themselves.
  template <class F>
  void for_all(F&& f) const {
    for (const Value& w : list_) f(w);
  }
  bool own(const Value& u) const { return own_.count(u) > 0; }
  bool taken(const Value& u) const { return foreign_.count(u) > 0; }
  std::size_t size() const { return own_.size(); }

  bool blocked(const Value& u) const {
    std::size_t lu = u.letters().size();
    auto far = [&](const Value& w) {
      std::size_t lw = w.letters().size();
      return (lu > lw ? lu - lw : lw - lu) > r_;
    };
    for (const Value& w : list_)
      if (!far(w) && w != u && bad(mul(u, inv(w)))) return true;
    if (mode_.cross_block)
      for (const Value& w : foreign_list_)
        if (!far(w) && w != u && mul(u, inv(w)).norm_le(r_)) return true;
    return false;
  }
  bool fresh_ok(const Value& u) const { return !own(u) && !taken(u) && !blocked(u); }
  bool usable(const Value& u) const { return (mode_.reuse && own(u)) || fresh_ok(u); }

  bool meets(const Value& g) const {
    for (const Value& w : list_)
      if (own_.count(mul(g, w))) return true;
    return false;
  }

  void add_own(const std::vector<Value>& batch) {
    for (const Value& u : batch)
      if (own_.insert(u).second) list_.push_back(u);
  }
  void add_foreign(const std::vector<Value>& batch) {
    for (const Value& u : batch)
      if (!u.is_identity() && foreign_.insert(u).second) foreign_list_.push_back(u);
  }

  template <class F>
  Value scan(F&& accept, SearchBudget& budget) {
    for (Value x = identity();; x = next_element(x)) {
      budget.spend();
      if (usable(x) && accept(x)) return x;
    }
  }

 private:
  std::uint64_t r_ = 0;
  std::function<bool(const Value&)> allowed_;
  Mode mode_;
  std::unordered_set<Value> own_, foreign_;
  std::vector<Value> list_, foreign_list_;
};

inline bool contains_value(const std::vector<Element>& sorted, const Element& g) {
  return std::binary_search(sorted.begin(), sorted.end(), g, CanonicalLess{});
}

}  // namespace construct_detail

/// Canonically least x != e whose sixteen products from {x^±1, (ax)^±1} all
/// avoid `forbidden`.
inline Element fresh_element(const Element& a, const FiniteSet& forbidden,
                             std::uint64_t budget = 10'000'000) {
  if (a.group() != forbidden.group()) throw DomainError("fresh_element: mixed groups");
  const Element e = Element::identity(a.group());
  for (const Element& g : {e, a, inv(a)})
    if (forbidden.contains(g)) throw DomainError("fresh_element: forbidden meets {e, a, a^-1}");
  SearchBudget b(budget);
  for (Element x = next_element(e);; x = next_element(x)) {
    b.spend();
    Element ax = mul(a, x);
    const Element four[4] = {x, inv(x), ax, inv(ax)};
    bool ok = true;
    for (const Element& u : four)
      for (const Element& v : four) ok = ok && !forbidden.contains(mul(u, v));
    if (ok) return x;
  }
}

namespace construct_detail {

/// Index-increasing products of a finite prefix, with the least possible
/// largest index used for each value. Only values in ball(r) are kept.
inline std::map<Element, std::size_t, CanonicalLess> fp_products(const std::vector<Element>& seq,
                                                                 std::uint64_t r) {
  if (seq.empty()) throw DomainError("fp_window: empty sequence");
  GroupId g = seq.front().group();
  {
    std::unordered_set<Element> seen;
    for (const Element& x : seq) {
      if (x.group() != g) throw DomainError("fp_window: mixed groups");
      if (!seen.insert(x).second) throw DomainError("fp_window: sequence is not injective");
    }
  }
  std::map<Element, std::size_t, CanonicalLess> out;
  auto keep = [&](const Element& v, std::size_t k) {
    if (!v.norm_le(r)) return;
    auto [it, fresh] = out.emplace(v, k);
    if (!fresh) it->second = std::min(it->second, k);
  };
  bool positive = g == GroupId::IntegersZ &&
                  std::all_of(seq.begin(), seq.end(), [](const Element& x) { return x.as_int() > 0; });
  if (positive) {
    // Partial sums only grow, so prune past r.
    Integer bound(r);
    std::function<void(std::size_t, const Integer&)> dfs = [&](std::size_t from, const Integer& s) {
      for (std::size_t k = from; k < seq.size(); ++k) {
        Integer t = s + seq[k].as_int();
        if (t > bound) continue;
        keep(Element(t), k);
        dfs(k + 1, t);
      }
    };
    dfs(0, Integer(0));
    return out;
  }
  if (seq.size() > 22) throw DomainError("fp_window: prefix longer than 22 needs a positive integer sequence");
  std::function<void(std::size_t, const Element&)> dfs = [&](std::size_t from, const Element& p) {
    for (std::size_t k = from; k < seq.size(); ++k) {
      Element q = mul(p, seq[k]);
      keep(q, k);
      dfs(k + 1, q);
    }
  };
  dfs(0, Element::identity(g));
  return out;
}

}  // namespace construct_detail

/// All products g_{i1}...g_{ik} (i1 < ... < ik, k >= 1) of the prefix that lie
/// in ball(r).
inline FiniteSet fp_window(const std::vector<Element>& seq, std::uint64_t r) {
  std::vector<Element> xs;
  for (const auto& [v, k] : construct_detail::fp_products(seq, r)) xs.push_back(v);
  return FiniteSet(seq.front().group(), std::move(xs));
}

namespace construct_detail {

/// Where candidates x come from: the canonical scan, or a fixed list with a
/// per-target starting index.
template <class S>
struct SourcePlan {
  std::vector<typename S::Value> list;
  std::function<std::size_t(std::size_t)> first_index;
  std::function<bool(typename S::Value)> rule;  // scan G filtered by this instead of the list
};

template <class S>
std::function<bool(typename S::Value)> membership_rule(const SymbolicSet& target) {
  if constexpr (std::is_same_v<S, ZSpace>) {
    return [target](std::int64_t d) { return member(target, Element::integer(d)); };
  } else {
    return [target](const Element& d) { return member(target, d); };
  }
}

/// The builder behind inverse_construct and its variants.
template <class S>
class InverseBuilder {
 public:
  using Value = typename S::Value;

  InverseBuilder(GroupId g, std::vector<Value> targets, std::function<bool(Value)> allowed,
                 ConstructOptions opts, std::optional<SourcePlan<S>> source, bool reuse)
      : reuse_(reuse && !opts.sparse), group_(g), a_(std::move(targets)), allowed_(std::move(allowed)), opts_(std::move(opts)),
        source_(std::move(source)), budget_(opts_.search_budget) {
    used_.resize(a_.size());
  }

  ConstructionLog run(std::size_t stages, std::string kind) {
    ConstructionLog log;
    log.kind = std::move(kind);
    log.group = group_;
    log.options = opts_;
    std::uint64_t r = 0;
    for (std::size_t n = 0; n < stages; ++n) {
      std::uint64_t rn = stage_radius(group_, n);
      if (rn != r) {
        r = rn;
        Mode m;
        m.sparse = opts_.sparse;
        m.reuse = reuse_;
        space_.configure(r, allowed_, m);
      }
      log.stages.push_back(stage(n, r));
      if (!log.stages.back().passed())
        throw CertificateFailure("stage " + std::to_string(n) + " failed a certificate");
    }
    return log;
  }

  std::vector<Value> members() const { return order_; }

 private:
  bool pair_ok(std::size_t i, const Value& x) {
    const Value& a = a_[i];
    if (S::is_e(a)) return space_.usable(x);
    if (used_[i].count(x)) return false;
    Value ax = S::mul(a, x);
    return space_.usable(x) && space_.usable(ax);
  }

  bool focusing() const {
    if constexpr (std::is_same_v<S, ZSpace>)
      return !source_ && !opts_.sparse && opts_.focus_candidates > 0 && opts_.focus_ball > 0;
    else
      return false;
  }

  bool in_focus(const Value& u) const {
    if constexpr (std::is_same_v<S, ZSpace>)
      return iabs(u) <= opts_.focus_window;
    else
      return false;
  }

  struct FocusScore {
    std::size_t gain = 0;     // deficient members of the focus ball newly witnessed
    std::size_t penalty = 0;  // non-members pushed up to focus_depth in the window
  };

  // Effect of adding the pair {x, a*x} on the window witness counts.
  FocusScore focus_score(const Value& x, const Value& ax) {
    FocusScore sc;
    if constexpr (std::is_same_v<S, ZSpace>) {
      const std::int64_t W = opts_.focus_window;
      touched_.clear();
      auto bump = [&](std::int64_t d) {
        d = iabs(d);
        if (d == 0 || d > W) return;
        if (inc_[static_cast<std::size_t>(d)]++ == 0) touched_.push_back(d);
      };
      auto against_all = [&](const Value& u) {
        if (!in_focus(u)) return;
        for (const Value& v : focus_list_) bump(v - u);
      };
      against_all(x);
      if (ax != x) {
        against_all(ax);
        if (in_focus(x) && in_focus(ax)) bump(ax - x);
      }
      for (std::int64_t d : touched_) {
        auto k = static_cast<std::size_t>(d);
        std::size_t have = cover_[k], now = have + inc_[k];
        inc_[k] = 0;
        if (have >= opts_.focus_depth) continue;
        if (is_member_[k]) {
          if (d <= opts_.focus_ball) ++sc.gain;
        } else if (now >= opts_.focus_depth) {
          ++sc.penalty;
        }
      }
    }
    return sc;
  }

  void focus_init() {
    auto W = static_cast<std::size_t>(opts_.focus_window);
    cover_.assign(W + 1, 0);
    inc_.assign(W + 1, 0);
    is_member_.assign(W + 1, 0);
    for (std::size_t d = 0; d <= W; ++d) is_member_[d] = allowed_(static_cast<Value>(d));
  }

  void note_focus(const Value& u) {
    if constexpr (std::is_same_v<S, ZSpace>) {
      if (!focusing() || !in_focus(u)) return;
      if (cover_.empty()) focus_init();
      for (const Value& v : focus_list_) {
        std::int64_t d = iabs(v - u);
        if (d <= opts_.focus_window) ++cover_[static_cast<std::size_t>(d)];
      }
      focus_list_.push_back(u);
    }
  }

  Value pick(std::size_t i) {
    if (!source_ && focusing()) {
      std::vector<Value> cands;
      space_.scan(
          [&](const Value& x) {
            if (!pair_ok(i, x)) return false;
            cands.push_back(x);
            return cands.size() >= opts_.focus_candidates || !in_focus(x);
          },
          budget_);
      if (cover_.empty()) focus_init();
      Value best = cands.front();
      FocusScore top = focus_score(best, S::mul(a_[i], best));
      for (const Value& x : cands) {
        FocusScore sc = focus_score(x, S::mul(a_[i], x));
        if (sc.gain > top.gain || (sc.gain == top.gain && sc.penalty < top.penalty)) {
          best = x;
          top = sc;
        }
      }
      return best;
    }
    if (!source_) return space_.scan([&](const Value& x) { return pair_ok(i, x); }, budget_);
    if (source_->rule)
      return space_.scan([&](const Value& x) { return source_->rule(x) && pair_ok(i, x); }, budget_);
    const auto& list = source_->list;
    for (std::size_t k = source_->first_index(i); k < list.size(); ++k) {
      budget_.spend();
      if (pair_ok(i, list[k])) return list[k];
    }
    throw SearchBudgetExceeded("source prefix exhausted before an admissible element was found");
  }

  void add(std::vector<Value> batch, StageRecord& rec) {
    std::vector<Value> fresh;
    for (const Value& u : batch)
      if (!space_.own(u) && std::find(fresh.begin(), fresh.end(), u) == fresh.end())
        fresh.push_back(u);
    space_.add_own(fresh);
    for (const Value& u : fresh) {
      note_focus(u);
      order_.push_back(u);
      stage_new_.push_back(u);
      rec.added.push_back(S::to_element(u));
    }
  }

  StageRecord stage(std::size_t n, std::uint64_t r) {
    StageRecord rec;
    rec.n = n;
    rec.forbidden_radius = r;
    stage_new_.clear();
    meet_pairs_.clear();
    // Newest targets go first so their witnesses sit nearest e. All slots
    // with a_i = e share one fresh element per stage.
    std::optional<Value> e_pick;
    for (std::size_t j = 0; j <= n; ++j) {
      std::size_t i = n - j;
      const Value& a = i < a_.size() ? a_[i] : a_.back();
      std::size_t slot = std::min(i, a_.size() - 1);
      bool is_e = S::is_e(a);
      Value x = is_e && e_pick ? *e_pick : pick(slot);
      if (is_e) e_pick = x;
      Value ax = S::mul(a, x);
      used_[slot].insert(x);
      add({x, ax}, rec);
      rec.targets.push_back(S::to_element(a));
      rec.chosen.push_back(S::to_element(x));
      rec.planted.push_back(S::to_element(ax));
    }
    std::reverse(rec.targets.begin(), rec.targets.end());
    std::reverse(rec.chosen.begin(), rec.chosen.end());
    std::reverse(rec.planted.begin(), rec.planted.end());
    if (opts_.meet_all_translates) meet(n, rec);
    certify(n, rec);
    sort_canonical(rec.added);
    return rec;
  }

  void meet(std::size_t n, StageRecord& rec) {
    Element g = Element::identity(group_);
    for (std::size_t k = 0; k < meet_count(n); ++k, g = next_element(g)) {
      Value gv = S::from_element(g);
      if (S::is_e(gv) || space_.meets(gv)) continue;
      Value z = space_.scan(
          [&](const Value& z) {
            Value gz = S::mul(gv, z);
            return space_.fresh_ok(z) && space_.fresh_ok(gz);
          },
          budget_);
      Value gz = S::mul(gv, z);
      add({z, gz}, rec);
      meet_pairs_.push_back({z, gz});
      rec.met.emplace_back(S::to_element(z), S::to_element(gz));
    }
  }

  bool declared_meet(const Value& u, const Value& w) const {
    for (const auto& [z, gz] : meet_pairs_)
      if ((z == u && gz == w) || (z == w && gz == u)) return true;
    return false;
  }

  template <class F>
  void for_close(const Value& u, F&& f) const {
    if constexpr (std::is_same_v<S, ZSpace>)
      space_.for_range(u - space_.radius(), u + space_.radius(), f);
    else
      space_.for_all(f);
  }

  // Builder-side checks over the elements new at this stage.
  void certify(std::size_t n, StageRecord& rec) {
    bool avoid = true, alone = true;
    for (const Value& u : stage_new_)
      for_close(u, [&](const Value& w) {
        if (u == w) return;
        Value d = S::mul(u, S::inv(w));
        if (space_.forbidden(d) && !declared_meet(u, w)) avoid = false;
        if (opts_.sparse && space_.near(d) && !partners(u, w)) alone = false;
      });
    rec.certificates.push_back({"products_avoid_forbidden", avoid});
    bool planted = true;
    for (std::size_t i = 0; i < rec.chosen.size(); ++i)
      planted = planted && space_.own(S::from_element(rec.chosen[i])) &&
                space_.own(S::from_element(rec.planted[i]));
    rec.certificates.push_back({"witness_pairs_present", planted});
    if (opts_.sparse) rec.certificates.push_back({"no_new_triples", alone});
    if (opts_.meet_all_translates) {
      bool all = true;
      Element g = Element::identity(group_);
      for (std::size_t k = 0; k < meet_count(n); ++k, g = next_element(g))
        all = all && (g.is_identity() || space_.meets(S::from_element(g)));
      rec.certificates.push_back({"translates_met", all});
    }
  }

  // In the sparse variant the only close pairs are planted pairs.
  bool partners(const Value& u, const Value& w) const { return used_pair(u, w) || declared_meet(u, w); }
  bool used_pair(const Value& u, const Value& w) const {
    for (std::size_t i = 0; i < a_.size(); ++i)
      if ((used_[i].count(u) && S::mul(a_[i], u) == w) || (used_[i].count(w) && S::mul(a_[i], w) == u))
        return true;
    return false;
  }

  bool reuse_;
  GroupId group_;
  std::vector<Value> a_;
  std::function<bool(Value)> allowed_;
  ConstructOptions opts_;
  std::optional<SourcePlan<S>> source_;
  SearchBudget budget_;
  S space_;
  std::vector<std::unordered_set<Value>> used_;
  std::vector<Value> order_, stage_new_;
  std::vector<std::pair<Value, Value>> meet_pairs_;
  std::vector<Value> focus_list_;
  std::vector<std::uint32_t> cover_, inc_;
  std::vector<std::uint8_t> is_member_;
  std::vector<std::int64_t> touched_;
};

/// a_0, a_1, ... : the target in canonical order up to inversion, padded with e.
inline std::vector<Element> target_enumeration(const SymbolicSet& target, std::size_t count) {
  GroupId g = target.group();
  std::uint64_t cap = g == GroupId::IntegersZ ? (std::uint64_t{1} << 20) : 12;
  std::uint64_t R = g == GroupId::IntegersZ ? 64 : 2;
  std::vector<Element> w;
  for (;; R = g == GroupId::IntegersZ ? R * 2 : R + 1) {
    w = window(target, R);
    bool finite_done = target.is_exact() && is_finite(target).finite;
    if (w.size() >= count || finite_done || R >= cap) break;
  }
  // g and g^-1 share their witness pairs, so one of them is enough.
  std::vector<Element> halved;
  std::unordered_set<Element> seen;
  for (const Element& x : w)
    if (!seen.count(inv(x))) {
      seen.insert(x);
      halved.push_back(x);
    }
  w = std::move(halved);
  if (w.size() > count) w.resize(count);
  while (w.size() < count) w.push_back(Element::identity(g));
  return w;
}

inline void require_symmetric_with_e(const SymbolicSet& target) {
  if (!member(target, Element::identity(target.group())))
    throw DomainError("inverse construction: target must contain e");
  if (target.is_exact()) {
    if (!exact_equal(invert(target), target))
      throw DomainError("inverse construction: target must be symmetric");
    return;
  }
  std::uint64_t r = default_probe_radius(target.group());
  for (const Element& x : window(target, r))
    if (!member(target, inv(x))) throw DomainError("inverse construction: target must be symmetric");
}

template <class S>
Construction run_inverse(const SymbolicSet& target, std::size_t stages, const ConstructOptions& opts,
                         std::vector<Element> targets, std::optional<SourcePlan<S>> source,
                         std::function<bool(typename S::Value)> allowed, std::string kind,
                         bool reuse = false) {
  std::vector<typename S::Value> a;
  for (const Element& t : targets) a.push_back(S::from_element(t));
  InverseBuilder<S> b(target.group(), std::move(a), std::move(allowed), opts, std::move(source), reuse);
  ConstructionLog log = b.run(stages, kind);
  log.target = target;
  std::vector<Element> xs = log.elements();
  StreamSet s = list_stream(target.group(), kind, xs);
  return {s, std::move(log)};
}

template <class S>
std::optional<SourcePlan<S>> source_plan(const std::optional<SymbolicSet>& source, std::size_t stages) {
  if (!source) return std::nullopt;
  if (source->is_ep()) {
    SourcePlan<S> plan;
    plan.rule = membership_rule<S>(*source);
    return plan;
  }
  GroupId g = source->group();
  std::size_t need = stages * (stages + 1) + 16;
  std::uint64_t R = g == GroupId::IntegersZ ? 64 : 2;
  std::uint64_t cap = g == GroupId::IntegersZ ? (std::uint64_t{1} << 40) : 10;
  std::vector<Element> w;
  for (;; R = g == GroupId::IntegersZ ? R * 4 : R + 1) {
    w = window(*source, R);
    if (w.size() >= need || R >= cap) break;
  }
  SourcePlan<S> plan;
  for (const Element& x : w) plan.list.push_back(S::from_element(x));
  plan.first_index = [](std::size_t) { return std::size_t{0}; };
  return plan;
}

}  // namespace construct_detail

/// X = X_0 ∪ X_1 ∪ ... with Δ(X) = target, one stage per step; stage n plants
/// witness pairs for a_0..a_n and keeps every new difference off
/// ball(r_n) minus the target.
inline Construction inverse_construct(const SymbolicSet& target, std::size_t stages,
                                      const ConstructOptions& opts = {}) {
  using namespace construct_detail;
  if (stages == 0) throw DomainError("inverse_construct: stages must be positive");
  require_symmetric_with_e(target);
  std::vector<Element> targets = target_enumeration(target, stages);
  std::string kind = opts.sparse ? "inverse_sparse" : "inverse";
  if (opts.source && opts.source->group() != target.group())
    throw DomainError("inverse_construct: source from another group");
  if (target.group() == GroupId::IntegersZ)
    return run_inverse<ZSpace>(target, stages, opts, targets, source_plan<ZSpace>(opts.source, stages),
                               membership_rule<ZSpace>(target), kind);
  return run_inverse<F2Space>(target, stages, opts, targets, source_plan<F2Space>(opts.source, stages),
                              membership_rule<F2Space>(target), kind);
}

inline Construction inverse_construct_sparse(const SymbolicSet& target, std::size_t stages,
                                             ConstructOptions opts = {}) {
  opts.sparse = true;
  return inverse_construct(target, stages, opts);
}

/// X inside FP(seq) with Δ(X) = {e} ∪ FP ∪ FP^-1, built from a finite prefix of
/// the sequence. Targets run over {e} ∪ FP; the inverses come from symmetry of Δ.
inline Construction fp_delta_witness(const std::vector<Element>& seq, std::size_t stages,
                                     std::uint64_t search_budget = 400'000'000) {
  using namespace construct_detail;
  if (stages == 0) throw DomainError("fp_delta_witness: stages must be positive");
  GroupId g = seq.empty() ? GroupId::IntegersZ : seq.front().group();
  std::uint64_t rmax = stage_radius(g, stages - 1);
  std::uint64_t enum_r = g == GroupId::IntegersZ ? std::max<std::uint64_t>(rmax, 4096) : rmax;
  auto prods = fp_products(seq, enum_r);
  // The targets: e then FP in canonical order, each with its least top index.
  std::vector<Element> targets{Element::identity(g)};
  std::vector<std::size_t> top{0};
  for (const auto& [v, k] : prods) {
    if (targets.size() >= stages) break;
    if (v.is_identity()) continue;
    targets.push_back(v);
    top.push_back(k + 1);
  }
  while (targets.size() < stages) {
    targets.push_back(Element::identity(g));
    top.push_back(0);
  }
  std::vector<Element> fpw;
  fpw.push_back(Element::identity(g));
  for (const auto& [v, k] : prods) {
    fpw.push_back(v);
    fpw.push_back(inv(v));
  }
  sort_canonical(fpw);
  SymbolicSet target(list_stream(g, "fp_target", fpw));
  ConstructOptions opts;
  opts.search_budget = search_budget;
  auto build = [&](auto tag) {
    using S = decltype(tag);
    SourcePlan<S> plan;
    for (const Element& x : seq) plan.list.push_back(S::from_element(x));
    plan.first_index = [top](std::size_t i) { return top[std::min(i, top.size() - 1)]; };
    std::function<bool(typename S::Value)> allowed;
    if constexpr (std::is_same_v<S, ZSpace>)
      allowed = [fpw](std::int64_t d) { return contains_value(fpw, Element::integer(d)); };
    else
      allowed = [fpw](const Element& d) { return contains_value(fpw, d); };
    Construction c = run_inverse<S>(target, stages, opts, targets, plan, allowed, "fp", true);
    // X stays inside FP: x = g_k, and a_i * g_k is a product with increasing
    // indices because every index used by a_i is below k.
    std::unordered_map<Element, std::size_t> index;
    for (std::size_t k = 0; k < seq.size(); ++k) index.emplace(seq[k], k);
    for (StageRecord& s : c.log.stages) {
      bool inside = true;
      for (std::size_t i = 0; i < s.chosen.size(); ++i) {
        auto it = index.find(s.chosen[i]);
        inside = inside && it != index.end() && it->second >= top[std::min(i, top.size() - 1)];
      }
      s.certificates.push_back({"inside_fp", inside});
      if (!inside) throw CertificateFailure("fp witness left the FP-set");
    }
    return c;
  };
  if (g == GroupId::IntegersZ) return build(ZSpace{});
  return build(F2Space{});
}

/// Post-hoc audit of an inverse-construction log. It re-derives every stage
/// set from the log alone and checks the product invariant, the witness
/// pairs and the localization of forbidden pairs.
struct VerificationReport {
  bool ok = true;
  std::vector<std::string> failures;

  void fail(std::string why) {
    ok = false;
    if (failures.size() < 20) failures.push_back(std::move(why));
  }
};

inline VerificationReport verify_construction(const ConstructionLog& log) {
  VerificationReport rep;
  if (!log.target) {
    rep.fail("log has no target");
    return rep;
  }
  const SymbolicSet& target = *log.target;
  std::unordered_map<Element, bool> in_target;
  auto member_cached = [&](const Element& g) {
    auto it = in_target.find(g);
    if (it != in_target.end()) return it->second;
    return in_target[g] = member(target, g);
  };
  std::vector<Element> all;  // stages 0..n, canonical
  std::unordered_map<Element, std::size_t> first_stage;
  std::vector<std::unordered_set<Element>> xs_for;
  for (const StageRecord& s : log.stages) {
    for (const Element& u : s.added) first_stage.emplace(u, s.n);
    std::vector<Element> merged(all);
    merged.insert(merged.end(), s.added.begin(), s.added.end());
    sort_canonical(merged);
    all = std::move(merged);
    std::unordered_set<Element> present(all.begin(), all.end());
    auto met_pair = [&](const Element& u, const Element& w) {
      for (const auto& [z, gz] : s.met)
        if ((z == u && gz == w) || (z == w && gz == u)) return true;
      return false;
    };
    std::uint64_t r = s.forbidden_radius;
    // X_m X_n^-1 for m <= n: pairs with at least one element first seen at n.
    for (const Element& v : s.added)
      for (const Element& u : all) {
        Element d = mul(u, inv(v));
        if (d.is_identity() || !d.norm_le(r)) continue;
        if (!member_cached(d) && !met_pair(u, v))
          rep.fail("stage " + std::to_string(s.n) + ": " + u.str() + " * " + v.str() +
                   "^-1 lies in B_n");
      }
    if (s.chosen.size() != s.n + 1 || s.planted.size() != s.n + 1 || s.targets.size() != s.n + 1)
      rep.fail("stage " + std::to_string(s.n) + ": wrong number of witness pairs");
    if (xs_for.size() < s.n + 1) xs_for.resize(s.n + 1);
    for (std::size_t i = 0; i < std::min(s.chosen.size(), s.planted.size()); ++i) {
      const Element& x = s.chosen[i];
      if (mul(s.targets[i], x) != s.planted[i])
        rep.fail("stage " + std::to_string(s.n) + ": planted element is not a_i x");
      if (!present.count(x) || !present.count(s.planted[i]))
        rep.fail("stage " + std::to_string(s.n) + ": witness pair not materialized");
      if (!s.targets[i].is_identity() && !xs_for[i].insert(x).second)
        rep.fail("stage " + std::to_string(s.n) + ": x repeated for a_" + std::to_string(i));
    }
  }
  return rep;
}

// Trajectories ----------------------------------------------------------------

enum class TrajectoryKind { Tr1, Tr2, Tr3, Tr4, Tr5, Tr6 };

inline const char* trajectory_name(TrajectoryKind k) {
  static const char* names[] = {"Tr1", "Tr2", "Tr3", "Tr4", "Tr5", "Tr6"};
  return names[static_cast<int>(k)];
}

inline TrajectoryKind parse_trajectory_kind(std::string_view s) {
  for (int i = 0; i < 6; ++i)
    if (s == trajectory_name(static_cast<TrajectoryKind>(i))) return static_cast<TrajectoryKind>(i);
  throw DomainError("unknown trajectory kind '" + std::string(s) + "'");
}

struct TrajectoryBundle {
  TrajectoryKind kind = TrajectoryKind::Tr6;
  GroupId group = GroupId::IntegersZ;
  std::vector<std::string> labels;
  std::vector<StreamSet> sets;
  std::vector<ConstructionLog> logs;
  /// sets[i] is built so that Δ(sets[i]) = sets[*delta_of[i]]; nullopt when
  /// the target is {e} or the set is given.
  std::vector<std::optional<std::size_t>> delta_of;
  /// Tr3: u, v in A with u*v outside A.
  std::optional<std::pair<Element, Element>> non_subgroup_witness;
  /// Tr4/Tr5: predicted trajectory steps and one element separating each
  /// consecutive pair.
  std::vector<StreamSet> steps;
  std::vector<Element> strict_witnesses;
  std::vector<CertificateCheck> certificates;

  bool passed() const {
    auto ok = [](const CertificateCheck& c) { return c.ok; };
    if (!std::all_of(certificates.begin(), certificates.end(), ok)) return false;
    for (const ConstructionLog& l : logs)
      for (const StageRecord& s : l.stages)
        if (!s.passed()) return false;
    return true;
  }
};

namespace construct_detail {

struct ChainSpec {
  std::optional<std::size_t> target;  // another chain
  std::optional<SymbolicSet> given;   // or a fixed set
};

/// Interleaved chains grown together. Stage t adds to chain j the elements
/// x(y)^±1 and (y x(y))^±1 for every y already in its target, with
/// x(y^-1) = y x(y), keeping chain products off F_t minus the target.
template <class S>
class ChainEngine {
 public:
  using Value = typename S::Value;

  ChainEngine(GroupId g, std::vector<ChainSpec> specs, bool union_mode, std::uint64_t budget)
      : group_(g), union_(union_mode), budget_(budget) {
    for (ChainSpec& sp : specs) {
      Chain c;
      c.spec = std::move(sp);
      c.stage_of.emplace(S::identity(), 0);
      c.members.push_back(S::identity());
      c.space.add_own({S::identity()});
      StageRecord r0;
      r0.n = 0;
      r0.added.push_back(Element::identity(g));
      c.log.push_back(r0);
      chains_.push_back(std::move(c));
    }
  }

  void reserve(std::size_t j, const Value& v) {
    reserved_.push_back({j, v});
    chains_[j].space.add_foreign({v});
  }

  /// Runs stage t; `after` may reserve elements.
  void stage(std::size_t t) {
    std::uint64_t rho = trajectory_radius(group_, t);
    std::size_t s = t - 1;
    std::vector<std::vector<Value>> targets(chains_.size());
    for (std::size_t j = 0; j < chains_.size(); ++j) {
      Chain& c = chains_[j];
      targets[j] = target_snapshot(j, s);
      Mode m;
      m.cross_block = union_;
      c.space.configure(rho, allowed_rule(j, s), m);
      for (const auto& [k, v] : reserved_)
        if (k == j) c.space.add_foreign({v});
    }
    std::vector<std::size_t> old_size(chains_.size());
    for (std::size_t j = 0; j < chains_.size(); ++j) old_size[j] = chains_[j].members.size();
    for (std::size_t j = 0; j < chains_.size(); ++j) grow(j, t, targets[j]);
    for (std::size_t j = 0; j < chains_.size(); ++j) certify(j, t, old_size[j]);
  }

  std::size_t size() const { return chains_.size(); }
  const std::vector<Value>& members(std::size_t j) const { return chains_[j].members; }
  const std::vector<StageRecord>& log(std::size_t j) const { return chains_[j].log; }

 private:
  struct Chain {
    ChainSpec spec;
    S space;
    std::vector<Value> members;  // in order of addition
    std::unordered_map<Value, std::size_t> stage_of;
    std::vector<StageRecord> log;
  };

  std::vector<Value> target_snapshot(std::size_t j, std::size_t s) const {
    const ChainSpec& sp = chains_[j].spec;
    std::vector<Element> ys;
    if (sp.target) {
      for (const auto& [v, st] : chains_[*sp.target].stage_of)
        if (st <= s) ys.push_back(S::to_element(v));
    } else if (sp.given) {
      ys = window(*sp.given, trajectory_radius(group_, s));
      if (ys.empty() || !ys.front().is_identity()) ys.insert(ys.begin(), Element::identity(group_));
    } else {
      ys.push_back(Element::identity(group_));
    }
    sort_canonical(ys);
    std::vector<Value> out;
    for (const Element& y : ys) out.push_back(S::from_element(y));
    return out;
  }

  std::function<bool(Value)> allowed_rule(std::size_t j, std::size_t s) const {
    const ChainSpec& sp = chains_[j].spec;
    if (sp.target) {
      const auto* m = &chains_[*sp.target].stage_of;
      return [m, s](Value d) {
        auto it = m->find(d);
        return S::is_e(d) || (it != m->end() && it->second <= s);
      };
    }
    if (sp.given) {
      SymbolicSet given = *sp.given;
      return [given](Value d) { return S::is_e(d) || member(given, S::to_element(d)); };
    }
    return [](Value d) { return S::is_e(d); };
  }

  std::vector<Value> quad(const Value& x, const Value& y) const {
    std::vector<Value> n{x, S::inv(x)};
    if (!S::is_e(y)) {
      Value yx = S::mul(y, x);
      n.push_back(yx);
      n.push_back(S::inv(yx));
    }
    return n;
  }

  bool admissible(const Chain& c, const std::vector<Value>& n) const {
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (S::is_e(n[i]) || !c.space.fresh_ok(n[i])) return false;
      for (std::size_t k = 0; k < i; ++k)
        if (n[i] == n[k]) return false;
    }
    for (const Value& u : n)
      for (const Value& v : n)
        if (c.space.forbidden(S::mul(u, v))) return false;
    return true;
  }

  void grow(std::size_t j, std::size_t t, const std::vector<Value>& ys) {
    Chain& c = chains_[j];
    StageRecord rec;
    rec.n = t;
    rec.forbidden_radius = trajectory_radius(group_, t);
    std::unordered_set<Value> done;
    for (const Value& y : ys) {
      if (done.count(S::inv(y))) continue;
      done.insert(y);
      Value x = c.space.scan([&](const Value& x) { return admissible(c, quad(x, y)); }, budget_);
      std::vector<Value> n = quad(x, y);
      c.space.add_own(n);
      for (std::size_t k = 0; k < chains_.size(); ++k)
        if (k != j) chains_[k].space.add_foreign(n);
      for (const Value& u : n) {
        c.members.push_back(u);
        c.stage_of.emplace(u, t);
        rec.added.push_back(S::to_element(u));
      }
      Value yx = S::mul(y, x);
      rec.targets.push_back(S::to_element(y));
      rec.chosen.push_back(S::to_element(x));
      rec.planted.push_back(S::to_element(yx));
      if (!S::is_e(y) && S::inv(y) != y) {
        rec.targets.push_back(S::to_element(S::inv(y)));
        rec.chosen.push_back(S::to_element(yx));
        rec.planted.push_back(S::to_element(x));
      }
    }
    sort_canonical(rec.added);
    c.log.push_back(std::move(rec));
  }

  // The displayed avoidance conditions for chain j at stage t.
  void certify(std::size_t j, std::size_t t, std::size_t old_size) {
    Chain& c = chains_[j];
    StageRecord& rec = c.log.back();
    std::vector<Value> fresh(c.members.begin() + static_cast<std::ptrdiff_t>(old_size), c.members.end());
    bool disjoint = true;
    for (const Value& u : fresh)
      for (std::size_t k = 0; k < chains_.size(); ++k)
        if (k != j && chains_[k].stage_of.count(u)) disjoint = false;
    bool new_new = true, old_new = true, cross = true;
    auto rho = static_cast<std::int64_t>(trajectory_radius(group_, t));
    for (const Value& v : fresh) {
      auto visit = [&](const Value& u) {
        bool is_new = c.stage_of.at(u) == t;
        bool bad = c.space.forbidden(S::mul(u, v)) || c.space.forbidden(S::mul(v, u));
        if (bad) (is_new ? new_new : old_new) = false;
      };
      if constexpr (std::is_same_v<S, ZSpace>)
        c.space.for_range(-rho - v, rho - v, visit);
      else
        c.space.for_all(visit);
      if (!union_) continue;
      for (std::size_t k = 0; k < chains_.size(); ++k) {
        if (k == j) continue;
        auto near = [&](const Value& u) {
          Value d = S::mul(v, S::inv(u));
          if (!S::is_e(u) && !S::is_e(d) && c.space.near(d)) cross = false;
        };
        if constexpr (std::is_same_v<S, ZSpace>)
          chains_[k].space.for_range(v - rho, v + rho, near);
        else
          chains_[k].space.for_all(near);
      }
    }
    rec.certificates.push_back({"chains_meet_only_at_e", disjoint});
    rec.certificates.push_back({"new_products_avoid_forbidden", new_new});
    rec.certificates.push_back({"old_new_products_avoid_forbidden", old_new});
    if (union_) rec.certificates.push_back({"cross_chain_differences_avoid_ball", cross});
    if (!rec.passed())
      throw CertificateFailure("trajectory stage " + std::to_string(t) + " failed a certificate");
  }

  GroupId group_;
  bool union_;
  SearchBudget budget_;
  std::vector<Chain> chains_;
  std::vector<std::pair<std::size_t, Value>> reserved_;
};


template <class S>
TrajectoryBundle run_trajectory(TrajectoryKind kind, std::size_t n, std::size_t stages, GroupId g,
                                const SymbolicSet& base, std::uint64_t budget) {
  using Value = typename S::Value;
  TrajectoryBundle b;
  b.kind = kind;
  b.group = g;
  std::vector<ChainSpec> specs;
  std::vector<std::string> labels;
  bool union_mode = false;
  std::optional<SymbolicSet> only_e;
  SymbolicSet e_set(FiniteSet(g, {Element::identity(g)}));
  switch (kind) {
    case TrajectoryKind::Tr6:
      if (n < 1) throw DomainError("Tr6 needs period n >= 1");
      for (std::size_t j = 0; j < n; ++j) {
        specs.push_back({(j + 1) % n, std::nullopt});
        labels.push_back("X_" + std::to_string(j));
      }
      break;
    case TrajectoryKind::Tr3:
      specs.push_back({std::size_t{0}, std::nullopt});
      labels.push_back("A");
      break;
    case TrajectoryKind::Tr1:
      if (n < 2) throw DomainError("Tr1 needs a chain of at least 2 sets");
      for (std::size_t j = 1; j < n; ++j) {
        if (j == 1)
          specs.push_back({std::nullopt, base});
        else
          specs.push_back({j - 2, std::nullopt});
        labels.push_back("X_" + std::to_string(j));
      }
      break;
    case TrajectoryKind::Tr2:
    case TrajectoryKind::Tr5: {
      if (n < 1) throw DomainError("trajectory family needs n >= 1");
      union_mode = kind == TrajectoryKind::Tr5;
      for (std::size_t j = 0; j <= 2 * n; ++j) {
        if (j < 2 * n)
          specs.push_back({j + 1, std::nullopt});
        else
          specs.push_back({std::nullopt, e_set});
        labels.push_back("X_" + std::to_string(static_cast<long long>(j) - static_cast<long long>(n)));
      }
      break;
    }
    case TrajectoryKind::Tr4:
      if (n < 1) throw DomainError("Tr4 needs n >= 1");
      union_mode = true;
      for (std::size_t j = 0; j <= n; ++j) {
        if (j < n)
          specs.push_back({j + 1, std::nullopt});
        else
          specs.push_back({std::nullopt, e_set});
        labels.push_back("X_" + std::to_string(j));
      }
      break;
  }
  std::vector<std::optional<std::size_t>> delta_of;
  for (const ChainSpec& sp : specs) delta_of.push_back(sp.target);

  ChainEngine<S> eng(g, specs, union_mode, budget);
  for (std::size_t t = 1; t <= stages; ++t) {
    eng.stage(t);
    if (kind == TrajectoryKind::Tr3 && t == 1) {
      // u = x(e); u*u is kept out of A for good.
      Value u = S::from_element(eng.log(0)[1].chosen.front());
      eng.reserve(0, S::mul(u, u));
      b.non_subgroup_witness = std::make_pair(S::to_element(u), S::to_element(u));
    }
  }

  std::size_t offset = 0;
  if (kind == TrajectoryKind::Tr1) {
    b.labels.push_back("X_0");
    b.sets.push_back(detail::as_stream(base));
    ConstructionLog given;
    given.kind = "given";
    given.group = g;
    given.target = base;
    b.logs.push_back(given);
    b.delta_of.push_back(std::nullopt);
    offset = 1;
  }
  std::vector<std::vector<Element>> elems(eng.size());
  for (std::size_t j = 0; j < eng.size(); ++j) {
    for (const Value& v : eng.members(j)) elems[j].push_back(S::to_element(v));
    sort_canonical(elems[j]);
    b.labels.push_back(labels[j]);
    b.sets.push_back(list_stream(g, std::string(trajectory_name(kind)) + ":" + labels[j], elems[j]));
    ConstructionLog log;
    log.kind = std::string("trajectory ") + trajectory_name(kind);
    log.group = g;
    log.stages = eng.log(j);
    b.logs.push_back(std::move(log));
    std::optional<std::size_t> d = delta_of[j];
    if (kind == TrajectoryKind::Tr1) d = j == 0 ? std::optional<std::size_t>(0) : std::optional<std::size_t>(j);
    b.delta_of.push_back(d ? std::optional<std::size_t>(*d + (kind == TrajectoryKind::Tr1 ? 0 : offset))
                           : std::nullopt);
  }

  // Pairwise intersections are {e} for every kind with several chains.
  bool disjoint = true;
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      std::vector<Element> both = detail::merge_intersect(elems[i], elems[j]);
      disjoint = disjoint && both.size() == 1 && both.front().is_identity();
    }
  b.certificates.push_back({"pairwise_intersections_are_e", disjoint});

  if (kind == TrajectoryKind::Tr3) {
    const auto& [u, v] = *b.non_subgroup_witness;
    bool in = contains_value(elems[0], u) && contains_value(elems[0], v) &&
              !contains_value(elems[0], mul(u, v));
    b.certificates.push_back({"non_subgroup_witness", in});
  }

  if (kind == TrajectoryKind::Tr4 || kind == TrajectoryKind::Tr5) {
    // Tr4: step k is the union of X_j, j >= k. Tr5: the union of X_j, j <= k.
    std::size_t chains = elems.size();
    auto step = [&](std::size_t k) {
      std::vector<Element> u;
      for (std::size_t j = 0; j < chains; ++j) {
        bool take = kind == TrajectoryKind::Tr4 ? j >= k : j <= n + k;
        if (take) u.insert(u.end(), elems[j].begin(), elems[j].end());
      }
      sort_canonical(u);
      return u;
    };
    std::vector<std::vector<Element>> st;
    for (std::size_t k = 0; k <= n; ++k) {
      st.push_back(step(k));
      b.steps.push_back(list_stream(g, "step " + std::to_string(k), st.back()));
    }
    for (std::size_t k = 0; k < n; ++k) {
      // Tr4: w in step k but not k+1. Tr5: w in step k+1 but not k.
      std::size_t chain = kind == TrajectoryKind::Tr4 ? k : n + k + 1;
      const std::vector<Element>& outer = kind == TrajectoryKind::Tr4 ? st[k] : st[k + 1];
      const std::vector<Element>& inner = kind == TrajectoryKind::Tr4 ? st[k + 1] : st[k];
      Element w = elems[chain].size() > 1 ? elems[chain][1] : elems[chain][0];
      b.strict_witnesses.push_back(w);
      bool ok = !w.is_identity() && contains_value(outer, w) && !contains_value(inner, w);
      b.certificates.push_back({"strict_step_" + std::to_string(k), ok});
    }
  }
  return b;
}

}  // namespace construct_detail

/// Realizes a Δ-trajectory of the given kind over `stages` stages. For Tr6, n
/// is the period; Tr1 builds a chain X_0..X_{n-1} over the given X_0 (default
/// {-1, 0, 1}); Tr2 the family X_{-n}..X_n; Tr4 and Tr5 n strict steps.
inline TrajectoryBundle realize_trajectory(TrajectoryKind kind, std::size_t n, std::size_t stages,
                                           GroupId g = GroupId::IntegersZ,
                                           std::optional<SymbolicSet> base = std::nullopt,
                                           std::uint64_t budget = 400'000'000) {
  using namespace construct_detail;
  if (stages == 0) throw DomainError("realize_trajectory: stages must be positive");
  SymbolicSet x0 = base ? *base
                        : (g == GroupId::IntegersZ
                               ? SymbolicSet(EPSet::finite({-1, 0, 1}))
                               : SymbolicSet(FiniteSet(g, {Element::word(""), Element::word("a"),
                                                           Element::word("A")})));
  if (x0.group() != g) throw DomainError("realize_trajectory: base from another group");
  if (kind == TrajectoryKind::Tr1) require_symmetric_with_e(x0);
  if (g == GroupId::IntegersZ) return run_trajectory<ZSpace>(kind, n, stages, g, x0, budget);
  return run_trajectory<F2Space>(kind, n, stages, g, x0, budget);
}

}  // namespace deltaset
