#pragma once

// Brute-force windowed surrogates. Nothing here looks at set structure; every
// answer comes from counting inside finite windows.

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "deltaset/symbolic_set.hpp"

namespace deltaset {

struct OracleSchedule {
  std::vector<std::uint64_t> radii;
  std::vector<std::size_t> thresholds;

  static OracleSchedule for_group(GroupId g) {
    if (g == GroupId::IntegersZ) return {{256, 1024, 4096}, {3, 4, 5}};
    return {{6, 8, 10}, {3, 4, 5}};
  }

  void validate() const {
    if (radii.empty() || radii.size() != thresholds.size())
      throw DomainError("schedule needs one threshold per radius");
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (radii[i] < 1 || thresholds[i] < 1) throw DomainError("schedule entries must be positive");
      if (i && radii[i] <= radii[i - 1]) throw DomainError("schedule radii must increase");
      if (i && thresholds[i] < thresholds[i - 1])
        throw DomainError("schedule thresholds must not decrease");
    }
  }

  std::uint64_t core_radius() const { return radii.front() / 4; }
};

/// Witness counts |{x in W_A : g·x in W_B}| for g in ball(R), where W_S is
/// window(S, R). With B omitted this is the self-count for A.
class WitnessCounts {
 public:
  WitnessCounts(const SymbolicSet& a, std::uint64_t R) : WitnessCounts(a, a, R) {}

  WitnessCounts(const SymbolicSet& a, const SymbolicSet& b, std::uint64_t R)
      : group_(a.group()), R_(R) {
    require_same_group(a, b);
    if (group_ == GroupId::IntegersZ) {
      auto r = static_cast<std::int64_t>(R);
      auto bits_of = [&](const SymbolicSet& s) {
        boost::dynamic_bitset<> w(2 * R + 1);
        for (std::int64_t x : window_z(s, r)) w.set(static_cast<std::size_t>(x + r));
        return w;
      };
      boost::dynamic_bitset<> wa = bits_of(a), wb = bits_of(b);
      z_.assign(2 * R + 1, 0);
      for (std::int64_t g = -r; g <= r; ++g) {
        boost::dynamic_bitset<> s = g >= 0 ? (wb >> static_cast<std::size_t>(g))
                                           : (wb << static_cast<std::size_t>(-g));
        z_[static_cast<std::size_t>(g + r)] = (wa & s).count();
      }
      return;
    }
    std::vector<Element> wa = window(a, R), wb = window(b, R);
    for (const Element& x : wa) {
      Element xi = inv(x);
      for (const Element& y : wb) {
        Element g = mul(y, xi);
        if (g.norm_le(R)) ++f2_[g];
      }
    }
  }

  std::size_t count(const Element& g) const {
    if (!g.norm_le(R_)) return 0;
    if (group_ == GroupId::IntegersZ)
      return z_[static_cast<std::size_t>(g.to_i64() + static_cast<std::int64_t>(R_))];
    auto it = f2_.find(g);
    return it == f2_.end() ? 0 : it->second;
  }

  /// {g in ball(R) : count(g) >= t} in canonical order.
  std::vector<Element> at_least(std::size_t t) const {
    std::vector<Element> out;
    if (group_ == GroupId::IntegersZ) {
      auto r = static_cast<std::int64_t>(R_);
      for (std::int64_t g = -r; g <= r; ++g)
        if (z_[static_cast<std::size_t>(g + r)] >= t) out.push_back(Element::integer(g));
    } else {
      for (const auto& [g, c] : f2_)
        if (c >= t) out.push_back(g);
    }
    sort_canonical(out);
    return out;
  }

  std::uint64_t radius() const { return R_; }

 private:
  GroupId group_;
  std::uint64_t R_;
  std::vector<std::size_t> z_;
  std::unordered_map<Element, std::size_t> f2_;
};

/// {g in ball(R) : |{x in window(A,R) : g·x in window(A,R)}| >= t}
inline std::vector<Element> delta_window(const SymbolicSet& a, std::uint64_t R, std::size_t t) {
  if (R < 1 || t < 1) throw DomainError("delta_window needs R >= 1 and t >= 1");
  return WitnessCounts(a, R).at_least(t);
}

struct StabilityReport {
  OracleSchedule schedule;
  std::vector<std::vector<Element>> per_radius;
  std::uint64_t core_radius = 0;
  /// In ball(core_radius), over the threshold at every radius, with a witness
  /// count that strictly grows from each radius to the next.
  std::vector<Element> stable_core;
  /// Over the threshold at some radius and under it at a later one.
  std::vector<Element> escaped;
};

inline StabilityReport stability_report(const SymbolicSet& a, const OracleSchedule& sched) {
  sched.validate();
  StabilityReport rep;
  rep.schedule = sched;
  rep.core_radius = sched.core_radius();
  std::vector<WitnessCounts> counts;
  for (std::size_t i = 0; i < sched.radii.size(); ++i) {
    counts.emplace_back(a, sched.radii[i]);
    rep.per_radius.push_back(counts.back().at_least(sched.thresholds[i]));
  }
  // Finitely many witnesses give a count that stops changing once the window
  // holds them all; requiring growth separates those from genuine overlaps.
  for (const Element& g : ball(a.group(), rep.core_radius)) {
    bool all = true, grows = true;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      std::size_t c = counts[i].count(g);
      all = all && c >= sched.thresholds[i];
      if (i) grows = grows && c > counts[i - 1].count(g);
    }
    if (all && grows) rep.stable_core.push_back(g);
  }
  std::vector<Element> seen;
  for (std::size_t i = 0; i + 1 < rep.per_radius.size(); ++i)
    for (const Element& g : rep.per_radius[i]) {
      bool later_missing = false;
      for (std::size_t j = i + 1; j < rep.per_radius.size(); ++j)
        later_missing = later_missing ||
                        !std::binary_search(rep.per_radius[j].begin(), rep.per_radius[j].end(),
                                            g, CanonicalLess{});
      if (later_missing) seen.push_back(g);
    }
  sort_canonical(seen);
  rep.escaped = std::move(seen);
  return rep;
}

inline StabilityReport stability_report(const SymbolicSet& a) {
  return stability_report(a, OracleSchedule::for_group(a.group()));
}

/// Finite-window proxies for the largeness vocabulary (Z only).
struct ProxyReport {
  std::uint64_t radius = 0;
  std::int64_t max_gap = 0;              // includes the gaps to ±R
  std::int64_t max_run = 0;              // longest block of consecutive members
  std::int64_t max_complement_run = 0;   // longest block of consecutive non-members
  std::size_t max_multiplicity = 0;      // max over g != 0 of |(g+W) ∩ W|
  std::size_t greedy_disjoint = 0;       // greedy count of pairwise disjoint translates
  std::vector<std::int64_t> greedy_translates;
  bool large_proxy = false;
  bool thick_proxy = false;
};

inline ProxyReport brute_classify(const SymbolicSet& a, std::uint64_t R) {
  if (R < 64) throw DomainError("brute_classify needs R >= 64");
  if (a.group() != GroupId::IntegersZ) throw DomainError("brute_classify is defined over Z");
  auto r = static_cast<std::int64_t>(R);
  ProxyReport rep;
  rep.radius = R;
  std::vector<std::int64_t> w = window_z(a, r);
  boost::dynamic_bitset<> bits(2 * R + 1);
  for (std::int64_t x : w) bits.set(static_cast<std::size_t>(x + r));

  std::int64_t prev = -r - 1;
  for (std::int64_t x : w) {
    rep.max_gap = std::max(rep.max_gap, x - prev);
    prev = x;
  }
  rep.max_gap = std::max(rep.max_gap, r + 1 - prev);
  std::int64_t run = 0, crun = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) {
      ++run;
      crun = 0;
    } else {
      ++crun;
      run = 0;
    }
    rep.max_run = std::max(rep.max_run, run);
    rep.max_complement_run = std::max(rep.max_complement_run, crun);
  }

  WitnessCounts counts(a, R);
  for (std::int64_t g = -r; g <= r; ++g)
    if (g != 0) rep.max_multiplicity = std::max(rep.max_multiplicity, counts.count(Element::integer(g)));

  // Greedy disjoint translates g + W, g in ball(R/4), compared on ball(R/2).
  const std::int64_t half = r / 2;
  auto translate_bits = [&](std::int64_t g) {
    boost::dynamic_bitset<> t(2 * half + 1);
    for (std::int64_t x : w) {
      std::int64_t y = x + g;
      if (y >= -half && y <= half) t.set(static_cast<std::size_t>(y + half));
    }
    return t;
  };
  boost::dynamic_bitset<> used(2 * half + 1);
  for (const Element& ge : ball(GroupId::IntegersZ, R / 4)) {
    std::int64_t g = ge.to_i64();
    boost::dynamic_bitset<> t = translate_bits(g);
    if (t.none() || t.intersects(used)) continue;
    used |= t;
    rep.greedy_translates.push_back(g);
  }
  rep.greedy_disjoint = rep.greedy_translates.size();
  rep.large_proxy = rep.max_gap <= r / 4;
  rep.thick_proxy = rep.max_run >= r / 4;
  return rep;
}

}  // namespace deltaset
