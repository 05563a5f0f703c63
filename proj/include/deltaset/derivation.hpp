#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "deltaset/oracle.hpp"

namespace deltaset {

enum class Exactness { Exact, Certified, Windowed };

inline const char* exactness_name(Exactness e) {
  switch (e) {
    case Exactness::Exact: return "Exact";
    case Exactness::Certified: return "Certified";
    default: return "Windowed";
  }
}

struct DeltaResult {
  SymbolicSet value;
  Exactness exactness = Exactness::Exact;
  std::string rule;                       // which rule produced the value
  std::optional<StabilityReport> report;  // present for Windowed results
};

/// Thrown by delta_trajectory when a step can no longer be derived exactly.
class TrajectoryTruncated : public Error {
 public:
  TrajectoryTruncated(std::string msg, std::vector<DeltaResult> prefix)
      : Error(std::move(msg)), prefix_(std::move(prefix)) {}
  const std::vector<DeltaResult>& prefix() const { return prefix_; }

 private:
  std::vector<DeltaResult> prefix_;
};

inline SymbolicSet empty_set(GroupId g) {
  if (g == GroupId::IntegersZ) return EPSet::empty();
  return FiniteSet(g);
}

inline SymbolicSet identity_set(GroupId g) {
  return FiniteSet(g, {Element::identity(g)});
}

namespace detail {

// Residues g mod L with (P + g) ∩ Q nonempty, for patterns P, Q of length L.
inline std::vector<bool> overlap_residues(const std::vector<bool>& P, const std::vector<bool>& Q) {
  const std::int64_t L = static_cast<std::int64_t>(P.size());
  std::vector<bool> out(L, false);
  for (std::int64_t s = 0; s < L; ++s) {
    if (!P[s]) continue;
    for (std::int64_t t = 0; t < L; ++t)
      if (Q[t]) out[mod_floor(t - s, L)] = true;
  }
  return out;
}

// Δ(A, B) on eventually periodic sets: only same-side tails meet infinitely.
inline EPSet ep_delta_joint(const EPSet& a, const EPSet& b) {
  std::int64_t L = checked_lcm(a.period(), b.period());
  std::vector<bool> pos = overlap_residues(a.pos_at(L), b.pos_at(L));
  std::vector<bool> neg = overlap_residues(a.neg_at(L), b.neg_at(L));
  std::vector<bool> cls(L);
  for (std::int64_t r = 0; r < L; ++r) cls[r] = pos[r] || neg[r];
  return EPSet(L, cls, cls, 0, cls[0] ? std::vector<std::int64_t>{0} : std::vector<std::int64_t>{});
}

// Lazy view of the windowed core: window(r) runs the schedule scaled up until
// its core radius reaches r.
inline StreamSet windowed_view(const SymbolicSet& a, const SymbolicSet& b,
                               const OracleSchedule& base) {
  return StreamSet(
      a.group(), "delta-window",
      [a, b, base](std::uint64_t r) {
        OracleSchedule s = base;
        std::uint64_t k = 1;
        while (s.core_radius() * k < r) k *= 2;
        for (auto& R : s.radii) R *= k;
        std::vector<WitnessCounts> counts;
        for (std::uint64_t R : s.radii) counts.emplace_back(a, b, R);
        std::vector<Element> out;
        for (const Element& g : ball(a.group(), r)) {
          bool keep = true;
          for (std::size_t i = 0; i < counts.size() && keep; ++i) {
            std::size_t c = counts[i].count(g);
            keep = c >= s.thresholds[i] && (i == 0 || c > counts[i - 1].count(g));
          }
          if (keep) out.push_back(g);
        }
        return out;
      },
      false);
}

}  // namespace detail

/// Δ(A, B) = {g : |gA ∩ B| = ∞}
inline DeltaResult delta_joint(const SymbolicSet& a, const SymbolicSet& b) {
  require_same_group(a, b);
  GroupId G = a.group();
  FinitenessVerdict fa = is_finite(a), fb = is_finite(b);
  if ((fa.exact && fa.finite) || (fb.exact && fb.finite))
    return {empty_set(G), Exactness::Exact, "finite operand", std::nullopt};
  if (a.is_exact() && b.is_exact())
    return {detail::ep_delta_joint(as_ep(a), as_ep(b)), Exactness::Exact, "residue rule",
            std::nullopt};
  bool same = a.is_stream() && b.is_stream() && a.stream().same_as(b.stream());
  if (same && a.stream().has_certificate(kGapDivergence))
    return {identity_set(G), Exactness::Certified, kGapDivergence, std::nullopt};
  OracleSchedule sched = OracleSchedule::for_group(G);
  StabilityReport rep;
  rep.schedule = sched;
  rep.core_radius = sched.core_radius();
  StreamSet view = detail::windowed_view(a, b, sched);
  rep.stable_core = view.window(rep.core_radius);
  return {view, Exactness::Windowed, "stability schedule", std::move(rep)};
}

/// Δ(A) = {g : |gA ∩ A| = ∞}
inline DeltaResult delta(const SymbolicSet& a) {
  GroupId G = a.group();
  FinitenessVerdict f = is_finite(a);
  if (f.exact && f.finite) return {empty_set(G), Exactness::Exact, "finite set", std::nullopt};
  if (a.is_ep())
    return {detail::ep_delta_joint(a.ep(), a.ep()), Exactness::Exact, "residue rule",
            std::nullopt};
  const StreamSet& s = a.stream();
  if (s.has_certificate(kGapDivergence))
    return {identity_set(G), Exactness::Certified, kGapDivergence, std::nullopt};
  OracleSchedule sched = OracleSchedule::for_group(G);
  StabilityReport rep = stability_report(a, sched);
  StreamSet view = detail::windowed_view(a, a, sched);
  return {view, Exactness::Windowed, "stability schedule", std::move(rep)};
}

/// [A, Δ(A), ..., Δⁿ(A)] as results; entry 0 is A itself marked Exact.
inline std::vector<DeltaResult> delta_trajectory(const SymbolicSet& a, std::size_t n) {
  std::vector<DeltaResult> out;
  out.push_back({a, a.is_exact() ? Exactness::Exact : Exactness::Windowed, "input", std::nullopt});
  if (!a.is_exact() && n > 0) {
    DeltaResult first = delta(a);
    bool ok = first.exactness != Exactness::Windowed;
    out.push_back(std::move(first));
    if (!ok)
      throw TrajectoryTruncated("trajectory step 1 is only windowed", std::move(out));
  }
  while (out.size() <= n) {
    const DeltaResult& last = out.back();
    if (!last.value.is_exact())
      throw TrajectoryTruncated(
          "trajectory step " + std::to_string(out.size() - 1) + " is not exact", std::move(out));
    DeltaResult next = delta(last.value);
    bool windowed = next.exactness == Exactness::Windowed;
    out.push_back(std::move(next));
    if (windowed)
      throw TrajectoryTruncated(
          "trajectory step " + std::to_string(out.size() - 1) + " is only windowed",
          std::move(out));
  }
  return out;
}

using Rational = boost::rational<std::int64_t>;

/// Sym_α(A) = {g : |A ∩ (A + g)| >= α|A|} for a finite nonempty A ⊂ Z.
inline SymbolicSet sym_set(const SymbolicSet& a, Rational alpha) {
  if (a.group() != GroupId::IntegersZ) throw DomainError("sym_set is defined over Z");
  if (alpha < Rational(0) || alpha > Rational(1))
    throw DomainError("sym_set: alpha must lie in [0, 1]");
  FinitenessVerdict f = is_finite(a);
  if (!f.exact || !f.finite) throw DomainError("sym_set needs a finite set");
  std::vector<std::int64_t> xs = window_z(a, as_ep(a).cutoff());
  if (xs.empty()) throw DomainError("sym_set needs a nonempty set");
  if (alpha == Rational(0)) return EPSet::integers();
  const auto n = static_cast<std::int64_t>(xs.size());
  std::vector<std::int64_t> diffs;
  for (std::int64_t x : xs)
    for (std::int64_t y : xs) diffs.push_back(x - y);
  std::sort(diffs.begin(), diffs.end());
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < diffs.size();) {
    std::size_t j = i;
    while (j < diffs.size() && diffs[j] == diffs[i]) ++j;
    // The run length is |{(x, y) : x - y = g}| = |A ∩ (A + g)|.
    auto c = static_cast<std::int64_t>(j - i);
    if (Rational(c) >= alpha * Rational(n)) out.push_back(diffs[i]);
    i = j;
  }
  return EPSet::finite(std::move(out));
}

}  // namespace deltaset
