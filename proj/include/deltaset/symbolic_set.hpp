#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "deltaset/ep_set.hpp"
#include "deltaset/stream_set.hpp"

namespace deltaset {

/// A subset of Z or F2 in one of three representations: eventually periodic
/// (Z only, exact algebra), explicit finite, or enumerated stream.
class SymbolicSet {
 public:
  using Rep = std::variant<EPSet, FiniteSet, StreamSet>;

  SymbolicSet(EPSet ep) : group_(GroupId::IntegersZ), rep_(std::move(ep)) {}
  SymbolicSet(FiniteSet f) : group_(f.group()), rep_(std::move(f)) { normalize(); }
  SymbolicSet(StreamSet s) : group_(s.group()), rep_(std::move(s)) {}

  GroupId group() const { return group_; }
  const Rep& rep() const { return rep_; }

  bool is_ep() const { return std::holds_alternative<EPSet>(rep_); }
  bool is_finite_rep() const { return std::holds_alternative<FiniteSet>(rep_); }
  bool is_stream() const { return std::holds_alternative<StreamSet>(rep_); }
  const EPSet& ep() const { return std::get<EPSet>(rep_); }
  const FiniteSet& finite() const { return std::get<FiniteSet>(rep_); }
  const StreamSet& stream() const { return std::get<StreamSet>(rep_); }

  /// True for EP and finite representations: equality and membership are exact.
  bool is_exact() const { return !is_stream(); }

 private:
  // Finite subsets of Z that fit the periodic algebra are stored as EP sets so
  // that every Z operation has one exact code path.
  void normalize() {
    if (group_ != GroupId::IntegersZ) return;
    const auto& xs = std::get<FiniteSet>(rep_).elements();
    std::vector<std::int64_t> vals;
    for (const Element& x : xs) {
      const Integer& n = x.as_int();
      if (n > ep_limits::kMaxCutoff || n < -ep_limits::kMaxCutoff) return;
      vals.push_back(static_cast<std::int64_t>(n));
    }
    rep_ = EPSet::finite(std::move(vals));
  }

  GroupId group_;
  Rep rep_;
};

inline void require_same_group(const SymbolicSet& a, const SymbolicSet& b) {
  if (a.group() != b.group()) throw DomainError("operands belong to different groups");
}

inline std::vector<Element> to_elements(const std::vector<std::int64_t>& xs) {
  std::vector<Element> out;
  out.reserve(xs.size());
  for (std::int64_t x : xs) out.push_back(Element::integer(x));
  sort_canonical(out);
  return out;
}

/// A ∩ ball(r), in canonical order.
inline std::vector<Element> window(const SymbolicSet& a, std::uint64_t r) {
  switch (a.rep().index()) {
    case 0: {
      auto rr = static_cast<std::int64_t>(std::min<std::uint64_t>(r, ep_limits::kMaxCutoff * 4));
      return to_elements(a.ep().window(rr));
    }
    case 1:
      return a.finite().window(r);
    default:
      return a.stream().window(r);
  }
}

/// A ∩ [-r, r] as ascending integers (Z only).
inline std::vector<std::int64_t> window_z(const SymbolicSet& a, std::int64_t r) {
  if (a.group() != GroupId::IntegersZ) throw DomainError("integer window of a non-Z set");
  if (a.is_ep()) return a.ep().window(r);
  std::vector<std::int64_t> out;
  for (const Element& x : window(a, static_cast<std::uint64_t>(r))) out.push_back(x.to_i64());
  std::sort(out.begin(), out.end());
  return out;
}

inline bool ep_contains_big(const EPSet& a, const Integer& n) {
  if (n <= ep_limits::kMaxCutoff && n >= -ep_limits::kMaxCutoff)
    return a.contains(static_cast<std::int64_t>(n));
  Integer r = n % a.period();
  if (r < 0) r += a.period();
  auto res = static_cast<std::size_t>(r);
  return n > 0 ? a.pos_pattern()[res] : a.neg_pattern()[res];
}

inline bool member(const SymbolicSet& a, const Element& g) {
  if (g.group() != a.group()) throw DomainError("element from another group");
  switch (a.rep().index()) {
    case 0: return ep_contains_big(a.ep(), g.as_int());
    case 1: return a.finite().contains(g);
    default: return a.stream().contains(g);
  }
}

/// Converts an exact Z set to EP form (finite sets too large for the periodic
/// algebra raise a domain error).
inline EPSet as_ep(const SymbolicSet& a) {
  if (a.is_ep()) return a.ep();
  if (a.is_finite_rep()) {
    std::vector<std::int64_t> v;
    for (const Element& x : a.finite().elements()) {
      if (!x.is_int()) throw DomainError("periodic form requested for a non-Z set");
      v.push_back(x.to_i64());
    }
    return EPSet::finite(std::move(v));
  }
  throw UnsupportedRepresentation("stream has no periodic form");
}

namespace detail {

inline StreamSet as_stream(const SymbolicSet& a) {
  if (a.is_stream()) return a.stream();
  SymbolicSet copy = a;
  return StreamSet(a.group(), "view", [copy](std::uint64_t r) { return window(copy, r); });
}

inline std::string label_of(const SymbolicSet& a) {
  return a.is_stream() ? a.stream().label() : std::string("set");
}

inline std::vector<Element> merge_union(const std::vector<Element>& x, const std::vector<Element>& y) {
  std::vector<Element> out;
  std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out), CanonicalLess{});
  return out;
}

inline std::vector<Element> merge_intersect(const std::vector<Element>& x,
                                            const std::vector<Element>& y) {
  std::vector<Element> out;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out),
                        CanonicalLess{});
  return out;
}

}  // namespace detail

inline SymbolicSet set_union(const SymbolicSet& a, const SymbolicSet& b) {
  require_same_group(a, b);
  if (a.is_ep() && b.is_ep()) return ep_union(a.ep(), b.ep());
  if (a.is_exact() && b.is_exact()) {
    if (a.group() == GroupId::IntegersZ) return ep_union(as_ep(a), as_ep(b));
    return FiniteSet(a.group(), detail::merge_union(a.finite().elements(), b.finite().elements()));
  }
  StreamSet sa = detail::as_stream(a), sb = detail::as_stream(b);
  StreamSet out(a.group(), "(" + sa.label() + "|" + sb.label() + ")",
                [sa, sb](std::uint64_t r) { return detail::merge_union(sa.window(r), sb.window(r)); },
                sa.window_complete() && sb.window_complete());
  if (sa.declared_infinite().value_or(false) || sb.declared_infinite().value_or(false))
    out.declare_infinite();
  return out;
}

inline SymbolicSet set_intersect(const SymbolicSet& a, const SymbolicSet& b) {
  require_same_group(a, b);
  if (a.is_ep() && b.is_ep()) return ep_intersect(a.ep(), b.ep());
  if (a.is_exact() && b.is_exact()) {
    if (a.group() == GroupId::IntegersZ) return ep_intersect(as_ep(a), as_ep(b));
    return FiniteSet(a.group(),
                     detail::merge_intersect(a.finite().elements(), b.finite().elements()));
  }
  StreamSet sa = detail::as_stream(a), sb = detail::as_stream(b);
  return StreamSet(a.group(), "(" + sa.label() + "&" + sb.label() + ")",
                   [sa, sb](std::uint64_t r) {
                     return detail::merge_intersect(sa.window(r), sb.window(r));
                   },
                   sa.window_complete() && sb.window_complete());
}

inline SymbolicSet complement(const SymbolicSet& a) {
  if (a.is_stream()) throw UnsupportedRepresentation("complement of a stream set");
  if (a.group() != GroupId::IntegersZ)
    throw UnsupportedRepresentation("complement is only defined over Z");
  return ep_complement(as_ep(a));
}

/// g·A
inline SymbolicSet translate(const SymbolicSet& a, const Element& g) {
  if (g.group() != a.group()) throw DomainError("element from another group");
  if (a.is_ep()) return ep_translate(a.ep(), g.to_i64());
  if (a.is_finite_rep()) {
    std::vector<Element> out;
    for (const Element& x : a.finite().elements()) out.push_back(mul(g, x));
    return FiniteSet(a.group(), std::move(out));
  }
  StreamSet s = a.stream();
  auto reach = static_cast<std::uint64_t>(g.norm());
  StreamSet out(a.group(), s.label() + ">>" + g.str(),
                [s, g, reach](std::uint64_t r) {
                  std::vector<Element> w;
                  for (const Element& x : s.window(r + reach)) {
                    Element y = mul(g, x);
                    if (y.norm_le(r)) w.push_back(std::move(y));
                  }
                  return w;
                },
                s.window_complete());
  if (s.declared_infinite()) out.declare_infinite(*s.declared_infinite());
  return out;
}

/// A⁻¹
inline SymbolicSet invert(const SymbolicSet& a) {
  if (a.is_ep()) return ep_invert(a.ep());
  if (a.is_finite_rep()) {
    std::vector<Element> out;
    for (const Element& x : a.finite().elements()) out.push_back(inv(x));
    return FiniteSet(a.group(), std::move(out));
  }
  StreamSet s = a.stream();
  StreamSet out(a.group(), "inv(" + s.label() + ")",
                [s](std::uint64_t r) {
                  std::vector<Element> w;
                  for (const Element& x : s.window(r)) w.push_back(inv(x));
                  return w;
                },
                s.window_complete());
  if (s.declared_infinite()) out.declare_infinite(*s.declared_infinite());
  for (const Certificate& c : s.certificates())
    if (c.name == kGapDivergence) out.certify(c);
  return out;
}

/// A·B. Exact for EP and finite operands; a stream operand yields a stream
/// whose window(r) is built from the operands' windows at 2r and is not
/// guaranteed window-complete.
inline SymbolicSet product(const SymbolicSet& a, const SymbolicSet& b) {
  require_same_group(a, b);
  if (a.is_exact() && b.is_exact()) {
    if (a.group() == GroupId::IntegersZ) return ep_sumset(as_ep(a), as_ep(b));
    std::vector<Element> out;
    for (const Element& x : a.finite().elements())
      for (const Element& y : b.finite().elements()) out.push_back(mul(x, y));
    return FiniteSet(a.group(), std::move(out));
  }
  StreamSet sa = detail::as_stream(a), sb = detail::as_stream(b);
  return StreamSet(a.group(), "prod(" + sa.label() + "," + sb.label() + ")",
                   [sa, sb](std::uint64_t r) {
                     std::vector<Element> w;
                     const auto& wa = sa.window(2 * r);
                     const auto& wb = sb.window(2 * r);
                     for (const Element& x : wa)
                       for (const Element& y : wb) {
                         Element z = mul(x, y);
                         if (z.norm_le(r)) w.push_back(std::move(z));
                       }
                     return w;
                   },
                   false);
}

/// A·A⁻¹
inline SymbolicSet diffset(const SymbolicSet& a) { return product(a, invert(a)); }

struct FinitenessVerdict {
  bool finite = false;
  bool exact = true;
  std::uint64_t radius = 0;  // radius inspected for stream semi-decisions
};

inline std::uint64_t default_probe_radius(GroupId g) {
  return g == GroupId::IntegersZ ? 4096 : 8;
}

inline FinitenessVerdict is_finite(const SymbolicSet& a) {
  if (a.is_ep()) return {a.ep().is_finite(), true, 0};
  if (a.is_finite_rep()) return {true, true, 0};
  const StreamSet& s = a.stream();
  if (s.declared_infinite()) return {!*s.declared_infinite(), true, 0};
  std::uint64_t R = default_probe_radius(a.group());
  bool grew = s.window(R).size() != s.window(R / 2).size();
  return {!grew, false, R};
}

/// Structural equality for exact representations.
inline bool exact_equal(const SymbolicSet& a, const SymbolicSet& b) {
  if (a.group() != b.group()) return false;
  if (!a.is_exact() || !b.is_exact())
    throw UnsupportedRepresentation("equality of stream sets is not decidable");
  if (a.group() == GroupId::IntegersZ) return as_ep(a) == as_ep(b);
  return a.finite() == b.finite();
}

inline bool exact_subset(const SymbolicSet& a, const SymbolicSet& b) {
  require_same_group(a, b);
  if (!a.is_exact() || !b.is_exact())
    throw UnsupportedRepresentation("inclusion of stream sets is not decidable");
  if (a.group() == GroupId::IntegersZ) return as_ep(a).subset_of(as_ep(b));
  for (const Element& x : a.finite().elements())
    if (!b.finite().contains(x)) return false;
  return true;
}

// Named streams ---------------------------------------------------------------

/// {base^n : n >= 0} in Z, base >= 2. Certified gap-divergent.
inline StreamSet powers_stream(unsigned base) {
  if (base < 2) throw DomainError("powers_stream: base must be at least 2");
  StreamSet s(GroupId::IntegersZ, "pow" + std::to_string(base), [base](std::uint64_t r) {
    std::vector<Element> w;
    for (Integer x = 1; x <= r; x *= base) w.emplace_back(x);
    return w;
  });
  s.declare_infinite();
  s.certify({kGapDivergence, "consecutive gaps base^n (base-1) strictly increase"});
  return s;
}

/// Builds a stream from a finite element list (all norms known up front).
inline StreamSet list_stream(GroupId g, std::string label, std::vector<Element> xs) {
  sort_canonical(xs);
  return StreamSet(g, std::move(label), [xs](std::uint64_t r) {
    std::vector<Element> w;
    for (const Element& x : xs) {
      if (!x.norm_le(r)) break;
      w.push_back(x);
    }
    return w;
  });
}

}  // namespace deltaset
