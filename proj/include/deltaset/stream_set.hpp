#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deltaset/group.hpp"

namespace deltaset {

inline void sort_canonical(std::vector<Element>& xs) {
  std::sort(xs.begin(), xs.end(), CanonicalLess{});
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

/// Explicit finite subset, kept sorted in canonical order without duplicates.
class FiniteSet {
 public:
  explicit FiniteSet(GroupId g) : group_(g) {}
  FiniteSet(GroupId g, std::vector<Element> xs) : group_(g), elems_(std::move(xs)) {
    for (const Element& x : elems_)
      if (x.group() != g) throw DomainError("finite set element from another group");
    sort_canonical(elems_);
  }

  GroupId group() const { return group_; }
  const std::vector<Element>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }

  bool contains(const Element& x) const {
    return std::binary_search(elems_.begin(), elems_.end(), x, CanonicalLess{});
  }

  std::vector<Element> window(std::uint64_t r) const {
    std::vector<Element> out;
    for (const Element& x : elems_) {
      if (!x.norm_le(r)) break;  // canonical order is norm-first
      out.push_back(x);
    }
    return out;
  }

  friend bool operator==(const FiniteSet& a, const FiniteSet& b) {
    return a.group_ == b.group_ && a.elems_ == b.elems_;
  }

 private:
  GroupId group_;
  std::vector<Element> elems_;
};

/// Named evidence attached to a stream by whoever built it.
struct Certificate {
  std::string name;
  std::string rule;
};

inline constexpr const char* kGapDivergence = "GapDivergence";

/// A subset given by an enumerator r -> A ∩ ball(r). Windows are memoized per
/// radius. Copies share state; a stream must not be queried concurrently.
class StreamSet {
 public:
  using Enumerator = std::function<std::vector<Element>(std::uint64_t)>;

  StreamSet(GroupId g, std::string label, Enumerator f, bool window_complete = true)
      : s_(std::make_shared<State>()) {
    s_->group = g;
    s_->label = std::move(label);
    s_->enumerate = std::move(f);
    s_->window_complete = window_complete;
  }

  GroupId group() const { return s_->group; }
  const std::string& label() const { return s_->label; }
  bool window_complete() const { return s_->window_complete; }

  const std::vector<Element>& window(std::uint64_t r) const {
    auto it = s_->memo.find(r);
    if (it != s_->memo.end()) return it->second;
    std::vector<Element> w = s_->enumerate(r);
    w.erase(std::remove_if(w.begin(), w.end(), [r](const Element& x) { return !x.norm_le(r); }),
            w.end());
    sort_canonical(w);
    return s_->memo.emplace(r, std::move(w)).first->second;
  }

  bool contains(const Element& x) const {
    std::uint64_t r = static_cast<std::uint64_t>(x.norm());
    const auto& w = window(r);
    return std::binary_search(w.begin(), w.end(), x, CanonicalLess{});
  }

  StreamSet& certify(Certificate c) {
    s_->certs.push_back(std::move(c));
    return *this;
  }
  bool has_certificate(const std::string& name) const {
    return std::any_of(s_->certs.begin(), s_->certs.end(),
                       [&](const Certificate& c) { return c.name == name; });
  }
  const std::vector<Certificate>& certificates() const { return s_->certs; }

  /// Set when the builder knows the stream is infinite (e.g. one new element
  /// per construction stage).
  StreamSet& declare_infinite(bool v = true) {
    s_->declared_infinite = v;
    return *this;
  }
  std::optional<bool> declared_infinite() const { return s_->declared_infinite; }

  std::size_t memo_size() const { return s_->memo.size(); }

  /// True when both handles share one underlying stream.
  bool same_as(const StreamSet& other) const { return s_ == other.s_; }

 private:
  struct State {
    GroupId group = GroupId::IntegersZ;
    std::string label;
    Enumerator enumerate;
    std::map<std::uint64_t, std::vector<Element>> memo;
    std::vector<Certificate> certs;
    std::optional<bool> declared_infinite;
    bool window_complete = true;
  };
  std::shared_ptr<State> s_;
};

/// Checks the gap-divergence shape on one window of a subset of Z: sorted by
/// value, the consecutive gaps are strictly increasing from some point on, and
/// the last gap exceeds every difference that occurs twice among the elements.
inline bool gap_certificate_holds(const std::vector<Element>& window) {
  std::vector<Integer> v;
  for (const Element& x : window) v.push_back(x.as_int());
  std::sort(v.begin(), v.end());
  if (v.size() < 4) return true;
  std::vector<Integer> gaps;
  for (std::size_t i = 1; i < v.size(); ++i) gaps.push_back(v[i] - v[i - 1]);
  // The gap sequence must rise away from its minimum in both directions.
  std::size_t m = std::min_element(gaps.begin(), gaps.end()) - gaps.begin();
  for (std::size_t i = m + 1; i < gaps.size(); ++i)
    if (!(gaps[i] > gaps[i - 1])) return false;
  for (std::size_t i = m; i-- > 0;)
    if (!(gaps[i] > gaps[i + 1])) return false;
  std::map<Integer, int> seen;
  Integer repeated = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (++seen[v[j] - v[i]] == 2) repeated = std::max(repeated, Integer(v[j] - v[i]));
  Integer last = std::max(gaps.front(), gaps.back());
  return last > repeated;
}

}  // namespace deltaset
