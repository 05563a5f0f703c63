#pragma once

// Group arithmetic for the two concrete countable groups: the integers and
// the free group on two generators.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "deltaset/error.hpp"

namespace deltaset {

using Integer = boost::multiprecision::cpp_int;

enum class GroupId { IntegersZ, FreeF2 };

inline std::string_view group_name(GroupId g) {
  return g == GroupId::IntegersZ ? "Z" : "F2";
}

namespace f2 {

// Letter order a < A < b < B; uppercase is the inverse.
inline constexpr std::array<char, 4> kLetters{'a', 'A', 'b', 'B'};

inline int letter_rank(char c) {
  switch (c) {
    case 'a': return 0;
    case 'A': return 1;
    case 'b': return 2;
    case 'B': return 3;
    default: throw DomainError(std::string("not a free-group letter: ") + c);
  }
}

inline char inverse_letter(char c) {
  switch (c) {
    case 'a': return 'A';
    case 'A': return 'a';
    case 'b': return 'B';
    case 'B': return 'b';
    default: throw DomainError(std::string("not a free-group letter: ") + c);
  }
}

inline bool is_reduced(std::string_view w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (inverse_letter(w[i]) == w[i + 1]) return false;
  return true;
}

inline std::string reduce(std::string_view w) {
  std::string out;
  out.reserve(w.size());
  for (char c : w) {
    letter_rank(c);
    if (!out.empty() && inverse_letter(out.back()) == c)
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

}  // namespace f2

/// An element of Z (arbitrary precision) or of F2 (freely reduced word).
class Element {
 public:
  Element() : value_(Integer(0)) {}
  explicit Element(Integer n) : value_(std::move(n)) {}
  static Element integer(long long n) { return Element(Integer(n)); }

  /// Builds a word; the input is freely reduced first.
  static Element word(std::string_view letters) {
    Element e;
    e.value_ = Word{f2::reduce(letters)};
    return e;
  }

  static Element identity(GroupId g) {
    return g == GroupId::IntegersZ ? Element(Integer(0)) : word("");
  }

  GroupId group() const {
    return std::holds_alternative<Integer>(value_) ? GroupId::IntegersZ
                                                   : GroupId::FreeF2;
  }
  bool is_int() const { return group() == GroupId::IntegersZ; }

  const Integer& as_int() const {
    if (!is_int()) throw DomainError("element is not an integer");
    return std::get<Integer>(value_);
  }
  const std::string& letters() const {
    if (is_int()) throw DomainError("element is not a free-group word");
    return std::get<Word>(value_).letters;
  }

  /// Small-integer view; throws when the value does not fit.
  std::int64_t to_i64() const {
    const Integer& n = as_int();
    if (n > Integer(INT64_MAX) || n < Integer(INT64_MIN))
      throw DomainError("integer element exceeds 64-bit range");
    return static_cast<std::int64_t>(n);
  }

  bool is_identity() const {
    return is_int() ? as_int() == 0 : letters().empty();
  }

  /// |n| for integers, reduced length for words.
  Integer norm() const {
    if (is_int()) return boost::multiprecision::abs(as_int());
    return Integer(letters().size());
  }
  bool norm_le(std::uint64_t r) const {
    if (is_int()) return boost::multiprecision::abs(as_int()) <= r;
    return letters().size() <= r;
  }

  std::string str() const {
    if (is_int()) return as_int().str();
    return letters().empty() ? std::string("e") : letters();
  }

  friend bool operator==(const Element& a, const Element& b) {
    return a.value_ == b.value_;
  }

 private:
  struct Word {
    std::string letters;
    friend bool operator==(const Word&, const Word&) = default;
  };
  std::variant<Integer, Word> value_;
};

inline std::ostream& operator<<(std::ostream& os, const Element& e) {
  return os << e.str();
}

inline void require_same_group(const Element& g, const Element& h) {
  if (g.group() != h.group())
    throw DomainError("operands belong to different groups");
}

inline Element mul(const Element& g, const Element& h) {
  require_same_group(g, h);
  if (g.is_int()) return Element(g.as_int() + h.as_int());
  const std::string& a = g.letters();
  const std::string& b = h.letters();
  std::size_t i = a.size(), j = 0;
  while (i > 0 && j < b.size() && f2::inverse_letter(a[i - 1]) == b[j]) {
    --i;
    ++j;
  }
  return Element::word(a.substr(0, i) + b.substr(j));
}

inline Element inv(const Element& g) {
  if (g.is_int()) return Element(Integer(-g.as_int()));
  std::string w(g.letters().rbegin(), g.letters().rend());
  for (char& c : w) c = f2::inverse_letter(c);
  return Element::word(w);
}

/// Canonical total order: norm first; integers put n before -n, words are
/// shortlex with a < A < b < B.
inline bool canonical_less(const Element& x, const Element& y) {
  require_same_group(x, y);
  if (x.is_int()) {
    const Integer& a = x.as_int();
    const Integer& b = y.as_int();
    Integer aa = boost::multiprecision::abs(a), ab = boost::multiprecision::abs(b);
    if (aa != ab) return aa < ab;
    return a > b;
  }
  const std::string& a = x.letters();
  const std::string& b = y.letters();
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    int ra = f2::letter_rank(a[i]), rb = f2::letter_rank(b[i]);
    if (ra != rb) return ra < rb;
  }
  return false;
}

struct CanonicalLess {
  bool operator()(const Element& x, const Element& y) const {
    return canonical_less(x, y);
  }
};

/// Successor in the canonical enumeration of the group.
inline Element next_element(const Element& g) {
  if (g.is_int()) {
    const Integer& n = g.as_int();
    if (n > 0) return Element(Integer(-n));
    return Element(Integer(-n + 1));
  }
  std::string w = g.letters();
  // Odometer over reduced words of the same length.
  for (std::size_t pos = w.size(); pos-- > 0;) {
    int r = f2::letter_rank(w[pos]);
    for (int nr = r + 1; nr < 4; ++nr) {
      char c = f2::kLetters[nr];
      if (pos > 0 && f2::inverse_letter(w[pos - 1]) == c) continue;
      w[pos] = c;
      for (std::size_t k = pos + 1; k < w.size(); ++k) {
        for (char cand : f2::kLetters) {
          if (f2::inverse_letter(w[k - 1]) != cand) {
            w[k] = cand;
            break;
          }
        }
      }
      return Element::word(w);
    }
  }
  // Odometer wrapped: the first word of the next length is a^(n+1).
  return Element::word(std::string(w.size() + 1, 'a'));
}

/// All elements of norm at most r, in canonical order.
inline std::vector<Element> ball(GroupId group, std::uint64_t r) {
  std::vector<Element> out;
  if (group == GroupId::IntegersZ) {
    out.reserve(2 * r + 1);
    out.push_back(Element::integer(0));
    for (std::uint64_t k = 1; k <= r; ++k) {
      out.emplace_back(Integer(k));
      out.emplace_back(-Integer(k));
    }
    return out;
  }
  std::vector<std::string> layer{""};
  out.push_back(Element::word(""));
  for (std::uint64_t len = 1; len <= r; ++len) {
    std::vector<std::string> next;
    next.reserve(layer.size() * 4);
    for (const std::string& w : layer)
      for (char c : f2::kLetters)
        if (w.empty() || f2::inverse_letter(w.back()) != c) next.push_back(w + c);
    for (const std::string& w : next) out.push_back(Element::word(w));
    layer = std::move(next);
  }
  return out;
}

/// {x : x*x = g}. Torsion-free groups with unique roots: at most one element.
inline std::vector<Element> sqrt_set(const Element& g) {
  if (g.is_int()) {
    const Integer& n = g.as_int();
    if (n % 2 != 0) return {};
    return {Element(Integer(n / 2))};
  }
  const std::string& w = g.letters();
  // Split off the conjugating prefix: w = u c u^-1 with c cyclically reduced.
  std::size_t k = 0;
  while (2 * k + 1 < w.size() &&
         f2::inverse_letter(w[k]) == w[w.size() - 1 - k])
    ++k;
  std::string_view core(w.data() + k, w.size() - 2 * k);
  if (core.size() % 2 != 0) return {};
  std::size_t half = core.size() / 2;
  if (core.substr(0, half) != core.substr(half)) return {};
  std::string root = w.substr(0, k);
  root.append(core.substr(0, half));
  root.append(w.substr(w.size() - k));
  return {Element::word(root)};
}

/// Parses an element literal: a signed decimal for Z, a word over
/// {a, A, b, B} (or "e") for F2.
inline Element parse_element(GroupId group, std::string_view text) {
  if (group == GroupId::IntegersZ) {
    if (text.empty()) throw DomainError("empty integer literal");
    std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (i == text.size()) throw DomainError("bad integer literal");
    for (std::size_t k = i; k < text.size(); ++k)
      if (text[k] < '0' || text[k] > '9')
        throw DomainError("bad integer literal: " + std::string(text));
    Integer n(std::string(text.substr(i)));
    return Element(text[0] == '-' ? Integer(-n) : n);
  }
  if (text == "e") return Element::word("");
  return Element::word(text);
}

}  // namespace deltaset

template <>
struct std::hash<deltaset::Element> {
  std::size_t operator()(const deltaset::Element& e) const {
    if (e.is_int()) return boost::multiprecision::hash_value(e.as_int());
    return std::hash<std::string>{}(e.letters()) ^ 0x9e3779b97f4a7c15ull;
  }
};
