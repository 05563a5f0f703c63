#pragma once

// Set-expression language: lexer, parser, canonical printers and evaluator.

#include <algorithm>
#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deltaset/classify.hpp"
#include "deltaset/derivation.hpp"

namespace deltaset::dsl {

struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public Error {
 public:
  ParseError(Span at, std::vector<std::string> expected, const std::string& found)
      : Error(message(at, expected, found)), at_(at), expected_(std::move(expected)) {}

  const Span& where() const { return at_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string message(const Span& at, const std::vector<std::string>& expected,
                             const std::string& found) {
    std::string m = "syntax error at line " + std::to_string(at.line) + ", column " +
                    std::to_string(at.column) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) m += (i ? " or " : "") + expected[i];
    return m + ", found " + found;
  }
  Span at_;
  std::vector<std::string> expected_;
};

/// Type or domain error raised while evaluating a node.
class EvalError : public Error {
 public:
  EvalError(Span at, const std::string& what)
      : Error("error at line " + std::to_string(at.line) + ", column " + std::to_string(at.column) +
              ": " + what),
        at_(at) {}
  const Span& where() const { return at_; }

 private:
  Span at_;
};

enum class Kind { Integers, Finite, Ap, Ray, Named, Not, Union, Intersect, Shift, Call, Number };

struct Node {
  Kind kind = Kind::Integers;
  Span span;
  std::string name;                // Named, Call; the sign for Ray; n or n/d for Number
  std::vector<std::string> items;  // Finite elements; Ap/Ray integers; Shift amount
  std::vector<std::shared_ptr<const Node>> children;
};
using NodePtr = std::shared_ptr<const Node>;

inline bool same_structure(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.name != b.name || a.items != b.items ||
      a.children.size() != b.children.size())
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same_structure(*a.children[i], *b.children[i])) return false;
  return true;
}

inline const std::vector<std::string>& function_names() {
  static const std::vector<std::string> names{"delta", "delta2", "traj", "sym",
                                              "inv",   "prod",   "diff", "classify"};
  return names;
}

inline bool is_function(std::string_view s) {
  const auto& f = function_names();
  return std::find(f.begin(), f.end(), s) != f.end();
}

namespace detail {

enum class Tok { Int, Ident, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Span span;
};

inline std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, line_start = 0;
  auto span = [&](std::size_t at, std::size_t len) {
    return Span{at, len, line, at - line_start + 1};
  };
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') {
      ++line;
      line_start = ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Int, std::string(s.substr(i, j - i)), span(i, j - i)});
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), span(i, j - i)});
    } else if (c == '>' && i + 1 < s.size() && s[i + 1] == '>') {
      j = i + 2;
      out.push_back({Tok::Punct, ">>", span(i, 2)});
    } else if (std::string_view("|&!(){},+-/").find(c) != std::string_view::npos) {
      j = i + 1;
      out.push_back({Tok::Punct, std::string(1, c), span(i, 1)});
    } else {
      throw ParseError(span(i, 1), {"expression"}, "'" + std::string(1, c) + "'");
    }
    i = j;
  }
  out.push_back({Tok::End, "", span(s.size(), 0)});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  NodePtr parse_all() {
    NodePtr e = expr();
    if (peek().kind != Tok::End) fail({"'|'", "'&'", "'>>'", "end of input"});
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    throw ParseError(t.span, std::move(expected),
                     t.kind == Tok::End ? "end of input" : "'" + t.text + "'");
  }

  Token expect(std::string_view p) {
    if (!at(p)) fail({"'" + std::string(p) + "'"});
    return toks_[pos_++];
  }

  static Span join(const Span& a, const Span& b) {
    Span s = a;
    s.length = b.offset + b.length - a.offset;
    return s;
  }

  static NodePtr make(Kind k, Span sp, std::string name = {}, std::vector<std::string> items = {},
                      std::vector<NodePtr> kids = {}) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->span = sp;
    n->name = std::move(name);
    n->items = std::move(items);
    n->children = std::move(kids);
    return n;
  }

  NodePtr expr() {
    NodePtr lhs = conj();
    while (at("|")) {
      ++pos_;
      NodePtr rhs = conj();
      lhs = make(Kind::Union, join(lhs->span, rhs->span), {}, {}, {lhs, rhs});
    }
    return lhs;
  }

  NodePtr conj() {
    NodePtr lhs = term();
    while (at("&")) {
      ++pos_;
      NodePtr rhs = term();
      lhs = make(Kind::Intersect, join(lhs->span, rhs->span), {}, {}, {lhs, rhs});
    }
    return lhs;
  }

  NodePtr term() {
    if (at("!")) {
      Span s = toks_[pos_++].span;
      NodePtr t = term();
      return make(Kind::Not, join(s, t->span), {}, {}, {t});
    }
    return shifted();
  }

  NodePtr shifted() {
    NodePtr a = atom();
    while (at(">>")) {
      ++pos_;
      std::string amount;
      Span end = peek().span;
      if (peek().kind == Tok::Ident) {
        amount = toks_[pos_++].text;
      } else {
        amount = signed_int({"integer", "word"});
        end = toks_[pos_ - 1].span;
      }
      a = make(Kind::Shift, join(a->span, end), {}, {amount}, {a});
    }
    return a;
  }

  // Canonical decimal text of an optionally signed integer.
  std::string signed_int(std::vector<std::string> expected = {"integer"}) {
    bool neg = false;
    if (at("-") || at("+")) {
      neg = peek().text == "-";
      ++pos_;
    }
    if (peek().kind != Tok::Int) fail(std::move(expected));
    Integer v(toks_[pos_++].text);
    if (neg) v = -v;
    return v.str();
  }

  NodePtr atom() {
    const Token& t = peek();
    if (at("(")) {
      ++pos_;
      NodePtr e = expr();
      expect(")");
      return e;
    }
    if (t.kind != Tok::Ident) fail({"expression"});
    Span s = t.span;
    std::string id = t.text;
    ++pos_;
    if (id == "Z") return make(Kind::Integers, s);
    if (id == "finite") {
      expect("{");
      std::vector<std::string> xs;
      if (!at("}")) {
        for (;;) {
          if (peek().kind == Tok::Ident)
            xs.push_back(toks_[pos_++].text);
          else
            xs.push_back(signed_int({"integer", "word", "'}'"}));
          if (!at(",")) break;
          ++pos_;
        }
      }
      return make(Kind::Finite, join(s, expect("}").span), {}, std::move(xs));
    }
    if (id == "ap") {
      expect("(");
      std::string a = signed_int();
      expect(",");
      std::string d = signed_int();
      return make(Kind::Ap, join(s, expect(")").span), {}, {a, d});
    }
    if (id == "ray") {
      expect("(");
      std::string a = signed_int();
      expect(",");
      std::string d = signed_int();
      expect(",");
      if (!at("+") && !at("-")) fail({"'+'", "'-'"});
      std::string sign = toks_[pos_++].text;
      return make(Kind::Ray, join(s, expect(")").span), sign, {a, d});
    }
    if (is_function(id)) {
      expect("(");
      std::vector<NodePtr> args;
      if (!at(")")) {
        for (;;) {
          args.push_back(argument());
          if (!at(",")) break;
          ++pos_;
        }
      }
      return make(Kind::Call, join(s, expect(")").span), id, {}, std::move(args));
    }
    if (at("(")) throw ParseError(s, {"function name"}, "'" + id + "'");
    return make(Kind::Named, s, id);
  }

  NodePtr argument() {
    if (peek().kind == Tok::Int || at("-") || at("+")) {
      Span s = peek().span;
      std::string v = signed_int({"integer", "expression"});
      Span e = toks_[pos_ - 1].span;
      if (at("/")) {
        ++pos_;
        if (peek().kind != Tok::Int) fail({"integer"});
        Integer num(v), den(toks_[pos_].text);
        e = toks_[pos_++].span;
        if (den == 0) throw ParseError(e, {"nonzero denominator"}, "'0'");
        Integer g = boost::multiprecision::gcd(num, den);
        v = Integer(num / g).str() + "/" + Integer(den / g).str();
        if (den == g) v = Integer(num / g).str();
      }
      return make(Kind::Number, join(s, e), v);
    }
    return expr();
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline NodePtr parse(std::string_view text) { return detail::Parser(text).parse_all(); }

/// Canonical text of an AST; parse(print(t)) has the structure of t.
inline std::string print(const Node& n) {
  auto wrap = [](const Node& c, std::initializer_list<Kind> kinds) {
    bool paren = std::find(kinds.begin(), kinds.end(), c.kind) != kinds.end();
    return paren ? "(" + print(c) + ")" : print(c);
  };
  auto join = [](const std::vector<std::string>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + xs[i];
    return s;
  };
  switch (n.kind) {
    case Kind::Integers: return "Z";
    case Kind::Finite: return "finite{" + join(n.items) + "}";
    case Kind::Ap: return "ap(" + join(n.items) + ")";
    case Kind::Ray: return "ray(" + join(n.items) + "," + n.name + ")";
    case Kind::Named: return n.name;
    case Kind::Number: return n.name;
    case Kind::Not: return "!" + wrap(*n.children[0], {Kind::Union, Kind::Intersect});
    case Kind::Shift:
      return wrap(*n.children[0], {Kind::Union, Kind::Intersect, Kind::Not}) + ">>" + n.items[0];
    case Kind::Union:
      return print(*n.children[0]) + " | " + wrap(*n.children[1], {Kind::Union});
    case Kind::Intersect:
      return wrap(*n.children[0], {Kind::Union}) + " & " +
             wrap(*n.children[1], {Kind::Union, Kind::Intersect});
    case Kind::Call: {
      std::string s = n.name + "(";
      for (std::size_t i = 0; i < n.children.size(); ++i) s += (i ? "," : "") + print(*n.children[i]);
      return s + ")";
    }
  }
  return {};
}

// Canonical set literals -------------------------------------------------------

namespace detail {

inline std::string finite_literal(const std::vector<Element>& xs) {
  std::string s = "finite{";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + xs[i].str();
  return s + "}";
}

// Residue classes, maximal rays and a finite remainder, in that order.
inline std::vector<std::string> union_terms(const EPSet& a) {
  std::vector<std::string> terms;
  if (a.is_empty()) return terms;
  const std::int64_t p = a.period(), n0 = a.cutoff();
  const std::string ps = std::to_string(p);
  EPSet u = EPSet::empty();
  std::vector<std::string> rays;
  for (std::int64_t r = 0; r < p; ++r) {
    bool up = a.pos_pattern()[r], down = a.neg_pattern()[r];
    if (!up && !down) continue;
    bool whole = up && down;
    for (std::int64_t x = -n0; whole && x <= n0; ++x)
      if (mod_floor(x - r, p) == 0 && !a.contains(x)) whole = false;
    if (whole) {
      terms.push_back("ap(" + std::to_string(r) + "," + ps + ")");
      u = ep_union(u, EPSet::ap(r, p));
      continue;
    }
    if (up) {
      std::int64_t s = n0 + 1 + mod_floor(r - n0 - 1, p);
      while (a.contains(s - p)) s -= p;
      rays.push_back("ray(" + std::to_string(s) + "," + ps + ",+)");
      u = ep_union(u, EPSet::ray(s, p, true));
    }
    if (down) {
      std::int64_t s = -n0 - 1 - mod_floor(-n0 - 1 - r, p);
      while (a.contains(s + p)) s += p;
      rays.push_back("ray(" + std::to_string(s) + "," + ps + ",-)");
      u = ep_union(u, EPSet::ray(s, p, false));
    }
  }
  terms.insert(terms.end(), rays.begin(), rays.end());
  EPSet rest = ep_minus(a, u);
  if (!rest.is_empty()) {
    std::vector<Element> xs;
    for (std::int64_t x : rest.window(rest.cutoff())) xs.push_back(Element::integer(x));
    terms.push_back(finite_literal(xs));
  }
  return terms;
}

inline std::string union_form(const EPSet& a) {
  if (a.is_integers()) return "Z";
  std::vector<std::string> t = union_terms(a);
  if (t.empty()) return "finite{}";
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? " | " : "") + t[i];
  return s;
}

}  // namespace detail

/// The shorter of the union form and the complement form; ties go to the union.
inline std::string format_ep(const EPSet& a) {
  if (a.is_empty()) return "finite{}";
  if (a.is_integers()) return "Z";
  std::string u = detail::union_form(a);
  EPSet c = ep_complement(a);
  std::string inner = detail::union_form(c);
  bool single = detail::union_terms(c).size() <= 1;
  std::string comp = single ? "!" + inner : "!(" + inner + ")";
  return comp.size() < u.size() ? comp : u;
}

inline std::uint64_t default_print_radius(GroupId g) { return g == GroupId::IntegersZ ? 64 : 4; }

inline std::string format_set(const SymbolicSet& a, std::uint64_t radius) {
  if (a.is_ep()) return format_ep(a.ep());
  if (a.is_finite_rep()) return detail::finite_literal(a.finite().elements());
  return "window(" + a.stream().label() + ", " + std::to_string(radius) +
         "): " + detail::finite_literal(window(a, radius));
}

// Evaluation -------------------------------------------------------------------

struct Value {
  enum class Type { Set, Number, Report };
  Type type = Type::Set;
  std::optional<SymbolicSet> set;
  Rational number{0};
  std::string text;  // Report: rendered text; Set: exactness note when not exact
  std::string report_kind;  // "classify" or "traj"
  std::optional<FullClassification> classification;
  std::vector<DeltaResult> trajectory;
  std::optional<std::string> trajectory_stop;
};

struct EvalOptions {
  GroupId group = GroupId::IntegersZ;
  std::uint64_t radius = 0;  // printing radius for streams, 0 = group default
};

class Evaluator {
 public:
  explicit Evaluator(EvalOptions opts = {}) : opts_(opts) {
    if (opts_.radius == 0) opts_.radius = default_print_radius(opts_.group);
  }

  Value eval(const Node& n) const {
    try {
      return eval_inner(n);
    } catch (const EvalError&) {
      throw;
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw EvalError(n.span, e.what());
    }
  }

  SymbolicSet eval_set(const Node& n) const {
    Value v = eval(n);
    if (v.type != Value::Type::Set) throw EvalError(n.span, "expected a set");
    return *v.set;
  }

  std::string render(const Value& v) const {
    switch (v.type) {
      case Value::Type::Set: return format_set(*v.set, opts_.radius);
      case Value::Type::Number: return v.number.denominator() == 1
                                           ? std::to_string(v.number.numerator())
                                           : std::to_string(v.number.numerator()) + "/" +
                                                 std::to_string(v.number.denominator());
      default: return v.text;
    }
  }

  const EvalOptions& options() const { return opts_; }

 private:
  static Value set_value(SymbolicSet s) {
    Value v;
    v.set = std::move(s);
    return v;
  }

  void require_z(const Node& n, const char* what) const {
    if (opts_.group != GroupId::IntegersZ)
      throw EvalError(n.span, std::string(what) + " literals exist only over Z");
  }

  static std::int64_t small_int(const Node& n, const std::string& s) {
    Integer v(s);
    if (v > Integer(ep_limits::kMaxCutoff) || v < -Integer(ep_limits::kMaxCutoff))
      throw EvalError(n.span, "integer " + s + " is out of range");
    return static_cast<std::int64_t>(v);
  }

  Element element(const Node& n, const std::string& text) const {
    bool digits = !text.empty() && (std::isdigit(static_cast<unsigned char>(text.back())));
    if (opts_.group == GroupId::IntegersZ) {
      if (!digits) throw EvalError(n.span, "'" + text + "' is not an integer");
      return parse_element(GroupId::IntegersZ, text);
    }
    if (digits) throw EvalError(n.span, "'" + text + "' is not a word in a, A, b, B");
    for (char c : text)
      if (text != "e" && std::string_view("aAbB").find(c) == std::string_view::npos)
        throw EvalError(n.span, "'" + text + "' is not a word in a, A, b, B");
    return parse_element(GroupId::FreeF2, text);
  }

  void arity(const Node& n, std::size_t k) const {
    if (n.children.size() != k)
      throw EvalError(n.span, n.name + " takes " + std::to_string(k) + " argument" +
                                  (k == 1 ? "" : "s") + ", got " + std::to_string(n.children.size()));
  }

  Rational number_arg(const Node& n) const {
    if (n.kind != Kind::Number) throw EvalError(n.span, "expected a number");
    auto slash = n.name.find('/');
    std::int64_t num = small_int(n, n.name.substr(0, slash));
    std::int64_t den = slash == std::string::npos ? 1 : small_int(n, n.name.substr(slash + 1));
    return Rational(num, den);
  }

  Value eval_inner(const Node& n) const {
    switch (n.kind) {
      case Kind::Integers:
        require_z(n, "Z");
        return set_value(EPSet::integers());
      case Kind::Finite: {
        std::vector<Element> xs;
        for (const std::string& s : n.items) xs.push_back(element(n, s));
        return set_value(SymbolicSet(FiniteSet(opts_.group, std::move(xs))));
      }
      case Kind::Ap:
        require_z(n, "ap");
        return set_value(EPSet::ap(small_int(n, n.items[0]), small_int(n, n.items[1])));
      case Kind::Ray:
        require_z(n, "ray");
        return set_value(EPSet::ray(small_int(n, n.items[0]), small_int(n, n.items[1]), n.name == "+"));
      case Kind::Named: return set_value(named(n));
      case Kind::Number: {
        Value v;
        v.type = Value::Type::Number;
        v.number = number_arg(n);
        return v;
      }
      case Kind::Not: return set_value(complement(eval_set(*n.children[0])));
      case Kind::Union:
        return set_value(set_union(eval_set(*n.children[0]), eval_set(*n.children[1])));
      case Kind::Intersect:
        return set_value(set_intersect(eval_set(*n.children[0]), eval_set(*n.children[1])));
      case Kind::Shift:
        return set_value(translate(eval_set(*n.children[0]), element(n, n.items[0])));
      case Kind::Call: return call(n);
    }
    throw EvalError(n.span, "unknown node");
  }

  SymbolicSet named(const Node& n) const {
    if (n.name == "N") {
      require_z(n, "N");
      return EPSet::ray(0, 1, true);
    }
    if (n.name.size() == 4 && n.name.rfind("pow", 0) == 0 && n.name[3] >= '2' && n.name[3] <= '9') {
      require_z(n, "pow");
      return powers_stream(static_cast<unsigned>(n.name[3] - '0'));
    }
    throw EvalError(n.span, "unknown set name '" + n.name + "'");
  }

  Value call(const Node& n) const {
    const auto& a = n.children;
    if (n.name == "delta" || n.name == "delta2") {
      arity(n, 1);
      DeltaResult r = delta(eval_set(*a[0]));
      if (n.name == "delta2") r = delta(r.value);
      Value v = set_value(r.value);
      if (r.exactness != Exactness::Exact) v.text = exactness_name(r.exactness);
      return v;
    }
    if (n.name == "inv") {
      arity(n, 1);
      return set_value(invert(eval_set(*a[0])));
    }
    if (n.name == "diff") {
      arity(n, 1);
      return set_value(diffset(eval_set(*a[0])));
    }
    if (n.name == "prod") {
      arity(n, 2);
      return set_value(product(eval_set(*a[0]), eval_set(*a[1])));
    }
    if (n.name == "sym") {
      arity(n, 2);
      SymbolicSet s = eval_set(*a[0]);
      if (!is_finite(s).finite || !is_finite(s).exact)
        throw EvalError(a[0]->span, "sym needs a finite set");
      return set_value(sym_set(s, number_arg(*a[1])));
    }
    if (n.name == "traj") {
      arity(n, 2);
      Rational k = number_arg(*a[1]);
      if (k.denominator() != 1 || k < Rational(0) || k > Rational(64))
        throw EvalError(a[1]->span, "traj length must be an integer in 0..64");
      Value v;
      v.type = Value::Type::Report;
      v.report_kind = "traj";
      try {
        v.trajectory = delta_trajectory(eval_set(*a[0]), static_cast<std::size_t>(k.numerator()));
      } catch (const TrajectoryTruncated& t) {
        v.trajectory = t.prefix();
        v.trajectory_stop = t.what();
      }
      for (std::size_t i = 0; i < v.trajectory.size(); ++i) {
        const DeltaResult& r = v.trajectory[i];
        v.text += (i ? "\n" : "") + std::string("step ") + std::to_string(i) + " [" +
                  exactness_name(r.exactness) + "]: " + format_set(r.value, opts_.radius);
      }
      if (v.trajectory_stop) v.text += "\nstopped: " + *v.trajectory_stop;
      return v;
    }
    if (n.name == "classify") {
      arity(n, 1);
      Value v;
      v.type = Value::Type::Report;
      v.report_kind = "classify";
      v.classification = classify_all(eval_set(*a[0]));
      v.text = classification_text(*v.classification);
      return v;
    }
    throw EvalError(n.span, "unknown function '" + n.name + "'");
  }

 public:
  static std::string report_line(const ClassificationReport& r) {
    std::string s = r.predicate + ": " + verdict_name(r.verdict);
    if (r.verdict == Verdict::WindowEvidence)
      s += std::string(" (") + (r.so_far ? "holds" : "fails") + " in ball(" + std::to_string(r.radius) + "))";
    if (!r.rule.empty()) s += " [" + r.rule + "]";
    if (r.witness) {
      s += " witness " + r.witness->kind + " " + detail::finite_literal(r.witness->elements);
    }
    return s;
  }

  static std::string classification_text(const FullClassification& c) {
    std::vector<std::string> lines{report_line(c.thin.thin), report_line(c.thin.almost_thin)};
    if (c.thin.k_bound)
      lines.push_back("k-thin bound: " + std::to_string(*c.thin.k_bound) +
                      (c.thin.k_exact ? " (exact)" : " (window)"));
    lines.push_back(report_line(c.sparse));
    for (const ClassificationReport* r : {&c.large, &c.thick, &c.small, &c.delta_large})
      lines.push_back(report_line(*r));
    if (c.prethick1) lines.push_back(report_line(*c.prethick1));
    if (c.prethick2) lines.push_back(report_line(*c.prethick2));
    if (c.psmall) {
      lines.push_back(report_line(c.psmall->p_small));
      lines.push_back(report_line(c.psmall->almost_p_small));
      lines.push_back(report_line(c.psmall->weakly_p_small));
      if (c.psmall->m_star) lines.push_back("m*: " + std::to_string(*c.psmall->m_star));
    }
    std::string s;
    for (std::size_t i = 0; i < lines.size(); ++i) s += (i ? "\n" : "") + lines[i];
    return s;
  }

 private:
  EvalOptions opts_;
};

}  // namespace deltaset::dsl
