#pragma once

// Exact and certified decision procedures for the subset vocabulary: thin,
// sparse, large, thick, prethick, small, the P-small family and Δ-large.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "deltaset/cover.hpp"
#include "deltaset/derivation.hpp"

namespace deltaset {

enum class Verdict { True, False, CertifiedTrue, CertifiedFalse, WindowEvidence };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::True: return "True";
    case Verdict::False: return "False";
    case Verdict::CertifiedTrue: return "CertifiedTrue";
    case Verdict::CertifiedFalse: return "CertifiedFalse";
    default: return "WindowEvidence";
  }
}

struct Witness {
  std::string kind;               // e.g. "cover", "progression", "translates"
  std::vector<Element> elements;  // the finite data itself
  std::string note;
};

struct ClassificationReport {
  std::string predicate;
  Verdict verdict = Verdict::WindowEvidence;
  std::string rule;
  std::uint64_t radius = 0;   // WindowEvidence only
  bool so_far = false;        // WindowEvidence only: the verdict seen so far
  std::optional<Witness> witness;

  /// True, CertifiedTrue, or window evidence in favour.
  bool holds() const {
    return verdict == Verdict::True || verdict == Verdict::CertifiedTrue ||
           (verdict == Verdict::WindowEvidence && so_far);
  }
  bool exact() const { return verdict == Verdict::True || verdict == Verdict::False; }
};

namespace classify_detail {

inline ClassificationReport make(std::string pred, Verdict v, std::string rule) {
  ClassificationReport r;
  r.predicate = std::move(pred);
  r.verdict = v;
  r.rule = std::move(rule);
  return r;
}

inline ClassificationReport evidence(std::string pred, std::uint64_t R, bool so_far,
                                     std::string rule) {
  ClassificationReport r = make(std::move(pred), Verdict::WindowEvidence, std::move(rule));
  r.radius = R;
  r.so_far = so_far;
  return r;
}

inline std::vector<Element> ints(const std::vector<std::int64_t>& xs) {
  std::vector<Element> out;
  for (std::int64_t x : xs) out.push_back(Element::integer(x));
  return out;
}

// Exact finite-set test (any representation that is provably finite).
inline bool exactly_finite(const SymbolicSet& a) {
  FinitenessVerdict f = is_finite(a);
  return f.exact && f.finite;
}

inline bool exactly_infinite_ep(const SymbolicSet& a) { return a.is_ep() && !a.ep().is_finite(); }

inline bool gap_certified(const SymbolicSet& a) {
  return a.is_stream() && a.stream().has_certificate(kGapDivergence);
}

// Elements of a provably finite set.
inline std::vector<Element> finite_elements(const SymbolicSet& a) {
  if (a.is_ep()) return to_elements(a.ep().block());
  if (a.is_finite_rep()) return a.finite().elements();
  return a.stream().window(default_probe_radius(a.group()));
}

// max over g != e of |gA ∩ A| for a finite A, by pair enumeration.
inline std::size_t max_overlap(const std::vector<Element>& xs) {
  std::unordered_map<Element, std::size_t> counts;
  std::size_t best = 0;
  for (const Element& x : xs) {
    Element xi = inv(x);
    for (const Element& y : xs) {
      Element g = mul(y, xi);
      if (!g.is_identity()) best = std::max(best, ++counts[g]);
    }
  }
  return best;
}

inline std::vector<std::int64_t> first_multiples(std::int64_t p, int n) {
  std::vector<std::int64_t> out;
  for (int i = 0; i < n; ++i) out.push_back(p * i);
  return out;
}

inline void require_z(const SymbolicSet& a, const char* what) {
  if (a.group() != GroupId::IntegersZ)
    throw DomainError(std::string(what) + " is decided over Z only");
}

}  // namespace classify_detail

// Thin family -------------------------------------------------------------------

struct ThinnessReport {
  ClassificationReport thin;
  ClassificationReport almost_thin;
  /// Least k with A k-thin, when known: exact for finite sets, a window
  /// observation for certified streams.
  std::optional<std::size_t> k_bound;
  bool k_exact = false;
};

inline ThinnessReport thinness(const SymbolicSet& a) {
  using namespace classify_detail;
  ThinnessReport out;
  if (exactly_finite(a)) {
    out.thin = make("thin", Verdict::True, "finite set");
    out.almost_thin = make("almost_thin", Verdict::True, "finite set");
    out.k_bound = max_overlap(finite_elements(a));
    out.k_exact = true;
    return out;
  }
  if (exactly_infinite_ep(a)) {
    std::int64_t p = a.ep().period();
    Witness w{"progression", ints(first_multiples(p, 4)),
              "Δ(A) contains the whole class " + std::to_string(p) + "Z"};
    out.thin = make("thin", Verdict::False, "infinite periodic set: pZ ⊆ Δ(A)");
    out.thin.witness = w;
    out.almost_thin = make("almost_thin", Verdict::False, "infinite periodic set: pZ ⊆ Δ(A)");
    out.almost_thin.witness = w;
    return out;
  }
  if (gap_certified(a)) {
    out.thin = make("thin", Verdict::CertifiedTrue, kGapDivergence);
    out.almost_thin = make("almost_thin", Verdict::CertifiedTrue, kGapDivergence);
    if (a.group() == GroupId::IntegersZ) {
      WitnessCounts c(a, 4096);
      std::size_t best = 0;
      for (const Element& g : ball(GroupId::IntegersZ, 4096))
        if (!g.is_identity()) best = std::max(best, c.count(g));
      out.k_bound = best;
    }
    return out;
  }
  DeltaResult d = delta(a);
  const auto& core = d.report->stable_core;
  std::uint64_t R = d.report->schedule.radii.back();
  bool thin_so_far = core.size() <= 1;
  out.thin = evidence("thin", R, thin_so_far, "stable core of Δ within ball(" +
                                                 std::to_string(d.report->core_radius) + ")");
  out.almost_thin = evidence("almost_thin", R, thin_so_far, out.thin.rule);
  return out;
}

// Sparse ------------------------------------------------------------------------

inline ClassificationReport is_k_sparse(const SymbolicSet& a, std::size_t k) {
  using namespace classify_detail;
  if (k < 2) throw DomainError("k-sparse is defined here for k >= 2");
  std::string name = std::to_string(k) + "-sparse";
  if (exactly_finite(a)) return make(name, Verdict::True, "finite set: every intersection is finite");
  if (exactly_infinite_ep(a)) {
    std::int64_t p = a.ep().period();
    ClassificationReport r = make(name, Verdict::False,
                                  "infinite periodic set: X = pN has X - X ⊆ pZ ⊆ Δ(A)");
    r.witness = Witness{"progression", ints(first_multiples(p, 4)),
                        "X = " + std::to_string(p) + "N"};
    return r;
  }
  if (gap_certified(a))
    return make(name, Verdict::CertifiedTrue,
                std::string(kGapDivergence) + ": Δ(A) = {e} contains no X⁻¹X for infinite X");
  // Window search for a progression X = dN with X - X inside the Δ core.
  DeltaResult dres = delta(a);
  const auto& core = dres.report->stable_core;
  auto r_core = static_cast<std::int64_t>(dres.report->core_radius);
  ClassificationReport r = evidence(name, dres.report->schedule.radii.back(), true,
                                    "search for X = dN with X - X ⊆ Δ core");
  if (a.group() == GroupId::IntegersZ) {
    for (std::int64_t d = 1; d <= r_core; ++d) {
      bool all = true;
      for (std::int64_t m = d; m <= r_core && all; m += d)
        all = std::binary_search(core.begin(), core.end(), Element::integer(m), CanonicalLess{});
      if (all) {
        r.so_far = false;
        r.witness = Witness{"progression", ints(first_multiples(d, 4)),
                            "X = " + std::to_string(d) + "N inside the window"};
        break;
      }
    }
  }
  return r;
}

/// Unbounded sparseness: the least k <= 4 that is found, else window
/// evidence. The exact paths already settle k = 2 (True) or every k (False).
inline ClassificationReport sparse_kind(const SymbolicSet& a) {
  ClassificationReport r = is_k_sparse(a, 2);
  r.predicate = "sparse";
  if (r.verdict == Verdict::True || r.verdict == Verdict::CertifiedTrue)
    r.rule = "2-sparse; " + r.rule;
  else if (r.verdict == Verdict::False)
    r.rule = "not k-sparse for any k; " + r.rule;
  return r;
}

// Large, thick, prethick -----------------------------------------------------------

namespace classify_detail {

// Longest distance between consecutive members, valid for an EP set with both
// tails nonempty: the window covers the block and a full period beyond it.
inline std::int64_t ep_max_gap(const EPSet& a) {
  std::int64_t R = a.cutoff() + 2 * a.period();
  std::vector<std::int64_t> w = a.window(R);
  std::int64_t best = 1;
  for (std::size_t i = 1; i < w.size(); ++i) best = std::max(best, w[i] - w[i - 1]);
  return best;
}

inline std::vector<std::int64_t> iota_vec(std::int64_t n) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace classify_detail

inline ClassificationReport is_large(const SymbolicSet& a) {
  using namespace classify_detail;
  if (exactly_finite(a)) return make("large", Verdict::False, "finite set in an infinite group");
  if (a.is_ep()) {
    const EPSet& e = a.ep();
    if (e.pos_empty() || e.neg_empty())
      return make("large", Verdict::False, "one tail is empty: unbounded gap");
    ClassificationReport r = make("large", Verdict::True, "both tails nonempty: bounded gaps");
    r.witness = Witness{"cover", ints(iota_vec(ep_max_gap(e))), "G = F + A with F = {0..maxgap-1}"};
    return r;
  }
  require_z(a, "large (window evidence)");
  ProxyReport p = brute_classify(a, 1024);
  return evidence("large", 1024, p.large_proxy, "max gap " + std::to_string(p.max_gap));
}

inline ClassificationReport is_thick(const SymbolicSet& a) {
  using namespace classify_detail;
  if (exactly_finite(a)) return make("thick", Verdict::False, "finite set");
  if (a.is_ep()) {
    const EPSet& e = a.ep();
    bool pos_full = std::all_of(e.pos_pattern().begin(), e.pos_pattern().end(), [](bool b) { return b; });
    bool neg_full = std::all_of(e.neg_pattern().begin(), e.neg_pattern().end(), [](bool b) { return b; });
    if (pos_full || neg_full)
      return make("thick", Verdict::True,
                  std::string(pos_full ? "positive" : "negative") + " tail is full: complement not large");
    return make("thick", Verdict::False, "no full tail: runs are bounded");
  }
  require_z(a, "thick (window evidence)");
  ProxyReport p = brute_classify(a, 1024);
  return evidence("thick", 1024, p.thick_proxy, "max run " + std::to_string(p.max_run));
}

inline ClassificationReport is_prethick(const SymbolicSet& a, std::size_t k) {
  using namespace classify_detail;
  if (k < 1) throw DomainError("k-prethick needs k >= 1");
  std::string name = std::to_string(k) + "-prethick";
  if (exactly_finite(a)) return make(name, Verdict::False, "finite set: F + A stays finite");
  if (a.is_ep()) {
    const EPSet& e = a.ep();
    // F + A is thick iff F + pattern covers Z/p on one tail.
    auto cp = min_residue_cover(e.pos_pattern(), k);
    auto cn = min_residue_cover(e.neg_pattern(), k);
    const std::optional<std::vector<std::int64_t>>* best = nullptr;
    if (cp) best = &cp;
    if (cn && (!best || cn->size() < (*best)->size())) best = &cn;
    if (!best)
      return make(name, Verdict::False, "no tail pattern is covered by " + std::to_string(k) + " shifts");
    ClassificationReport r = make(name, Verdict::True, "residue cover of a tail pattern");
    r.witness = Witness{"cover", ints(**best), best == &cp ? "positive tail" : "negative tail"};
    return r;
  }
  require_z(a, "prethick (window evidence)");
  ProxyReport p = brute_classify(a, 1024);
  return evidence(name, 1024, p.thick_proxy, "run of A itself (shifts not searched)");
}

/// Least number of shifts making a tail pattern full, or nullopt if a tail
/// is empty on both sides (finite set).
inline std::optional<std::size_t> prethick_index(const EPSet& e) {
  std::size_t cap = static_cast<std::size_t>(e.period());
  auto cp = min_residue_cover(e.pos_pattern(), cap);
  auto cn = min_residue_cover(e.neg_pattern(), cap);
  if (!cp && !cn) return std::nullopt;
  if (!cp) return cn->size();
  if (!cn) return cp->size();
  return std::min(cp->size(), cn->size());
}

inline ClassificationReport is_small(const SymbolicSet& a) {
  using namespace classify_detail;
  if (exactly_finite(a))
    return make("small", Verdict::True,
                "finite set: removing it from a large set leaves a large set");
  if (exactly_infinite_ep(a)) {
    ClassificationReport r = make("small", Verdict::False,
                                  "infinite periodic set contains a ray a + pN, so it is prethick");
    auto k = prethick_index(a.ep());
    const EPSet& e = a.ep();
    auto f = min_residue_cover(e.pos_empty() ? e.neg_pattern() : e.pos_pattern(), e.period());
    if (k && f) r.witness = Witness{"cover", ints(*f), "F + A is thick"};
    return r;
  }
  if (gap_certified(a))
    return make("small", Verdict::CertifiedTrue,
                std::string(kGapDivergence) + ": 2-sparse, and sparse sets are small");
  require_z(a, "small (window evidence)");
  ProxyReport p = brute_classify(a, 1024);
  return evidence("small", 1024, !p.thick_proxy, "no long run of A at R = 1024");
}

// P-small family ----------------------------------------------------------------

struct PSmallReport {
  ClassificationReport p_small;
  ClassificationReport almost_p_small;
  ClassificationReport weakly_p_small;
  /// Largest number of pairwise disjoint translates (when finite).
  std::optional<std::size_t> m_star;
  std::vector<Element> translates;  // a disjoint family of size m_star, or a
                                    // prefix of the P-small sequence
};

namespace classify_detail {

// Maximum clique by branch and bound with a greedy colouring bound.
class MaxClique {
 public:
  explicit MaxClique(std::vector<std::vector<std::uint64_t>> adj) : adj_(std::move(adj)) {}

  std::vector<std::size_t> solve() {
    std::vector<std::size_t> all(adj_.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::size_t> cur;
    expand(cur, all);
    return best_;
  }

 private:
  bool edge(std::size_t u, std::size_t v) const { return (adj_[u][v >> 6] >> (v & 63)) & 1; }

  void expand(std::vector<std::size_t>& cur, const std::vector<std::size_t>& cand) {
    // Greedy colouring gives an upper bound on the clique size in cand.
    std::vector<std::size_t> order;
    std::vector<std::size_t> colour;
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t v : cand) {
      std::size_t c = 0;
      for (; c < classes.size(); ++c) {
        bool ok = true;
        for (std::size_t u : classes[c])
          if (edge(u, v)) {
            ok = false;
            break;
          }
        if (ok) break;
      }
      if (c == classes.size()) classes.emplace_back();
      classes[c].push_back(v);
    }
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (std::size_t v : classes[c]) {
        order.push_back(v);
        colour.push_back(c + 1);
      }
    for (std::size_t i = order.size(); i-- > 0;) {
      if (cur.size() + colour[i] <= best_.size()) return;
      std::size_t v = order[i];
      cur.push_back(v);
      std::vector<std::size_t> next;
      for (std::size_t j = 0; j < i; ++j)
        if (edge(v, order[j])) next.push_back(order[j]);
      if (next.empty()) {
        if (cur.size() > best_.size()) best_ = cur;
      } else {
        expand(cur, next);
      }
      cur.pop_back();
    }
  }

  std::vector<std::vector<std::uint64_t>> adj_;
  std::vector<std::size_t> best_;
};

}  // namespace classify_detail

/// m*(A) for an infinite EP set: the largest family of pairwise disjoint
/// translates. Translates g_i + A are disjoint iff g_i - g_j ∉ D = A - A; with
/// min g_i = 0 the others are positive non-differences, and any gap between
/// consecutive g_i longer than N_D + P_D can be shortened by P_D without
/// changing which differences fall in D. Since D ⊇ pZ, at most p translates
/// are disjoint, so all g_i lie in [0, (p-1)(N_D + P_D)].
inline std::pair<std::size_t, std::vector<std::int64_t>> max_disjoint_translates(const EPSet& a) {
  if (a.is_finite()) throw DomainError("m* is unbounded for finite sets");
  EPSet D = ep_diffset(a);
  std::int64_t bound = (a.period() - 1) * (D.cutoff() + D.period());
  std::vector<std::int64_t> verts;
  for (std::int64_t v = 1; v <= bound; ++v)
    if (!D.contains(v)) verts.push_back(v);
  const std::size_t n = verts.size();
  std::vector<std::vector<std::uint64_t>> adj(n, std::vector<std::uint64_t>((n + 63) / 64, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!D.contains(verts[j] - verts[i])) {
        adj[i][j >> 6] |= std::uint64_t{1} << (j & 63);
        adj[j][i >> 6] |= std::uint64_t{1} << (i & 63);
      }
  std::vector<std::size_t> clique = classify_detail::MaxClique(std::move(adj)).solve();
  std::vector<std::int64_t> g{0};
  for (std::size_t i : clique) g.push_back(verts[i]);
  std::sort(g.begin(), g.end());
  return {g.size(), g};
}

inline PSmallReport p_small_kind(const SymbolicSet& a) {
  using namespace classify_detail;
  PSmallReport out;
  GroupId G = a.group();
  if (exactly_finite(a)) {
    std::vector<Element> xs = finite_elements(a);
    // g_n = n(2·diam + 1) in Z, a^(n(2L + 1)) in F2: far enough apart that
    // two translates can never share a point.
    std::vector<Element> seq;
    if (G == GroupId::IntegersZ) {
      Integer lo = 0, hi = 0;
      if (!xs.empty()) {
        lo = hi = xs.front().as_int();
        for (const Element& x : xs) {
          lo = std::min(lo, x.as_int());
          hi = std::max(hi, x.as_int());
        }
      }
      Integer step = 2 * (hi - lo) + 1;
      for (int n = 0; n < 6; ++n) seq.emplace_back(Integer(step * n));
      out.p_small = make("P-small", Verdict::True, "finite set: g_n = n(2·diam+1)");
      out.p_small.witness = Witness{"sequence", seq, "g_n = " + step.str() + "n"};
    } else {
      std::size_t L = 0;
      for (const Element& x : xs) L = std::max(L, x.letters().size());
      for (std::size_t n = 0; n < 4; ++n) seq.push_back(Element::word(std::string(n * (2 * L + 1), 'a')));
      out.p_small = make("P-small", Verdict::True, "finite set: g_n = a^(n(2L+1))");
      out.p_small.witness = Witness{"sequence", seq, "L = max word length"};
    }
    out.almost_p_small = make("almost_P-small", Verdict::True, "P-small");
    out.weakly_p_small = make("weakly_P-small", Verdict::True, "P-small");
    out.translates = seq;
    return out;
  }
  if (exactly_infinite_ep(a)) {
    std::int64_t p = a.ep().period();
    std::string why = "AA⁻¹ ⊇ " + std::to_string(p) +
                      "Z and two of any p+1 translates agree mod p, sharing a tail";
    out.p_small = make("P-small", Verdict::False, why);
    out.almost_p_small = make("almost_P-small", Verdict::False, why);
    auto [m, g] = max_disjoint_translates(a.ep());
    out.m_star = m;
    out.translates = ints(g);
    out.weakly_p_small = make("weakly_P-small", Verdict::False,
                              "at most m* = " + std::to_string(m) + " disjoint translates");
    out.weakly_p_small.witness = Witness{"translates", out.translates, "maximum disjoint family"};
    return out;
  }
  if (gap_certified(a)) {
    out.almost_p_small = make("almost_P-small", Verdict::CertifiedTrue,
                              std::string(kGapDivergence) + ": Δ(A) = {e}, any infinite X works");
    ProxyReport pr = brute_classify(a, 1024);
    out.p_small = evidence("P-small", 1024, pr.greedy_disjoint >= 16,
                           "greedy disjoint translates: " + std::to_string(pr.greedy_disjoint));
    out.weakly_p_small = evidence("weakly_P-small", 1024, pr.greedy_disjoint >= 16, out.p_small.rule);
    return out;
  }
  require_z(a, "P-small (window evidence)");
  ProxyReport pr = brute_classify(a, 1024);
  std::string rule = "greedy disjoint translates: " + std::to_string(pr.greedy_disjoint);
  out.p_small = evidence("P-small", 1024, pr.greedy_disjoint >= 16, rule);
  out.almost_p_small = evidence("almost_P-small", 1024, pr.greedy_disjoint >= 16, rule);
  out.weakly_p_small = evidence("weakly_P-small", 1024, pr.greedy_disjoint >= 16, rule);
  return out;
}

// Δ-large -------------------------------------------------------------------------

inline ClassificationReport is_delta_large(const SymbolicSet& a) {
  using namespace classify_detail;
  DeltaResult d = delta(a);
  if (d.exactness == Exactness::Windowed) {
    require_z(a, "Δ-large (window evidence)");
    ProxyReport p = brute_classify(d.value, 256);
    return evidence("Δ-large", 256, p.large_proxy, "max gap of the windowed Δ");
  }
  ClassificationReport L = is_large(d.value);
  bool certified = d.exactness == Exactness::Certified;
  ClassificationReport r = make(
      "Δ-large", L.holds() ? (certified ? Verdict::CertifiedTrue : Verdict::True)
                           : (certified ? Verdict::CertifiedFalse : Verdict::False),
      std::string(exactness_name(d.exactness)) + " Δ (" + d.rule + "), then " + L.rule);
  if (L.holds() && d.value.is_ep()) {
    // Least F with F + Δ(A) = Z; Δ(A) is a union of classes mod its period.
    const EPSet& D = d.value.ep();
    auto f = min_residue_cover(D.pos_pattern(), static_cast<std::size_t>(D.period()));
    if (f) r.witness = Witness{"cover", ints(*f), "G = F + Δ(A)"};
  }
  return r;
}

/// The cover F of a large set also covers with Δ(A) in place of A.
inline bool large_cover_transfers(const EPSet& a, const std::vector<std::int64_t>& F) {
  EPSet D = detail::ep_delta_joint(a, a);
  EPSet FD = ep_sumset(EPSet::finite(F), D);
  return FD.is_integers();
}

// Window verification of covering candidates ------------------------------------------

enum class CoverMode { XXinv, XXinvUnionXinvX };

inline ClassificationReport verify_cover_window(const SymbolicSet& x, CoverMode mode,
                                                std::uint64_t r) {
  using namespace classify_detail;
  if (r < 1) throw DomainError("verify_cover_window needs r >= 1");
  std::vector<Element> w = window(x, 2 * r);
  std::unordered_set<Element> hit;
  for (const Element& u : w)
    for (const Element& v : w) {
      Element d1 = mul(u, inv(v));
      if (d1.norm_le(r)) hit.insert(d1);
      if (mode == CoverMode::XXinvUnionXinvX) {
        Element d2 = mul(inv(u), v);
        if (d2.norm_le(r)) hit.insert(d2);
      }
    }
  std::string name = mode == CoverMode::XXinv ? "G = XX⁻¹" : "G = XX⁻¹ ∪ X⁻¹X";
  for (const Element& g : ball(x.group(), r))
    if (!hit.count(g)) {
      ClassificationReport rep = evidence(name, r, false, "first missing element " + g.str());
      rep.witness = Witness{"missing", {g}, "not a difference of window(X, 2r)"};
      return rep;
    }
  return evidence(name, r, true, "ball(" + std::to_string(r) + ") covered");
}

// Full report ---------------------------------------------------------------------------

struct FullClassification {
  ThinnessReport thin;
  ClassificationReport sparse;
  ClassificationReport large, thick, small, delta_large;
  std::optional<ClassificationReport> prethick1, prethick2;
  std::optional<PSmallReport> psmall;
};

inline FullClassification classify_all(const SymbolicSet& a) {
  FullClassification c;
  c.thin = thinness(a);
  c.sparse = sparse_kind(a);
  bool z = a.group() == GroupId::IntegersZ;
  bool exact_or_z = z || classify_detail::exactly_finite(a);
  if (exact_or_z) {
    c.large = is_large(a);
    c.thick = is_thick(a);
    c.small = is_small(a);
    c.delta_large = is_delta_large(a);
    c.prethick1 = is_prethick(a, 1);
    c.prethick2 = is_prethick(a, 2);
    c.psmall = p_small_kind(a);
  } else {
    auto na = [](const char* p) {
      return classify_detail::make(p, Verdict::WindowEvidence, "not decided for F2 streams");
    };
    c.large = na("large");
    c.thick = na("thick");
    c.small = na("small");
    c.delta_large = na("Δ-large");
  }
  return c;
}

}  // namespace deltaset
