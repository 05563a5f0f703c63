#pragma once

// Finite partitions of Z into EP cells: covers G = F + Δ(A_i), the
// two-cell check, and a search for k-meager 2-partitions.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "deltaset/classify.hpp"
#include "deltaset/cover.hpp"
#include "deltaset/derivation.hpp"

namespace deltaset {

struct PartitionSpec {
  std::vector<SymbolicSet> cells;
  std::size_t n() const { return cells.size(); }
};

/// Union of the residue classes r + mZ, r in `residues`.
inline EPSet residue_union(std::int64_t m, const std::vector<std::int64_t>& residues) {
  if (m < 1) throw DomainError("modulus must be positive");
  EPSet out = EPSet::empty();
  for (std::int64_t r : residues) out = ep_union(out, EPSet::ap(mod_floor(r, m), m));
  return out;
}

/// Throws DomainError naming an element that is covered twice or not at all.
inline void validate_partition(const PartitionSpec& spec) {
  if (spec.cells.empty()) throw DomainError("a partition needs at least one cell");
  EPSet all = EPSet::empty();
  for (std::size_t i = 0; i < spec.cells.size(); ++i) {
    const SymbolicSet& c = spec.cells[i];
    if (c.group() != GroupId::IntegersZ || !c.is_ep())
      throw DomainError("partition cells must be eventually periodic subsets of Z");
    EPSet both = ep_intersect(all, c.ep());
    if (!both.is_empty()) {
      std::int64_t r = 1;
      while (both.window(r).empty()) r *= 2;
      throw DomainError("not a partition: " + std::to_string(both.window(r).front()) +
                        " lies in two cells (the second is cell " + std::to_string(i) + ")");
    }
    all = ep_union(all, c.ep());
  }
  EPSet missing = ep_complement(all);
  if (!missing.is_empty()) {
    std::int64_t r = 1;
    while (missing.window(r).empty()) r *= 2;
    throw DomainError("not a partition: " + std::to_string(missing.window(r).front()) +
                      " lies in no cell");
  }
}

/// 2^(2^(n-1) - 1).
inline Integer tower_bound(std::size_t n) {
  if (n == 0) return Integer(0);
  if (n > 24) throw DomainError("tower bound only evaluated for n <= 24");
  std::uint64_t e = (std::uint64_t{1} << (n - 1)) - 1;
  return Integer(1) << static_cast<unsigned>(e);
}

struct CellCover {
  std::size_t index = 0;
  bool finite = false;  // Δ = ∅, never covers
  SymbolicSet delta{EPSet::empty()};
  std::optional<std::vector<std::int64_t>> F;  // least cover, residues mod the period of Δ
};

struct CoverReport {
  std::size_t n = 0;
  std::size_t chosen = 0;          // cell with the least |F|
  std::vector<std::int64_t> F;
  std::vector<CellCover> cells;
  bool verified = false;           // F + Δ(A_chosen) = Z checked in EP algebra
  Integer bound_n, bound_2n, bound_tower;

  bool within_n() const { return Integer(F.size()) <= bound_n; }
  bool within_2n() const { return Integer(F.size()) <= bound_2n; }
  bool within_tower() const { return Integer(F.size()) <= bound_tower; }
};

/// Does F + D = Z, decided in EP algebra?
inline bool covers_exactly(const EPSet& d, const std::vector<std::int64_t>& F) {
  EPSet u = EPSet::empty();
  for (std::int64_t f : F) u = ep_union(u, ep_translate(d, f));
  return u.is_integers();
}

inline CoverReport delta_cover(const PartitionSpec& spec) {
  validate_partition(spec);
  CoverReport rep;
  rep.n = spec.n();
  rep.bound_n = Integer(rep.n);
  rep.bound_2n = Integer(1) << static_cast<unsigned>(rep.n);
  rep.bound_tower = tower_bound(rep.n);
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < spec.cells.size(); ++i) {
    CellCover cc;
    cc.index = i;
    const EPSet& a = spec.cells[i].ep();
    if (a.is_finite()) {
      cc.finite = true;
      cc.delta = SymbolicSet(EPSet::empty());
      rep.cells.push_back(cc);
      continue;
    }
    cc.delta = delta(spec.cells[i]).value;
    const EPSet& d = cc.delta.ep();
    if (d.pos_pattern() != d.neg_pattern())
      throw DomainError("Δ of an EP cell is expected to be a union of residue classes");
    cc.F = min_residue_cover(d.pos_pattern(), static_cast<std::size_t>(d.period()));
    if (cc.F && (!best || cc.F->size() < rep.cells[*best].F->size())) best = i;
    rep.cells.push_back(cc);
  }
  if (!best) throw DomainError("no cell has a nonempty Δ");
  rep.chosen = *best;
  rep.F = *rep.cells[*best].F;
  rep.verified = covers_exactly(rep.cells[*best].delta.ep(), rep.F);
  return rep;
}

/// Set partitions of Z/m into exactly n nonempty blocks, as restricted
/// growth strings (label of residue r, first occurrences in order).
inline std::vector<std::vector<int>> residue_partitions(int m, int n) {
  std::vector<std::vector<int>> out;
  if (m < 1 || n < 1 || n > m) return out;
  std::vector<int> lab(static_cast<std::size_t>(m), 0);
  auto rec = [&](auto&& self, int r, int used) -> void {
    if (r == m) {
      if (used == n) out.push_back(lab);
      return;
    }
    if (used + (m - r) < n) return;
    for (int c = 0; c <= std::min(used, n - 1); ++c) {
      lab[static_cast<std::size_t>(r)] = c;
      self(self, r + 1, std::max(used, c + 1));
    }
  };
  rec(rec, 0, 0);
  return out;
}

inline PartitionSpec partition_from_labels(int m, const std::vector<int>& labels) {
  int n = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<std::int64_t>> res(static_cast<std::size_t>(n));
  for (int r = 0; r < m; ++r) res[static_cast<std::size_t>(labels[static_cast<std::size_t>(r)])].push_back(r);
  PartitionSpec spec;
  for (const auto& rs : res) spec.cells.push_back(SymbolicSet(residue_union(m, rs)));
  return spec;
}

struct BoundRow {
  std::size_t n = 0;
  int m = 0;
  std::vector<int> labels;
  std::vector<std::int64_t> periods;  // period of each cell
  std::size_t f_size = 0;
  Integer bound_n, bound_2n, bound_tower;
  bool verified = false;
};

inline const char* bound_csv_header() { return "n,m,labels,periods,F_size,bound_n,bound_2n,bound_tower,within_n"; }

inline std::string bound_csv_row(const BoundRow& r) {
  std::ostringstream os;
  os << r.n << ',' << r.m << ',';
  for (int l : r.labels) os << l;
  os << ',';
  for (std::size_t i = 0; i < r.periods.size(); ++i) os << (i ? ";" : "") << r.periods[i];
  os << ',' << r.f_size << ',' << r.bound_n << ',' << r.bound_2n << ',' << r.bound_tower << ','
     << (Integer(r.f_size) <= r.bound_n ? "yes" : "no");
  return os.str();
}

/// Every partition of Z into unions of residue classes mod m, for
/// 1 <= m <= max_m and min_n <= n <= max_n cells.
inline std::vector<BoundRow> bound_survey(int max_m, int min_n, int max_n) {
  std::vector<BoundRow> rows;
  for (int m = 1; m <= max_m; ++m)
    for (int n = min_n; n <= max_n; ++n)
      for (const std::vector<int>& lab : residue_partitions(m, n)) {
        PartitionSpec spec = partition_from_labels(m, lab);
        CoverReport rep = delta_cover(spec);
        BoundRow row;
        row.n = static_cast<std::size_t>(n);
        row.m = m;
        row.labels = lab;
        for (const SymbolicSet& c : spec.cells) row.periods.push_back(c.ep().period());
        row.f_size = rep.F.size();
        row.bound_n = rep.bound_n;
        row.bound_2n = rep.bound_2n;
        row.bound_tower = rep.bound_tower;
        row.verified = rep.verified;
        rows.push_back(std::move(row));
      }
  return rows;
}

struct TwoPartitionReport {
  SymbolicSet a{EPSet::empty()}, b{EPSet::empty()};
  SymbolicSet delta_a{EPSet::empty()}, delta_b{EPSet::empty()};
  SymbolicSet diff_a{EPSet::empty()}, diff_b{EPSet::empty()};
  bool cond_i = false;          // Z = A - A or Z = B - B
  bool cond_iii = false;        // Z = Δ(A) or Z = Δ(B)
  bool cond_iii_literal = true;  // Z = Δ(A) or Z = Δ(Z); always true
  bool odd_order_only = false;   // every element of Z has odd order: false
  std::optional<std::int64_t> witness_i;    // missing from both A - A and B - B
  std::optional<std::int64_t> witness_iii;  // missing from both Δ(A) and Δ(B)
};

namespace partition_detail {

inline std::optional<std::int64_t> first_outside(const EPSet& x, const EPSet& y) {
  EPSet u = ep_complement(ep_union(x, y));
  if (u.is_empty()) return std::nullopt;
  for (Element g = Element::identity(GroupId::IntegersZ);; g = next_element(g))
    if (u.contains(g.to_i64())) return g.to_i64();
}

}  // namespace partition_detail

inline TwoPartitionReport two_partition_check(const SymbolicSet& a) {
  if (a.group() != GroupId::IntegersZ || !a.is_ep())
    throw DomainError("two_partition_check needs an eventually periodic subset of Z");
  TwoPartitionReport r;
  r.a = a;
  r.b = complement(a);
  r.delta_a = delta(r.a).value;
  r.delta_b = delta(r.b).value;
  r.diff_a = diffset(r.a);
  r.diff_b = diffset(r.b);
  const EPSet &da = r.delta_a.ep(), &db = r.delta_b.ep();
  r.cond_iii = da.is_integers() || db.is_integers();
  r.cond_i = r.diff_a.ep().is_integers() || r.diff_b.ep().is_integers();
  if (!r.cond_iii) r.witness_iii = partition_detail::first_outside(da, db);
  if (!r.cond_i) r.witness_i = partition_detail::first_outside(r.diff_a.ep(), r.diff_b.ep());
  return r;
}

struct MeagerReport {
  std::size_t k = 0;
  bool found = false;
  std::int64_t period = 0;
  std::vector<std::int64_t> residues;  // the first cell; the second is its complement
  PartitionSpec partition;
  ClassificationReport first, second;  // is_prethick(cell, k) for each cell
  std::size_t examined = 0;
};

/// First 2-partition of Z into periodic cells, by period then residue mask,
/// in which neither cell is k-prethick. A cell's tails are judged separately,
/// so mixed tail patterns never need a smaller period than this search.
inline MeagerReport meager_search(std::size_t k, std::size_t n_cells = 2, std::int64_t max_period = 12) {
  if (k < 1) throw DomainError("meager_search needs k >= 1");
  if (n_cells != 2) throw DomainError("meager_search covers 2-partitions only");
  if (max_period < 1 || max_period > 20) throw DomainError("meager_search period budget must be in 1..20");
  MeagerReport rep;
  rep.k = k;
  for (std::int64_t p = 2; p <= max_period; ++p) {
    const std::uint64_t full = (std::uint64_t{1} << p) - 1;
    // The cell holding residue 0 comes first; the other is its complement.
    for (std::uint64_t mask = 1; mask < full; mask += 2) {
      ++rep.examined;
      std::vector<bool> d(static_cast<std::size_t>(p)), c(static_cast<std::size_t>(p));
      std::vector<std::int64_t> res, other;
      for (std::int64_t r = 0; r < p; ++r) {
        bool in = (mask >> r) & 1;
        d[static_cast<std::size_t>(r)] = in;
        c[static_cast<std::size_t>(r)] = !in;
        (in ? res : other).push_back(r);
      }
      if (min_residue_cover(d, k) || min_residue_cover(c, k)) continue;
      rep.found = true;
      rep.period = p;
      rep.residues = res;
      rep.partition.cells = {SymbolicSet(residue_union(p, res)), SymbolicSet(residue_union(p, other))};
      rep.first = is_prethick(rep.partition.cells[0], k);
      rep.second = is_prethick(rep.partition.cells[1], k);
      return rep;
    }
  }
  return rep;
}

}  // namespace deltaset
