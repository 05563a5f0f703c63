#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "deltaset/partition.hpp"

using namespace deltaset;

namespace {

SymbolicSet ap(std::int64_t a, std::int64_t d) { return SymbolicSet(EPSet::ap(a, d)); }
SymbolicSet nat() { return SymbolicSet(EPSet::ray(0, 1, true)); }

// Residue model: for A a union of classes mod m, g is in Δ(A) iff some
// class a of A has a + g in A as well.
std::vector<bool> brute_delta(int m, const std::vector<int>& labels, int cell) {
  std::vector<bool> d(static_cast<std::size_t>(m), false);
  for (int g = 0; g < m; ++g)
    for (int a = 0; a < m; ++a)
      if (labels[a] == cell && labels[(a + g) % m] == cell) d[g] = true;
  return d;
}

std::size_t brute_min_cover(const std::vector<bool>& d) {
  const int m = static_cast<int>(d.size());
  std::size_t best = m + 1;
  for (unsigned f = 1; f < (1u << m); ++f) {
    std::vector<bool> hit(m, false);
    for (int s = 0; s < m; ++s)
      if ((f >> s) & 1)
        for (int r = 0; r < m; ++r)
          if (d[r]) hit[(r + s) % m] = true;
    if (std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }))
      best = std::min<std::size_t>(best, __builtin_popcount(f));
  }
  return best;
}

}  // namespace

TEST(Partition, Examples) {
  CoverReport two = delta_cover({{ap(0, 2), ap(1, 2)}});
  EXPECT_EQ(two.F.size(), 2u);
  EXPECT_TRUE(two.verified);
  CoverReport three = delta_cover({{ap(0, 3), ap(1, 3), ap(2, 3)}});
  EXPECT_EQ(three.F.size(), 3u);
  EXPECT_TRUE(three.verified);
  CoverReport one = delta_cover({{SymbolicSet(EPSet::integers())}});
  EXPECT_EQ(one.F, std::vector<std::int64_t>{0});
}

TEST(Partition, FiniteCellsAreSkipped) {
  SymbolicSet f(EPSet::finite({0, 5}));
  SymbolicSet rest = complement(f);
  CoverReport r = delta_cover({{f, rest}});
  EXPECT_TRUE(r.cells[0].finite);
  EXPECT_FALSE(r.cells[0].F.has_value());
  EXPECT_EQ(r.chosen, 1u);
  EXPECT_EQ(r.F.size(), 1u);
  EXPECT_TRUE(r.verified);
}

TEST(Partition, ValidationNamesElement) {
  try {
    validate_partition({{ap(0, 2), ap(0, 3), ap(1, 6), ap(5, 6)}});
    FAIL() << "overlap accepted";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("two cells"), std::string::npos);
  }
  try {
    validate_partition({{ap(0, 3), ap(1, 3)}});
    FAIL() << "gap accepted";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("no cell"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("-1 lies"), std::string::npos);
  }
  EXPECT_THROW(validate_partition({}), DomainError);
}

TEST(Partition, EnumerationCounts) {
  // Stirling numbers of the second kind.
  EXPECT_EQ(residue_partitions(4, 2).size(), 7u);
  EXPECT_EQ(residue_partitions(5, 3).size(), 25u);
  EXPECT_EQ(residue_partitions(8, 4).size(), 1701u);
  EXPECT_TRUE(residue_partitions(3, 4).empty());
}

TEST(Partition, MinimalCoverMatchesBruteForceAndBound) {
  for (int m = 1; m <= 7; ++m)
    for (int n = 1; n <= std::min(m, 4); ++n)
      for (const auto& lab : residue_partitions(m, n)) {
        CoverReport r = delta_cover(partition_from_labels(m, lab));
        ASSERT_TRUE(r.verified);
        std::size_t best = m + 1;
        for (int c = 0; c < n; ++c) best = std::min(best, brute_min_cover(brute_delta(m, lab, c)));
        ASSERT_EQ(r.F.size(), best) << "m=" << m;
        EXPECT_TRUE(r.within_n());
        EXPECT_TRUE(r.within_tower());
      }
}

TEST(Partition, NoSmallerCoverExists) {
  for (const auto& lab : residue_partitions(6, 3)) {
    CoverReport r = delta_cover(partition_from_labels(6, lab));
    const EPSet& d = r.cells[r.chosen].delta.ep();
    const std::int64_t L = d.period();
    std::size_t k = r.F.size() - 1;
    if (k == 0) continue;
    std::vector<int> sel(static_cast<std::size_t>(L), 0);
    std::fill(sel.begin(), sel.begin() + static_cast<std::ptrdiff_t>(k), 1);
    do {
      std::vector<std::int64_t> F;
      for (std::int64_t i = 0; i < L; ++i)
        if (sel[i]) F.push_back(i);
      EXPECT_FALSE(covers_exactly(d, F));
    } while (std::prev_permutation(sel.begin(), sel.end()));
  }
}

TEST(Partition, CellOrderDoesNotMatter) {
  std::mt19937_64 rng(11);
  for (const auto& lab : residue_partitions(6, 3)) {
    PartitionSpec s = partition_from_labels(6, lab);
    std::size_t base = delta_cover(s).F.size();
    std::shuffle(s.cells.begin(), s.cells.end(), rng);
    EXPECT_EQ(delta_cover(s).F.size(), base);
  }
}

TEST(Partition, Bounds) {
  EXPECT_EQ(tower_bound(1), Integer(1));
  EXPECT_EQ(tower_bound(2), Integer(2));
  EXPECT_EQ(tower_bound(3), Integer(8));
  EXPECT_EQ(tower_bound(4), Integer(128));
  CoverReport r = delta_cover({{ap(0, 2), ap(1, 2)}});
  EXPECT_EQ(r.bound_2n, Integer(4));
}

TEST(Partition, CsvRow) {
  auto rows = bound_survey(3, 2, 2);
  ASSERT_EQ(rows.size(), 1u + 3u);
  std::string s = bound_csv_row(rows.front());
  EXPECT_EQ(s, "2,2,01,2;2,2,2,4,2,yes");
}

TEST(TwoPartition, EvenNumbers) {
  TwoPartitionReport r = two_partition_check(ap(0, 2));
  EXPECT_FALSE(r.cond_iii);
  EXPECT_FALSE(r.cond_i);
  ASSERT_TRUE(r.witness_iii.has_value());
  EXPECT_EQ(std::abs(*r.witness_iii), 1);
  EXPECT_TRUE(exact_equal(r.delta_a, ap(0, 2)));
  EXPECT_TRUE(exact_equal(r.delta_b, ap(0, 2)));
  EXPECT_TRUE(r.cond_iii_literal);
}

TEST(TwoPartition, Naturals) {
  TwoPartitionReport r = two_partition_check(nat());
  EXPECT_TRUE(r.cond_iii);
  EXPECT_TRUE(r.cond_i);
  EXPECT_TRUE(r.delta_a.ep().is_integers());
}

TEST(TwoPartition, FiniteSet) {
  TwoPartitionReport r = two_partition_check(SymbolicSet(EPSet::finite({0, 1, 2})));
  EXPECT_TRUE(r.delta_a.ep().is_empty());
  EXPECT_TRUE(r.delta_b.ep().is_integers());
  EXPECT_TRUE(r.cond_iii);
}

TEST(Meager, OneShift) {
  MeagerReport r = meager_search(1);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.period, 2);
  EXPECT_EQ(r.residues, std::vector<std::int64_t>{0});
  EXPECT_EQ(r.first.verdict, Verdict::False);
  EXPECT_EQ(r.second.verdict, Verdict::False);
}

TEST(Meager, TwoShifts) {
  MeagerReport r = meager_search(2);
  ASSERT_TRUE(r.found);
  EXPECT_GE(r.period, 6);
  EXPECT_EQ(r.first.verdict, Verdict::False);
  EXPECT_EQ(r.second.verdict, Verdict::False);
  validate_partition(r.partition);
}

TEST(Meager, NaturalsAreNotMeager) {
  EXPECT_EQ(is_prethick(nat(), 1).verdict, Verdict::True);
  EXPECT_THROW(meager_search(0), DomainError);
  EXPECT_THROW(meager_search(1, 3), DomainError);
}
