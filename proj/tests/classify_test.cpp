#include <gtest/gtest.h>

#include <random>
#include <set>

#include "deltaset/classify.hpp"
#include "test_support.hpp"

using namespace deltaset;

namespace {

SymbolicSet fin(std::vector<std::int64_t> xs) { return SymbolicSet(EPSet::finite(xs)); }
SymbolicSet ap(std::int64_t a, std::int64_t d) { return SymbolicSet(EPSet::ap(a, d)); }
SymbolicSet nat() { return SymbolicSet(EPSet::ray(0, 1, true)); }
SymbolicSet pow2() { return SymbolicSet(powers_stream(2)); }

std::vector<std::int64_t> as_ints(const std::vector<Element>& xs) {
  std::vector<std::int64_t> out;
  for (const Element& x : xs) out.push_back(x.to_i64());
  return out;
}

// Longest gap between consecutive members in [-R, R], counting the edges.
std::int64_t window_gap(const EPSet& a, std::int64_t R) {
  std::int64_t prev = -R - 1, best = 0;
  for (std::int64_t x = -R; x <= R; ++x)
    if (a.contains(x)) {
      best = std::max(best, x - prev);
      prev = x;
    }
  return std::max(best, R + 1 - prev);
}

std::int64_t window_run(const EPSet& a, std::int64_t R, const std::vector<std::int64_t>& shifts) {
  std::int64_t run = 0, best = 0;
  for (std::int64_t x = -R; x <= R; ++x) {
    bool in = false;
    for (std::int64_t f : shifts) in = in || a.contains(x - f);
    run = in ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

}  // namespace

TEST(Classify, VerdictNames) {
  EXPECT_STREQ(verdict_name(Verdict::CertifiedFalse), "CertifiedFalse");
  EXPECT_STREQ(verdict_name(Verdict::WindowEvidence), "WindowEvidence");
}

TEST(Classify, ThinExamples) {
  ThinnessReport f = thinness(fin({0, 1, 4}));
  EXPECT_EQ(f.thin.verdict, Verdict::True);
  ASSERT_TRUE(f.k_bound);
  EXPECT_EQ(*f.k_bound, 1u);  // {0,1,4} is a Sidon set
  EXPECT_EQ(*thinness(fin({0, 1, 2, 3})).k_bound, 3u);

  ThinnessReport e = thinness(ap(0, 2));
  EXPECT_EQ(e.thin.verdict, Verdict::False);
  EXPECT_EQ(e.almost_thin.verdict, Verdict::False);

  ThinnessReport p = thinness(pow2());
  EXPECT_EQ(p.thin.verdict, Verdict::CertifiedTrue);
  EXPECT_EQ(p.almost_thin.verdict, Verdict::CertifiedTrue);
  ASSERT_TRUE(p.k_bound);
  EXPECT_LE(*p.k_bound, 2u);
}

TEST(Classify, SparseExamples) {
  SymbolicSet a = SymbolicSet(ep_union(EPSet::ap(0, 4), EPSet::ap(1, 4)));
  ClassificationReport r = is_k_sparse(a, 2);
  EXPECT_EQ(r.verdict, Verdict::False);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(as_ints(r.witness->elements), (std::vector<std::int64_t>{0, 4, 8, 12}));
  EXPECT_EQ(is_k_sparse(fin({0, 1, 4}), 2).verdict, Verdict::True);
  EXPECT_EQ(is_k_sparse(pow2(), 2).verdict, Verdict::CertifiedTrue);
  EXPECT_THROW(is_k_sparse(fin({0}), 1), DomainError);
  EXPECT_EQ(sparse_kind(pow2()).verdict, Verdict::CertifiedTrue);
}

TEST(Classify, LargeThickPrethickExamples) {
  ClassificationReport l = is_large(ap(0, 2));
  EXPECT_EQ(l.verdict, Verdict::True);
  ASSERT_TRUE(l.witness);
  EXPECT_EQ(as_ints(l.witness->elements), (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(is_large(nat()).verdict, Verdict::False);
  EXPECT_EQ(is_large(fin({0, 1, 4})).verdict, Verdict::False);
  EXPECT_EQ(is_thick(nat()).verdict, Verdict::True);
  EXPECT_EQ(is_thick(ap(0, 2)).verdict, Verdict::False);
  EXPECT_EQ(is_prethick(ap(0, 4), 2).verdict, Verdict::False);
  ClassificationReport p4 = is_prethick(ap(0, 4), 4);
  EXPECT_EQ(p4.verdict, Verdict::True);
  ASSERT_TRUE(p4.witness);
  EXPECT_EQ(as_ints(p4.witness->elements), (std::vector<std::int64_t>{0, 1, 2, 3}));
  EXPECT_EQ(is_prethick(fin({0, 1}), 3).verdict, Verdict::False);
}

TEST(Classify, SmallExamples) {
  EXPECT_EQ(is_small(fin({0, 1, 4})).verdict, Verdict::True);
  EXPECT_EQ(is_small(ap(0, 2)).verdict, Verdict::False);
  ClassificationReport r = is_small(SymbolicSet(EPSet::ray(0, 7, true)));
  EXPECT_EQ(r.verdict, Verdict::False);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->elements.size(), 7u);
  EXPECT_EQ(is_small(pow2()).verdict, Verdict::CertifiedTrue);
}

TEST(Classify, FiniteSetMissesALargePartOfLargeSets) {
  // Spot check: L \ {0,1,4} keeps bounded gaps for random large EP sets L.
  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 3) {
    EPSet L = testsupport::random_ep(rng);
    if (L.pos_empty() || L.neg_empty()) continue;
    EPSet rest = ep_minus(L, EPSet::finite({0, 1, 4}));
    EXPECT_LT(window_gap(rest, 1024), 200);
    ++checked;
  }
}

TEST(Classify, PSmallExamples) {
  PSmallReport e = p_small_kind(ap(0, 2));
  EXPECT_EQ(e.p_small.verdict, Verdict::False);
  EXPECT_EQ(e.weakly_p_small.verdict, Verdict::False);
  ASSERT_TRUE(e.m_star);
  EXPECT_EQ(*e.m_star, 2u);
  EXPECT_EQ(as_ints(e.translates), (std::vector<std::int64_t>{0, 1}));

  PSmallReport f = p_small_kind(fin({0, 1, 4}));
  EXPECT_EQ(f.p_small.verdict, Verdict::True);
  auto g = as_ints(f.translates);
  for (std::size_t n = 0; n < g.size(); ++n) EXPECT_EQ(g[n], 9 * static_cast<std::int64_t>(n));
  // Translates g_n + {0,1,4} are pairwise disjoint.
  std::set<std::int64_t> seen;
  for (std::int64_t t : g)
    for (std::int64_t x : {0, 1, 4}) EXPECT_TRUE(seen.insert(t + x).second);

  PSmallReport s = p_small_kind(pow2());
  EXPECT_EQ(s.almost_p_small.verdict, Verdict::CertifiedTrue);
}

TEST(Classify, MaxDisjointTranslatesAgreeWithBruteForce) {
  // Independent check: translates by residue are disjoint iff no shared
  // member on a window; any family found must be disjoint, and no family one
  // larger exists among small shifts.
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 25; ++trial) {
    EPSet a = testsupport::random_ep(rng, 6, 4);
    if (a.is_finite()) continue;
    auto [m, g] = max_disjoint_translates(a);
    ASSERT_EQ(g.size(), m);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i + 1; j < g.size(); ++j)
        for (std::int64_t x = -400; x <= 400; ++x)
          ASSERT_FALSE(a.contains(x - g[i]) && a.contains(x - g[j]));
    // Exhaustive search over shift sets in [0, 24) of size m + 1.
    std::vector<std::int64_t> good;
    for (std::int64_t v = 1; v < 24; ++v) {
      bool ok = true;
      for (std::int64_t x = -300; x <= 300 && ok; ++x) ok = !(a.contains(x) && a.contains(x - v));
      if (ok) good.push_back(v);
    }
    std::function<bool(std::vector<std::int64_t>&, std::size_t)> grow =
        [&](std::vector<std::int64_t>& fam, std::size_t from) {
          if (fam.size() == m + 1) return true;
          for (std::size_t i = from; i < good.size(); ++i) {
            bool ok = true;
            for (std::int64_t f : fam) ok = ok && std::binary_search(good.begin(), good.end(), good[i] - f);
            if (!ok) continue;
            fam.push_back(good[i]);
            if (grow(fam, i + 1)) return true;
            fam.pop_back();
          }
          return false;
        };
    std::vector<std::int64_t> fam{0};
    EXPECT_FALSE(grow(fam, 0)) << "trial " << trial;
  }
}

TEST(Classify, DeltaLargeExamples) {
  EXPECT_EQ(is_delta_large(ap(0, 2)).verdict, Verdict::True);
  EXPECT_EQ(is_delta_large(nat()).verdict, Verdict::True);
  EXPECT_EQ(is_delta_large(pow2()).verdict, Verdict::CertifiedFalse);
}

TEST(Classify, LargeSetWithInfiniteComplementOfDelta) {
  SymbolicSet a = ap(0, 2);
  EXPECT_EQ(is_large(a).verdict, Verdict::True);
  DeltaResult d = delta(a);
  ASSERT_EQ(d.exactness, Exactness::Exact);
  SymbolicSet rest = complement(d.value);
  EXPECT_FALSE(is_finite(rest).finite);
  EXPECT_TRUE(exact_equal(rest, ap(1, 2)));
}

TEST(Classify, CoverWindowExamples) {
  for (std::uint64_t r : {1u, 8u, 40u})
    EXPECT_TRUE(verify_cover_window(SymbolicSet(EPSet::integers()), CoverMode::XXinv, r).holds());
  ClassificationReport p = verify_cover_window(pow2(), CoverMode::XXinvUnionXinvX, 64);
  EXPECT_EQ(p.verdict, Verdict::WindowEvidence);
  EXPECT_FALSE(p.holds());
  ASSERT_TRUE(p.witness);
  // 2^i - 2^j never equals 5.
  EXPECT_EQ(p.witness->elements.front(), Element::integer(5));
}

TEST(Classify, ExactVerdictsAgreeWithProxies) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    EPSet e = testsupport::random_ep(rng);
    SymbolicSet a(e);
    bool large = is_large(a).holds();
    EXPECT_EQ(large, window_gap(e, 256) < 64 && window_gap(e, 1024) < 64) << trial;
    bool thick = is_thick(a).holds();
    EXPECT_EQ(thick, window_run(e, 1024, {0}) >= 256) << trial;
    for (std::size_t k : {1u, 2u, 3u}) {
      ClassificationReport p = is_prethick(a, k);
      if (p.holds()) {
        EXPECT_GE(window_run(e, 1024, as_ints(p.witness->elements)), 256) << trial;
      } else if (!e.is_finite()) {
        // No k shifts from one period make a long run.
        std::int64_t per = e.period();
        std::vector<std::int64_t> f(k, 0);
        std::function<void(std::size_t, std::int64_t)> all = [&](std::size_t i, std::int64_t lo) {
          if (i == k) {
            ASSERT_LT(window_run(e, 1024, f), 256) << trial;
            return;
          }
          for (std::int64_t s = lo; s < per; ++s) {
            f[i] = s;
            all(i + 1, s);
          }
        };
        if (per <= 12) all(0, 0);
      }
    }
  }
}

TEST(Classify, SparseWitnessDifferencesLieInDelta) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    SymbolicSet a(testsupport::random_ep(rng));
    ClassificationReport r = is_k_sparse(a, 2);
    if (r.verdict != Verdict::False) continue;
    std::int64_t p = r.witness->elements[1].to_i64();
    SymbolicSet d = delta(a).value;
    for (std::int64_t x = -(128 / p) * p; x <= 128; x += p) ASSERT_TRUE(member(d, Element::integer(x)));
  }
}

TEST(Classify, AlmostThinImpliesTwoSparse) {
  std::mt19937_64 rng(35);
  std::vector<SymbolicSet> corpus{pow2(), fin({0, 1, 4}), ap(0, 3)};
  for (int i = 0; i < 100; ++i) corpus.emplace_back(testsupport::random_ep(rng));
  for (const SymbolicSet& a : corpus) {
    if (thinness(a).almost_thin.holds()) {
      EXPECT_TRUE(is_k_sparse(a, 2).holds());
    }
  }
}

TEST(Classify, LargeCoverTransfersToDelta) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 200; ++trial) {
    EPSet e = testsupport::random_ep(rng);
    SymbolicSet a(e);
    ClassificationReport l = is_large(a);
    if (!l.holds()) continue;
    ClassificationReport d = is_delta_large(a);
    ASSERT_EQ(d.verdict, Verdict::True);
    ASSERT_TRUE(d.witness && l.witness);
    EXPECT_LE(d.witness->elements.size(), l.witness->elements.size());
    EXPECT_TRUE(large_cover_transfers(e, as_ints(l.witness->elements)));
  }
}

TEST(Classify, FullReportOnStreams) {
  FullClassification c = classify_all(pow2());
  EXPECT_EQ(c.thin.thin.verdict, Verdict::CertifiedTrue);
  EXPECT_EQ(c.small.verdict, Verdict::CertifiedTrue);
  EXPECT_EQ(c.delta_large.verdict, Verdict::CertifiedFalse);
}
