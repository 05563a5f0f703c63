#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "deltaset/construct.hpp"
#include "deltaset/oracle.hpp"
#include "test_support.hpp"

using namespace deltaset;

namespace {

Element z(std::int64_t v) { return Element::integer(v); }
Element w(const char* s) { return Element::word(s); }
SymbolicSet fin(std::vector<std::int64_t> xs) { return SymbolicSet(EPSet::finite(xs)); }

std::vector<Element> zs(std::vector<std::int64_t> xs) {
  std::vector<Element> out;
  for (auto x : xs) out.push_back(z(x));
  sort_canonical(out);
  return out;
}

std::vector<Element> in_ball(const std::vector<Element>& xs, std::int64_t r) {
  std::vector<Element> out;
  for (const Element& x : xs)
    if (x.norm_le(static_cast<std::uint64_t>(r))) out.push_back(x);
  return out;
}

std::set<std::int64_t> ints(const std::vector<Element>& xs) {
  std::set<std::int64_t> out;
  for (const Element& x : xs) out.insert(x.to_i64());
  return out;
}

// Stage at which each element first appears.
std::map<std::int64_t, std::size_t> stage_map(const ConstructionLog& log) {
  std::map<std::int64_t, std::size_t> m;
  for (const StageRecord& s : log.stages)
    for (const Element& u : s.added) m.emplace(u.to_i64(), s.n);
  return m;
}

// Pairs of X at difference g, over the whole materialized set.
std::size_t pair_count(const std::set<std::int64_t>& x, std::int64_t g) {
  std::size_t n = 0;
  for (auto u : x) n += x.count(u + g);
  return n;
}

std::vector<std::int64_t> random_symmetric_target_window(std::mt19937_64& rng, SymbolicSet& t) {
  t = SymbolicSet(testsupport::random_symmetric_raw(rng).build());
  std::vector<std::int64_t> in;
  for (std::int64_t g = -64; g <= 64; ++g)
    if (member(t, z(g))) in.push_back(g);
  return in;
}

}  // namespace

TEST(FreshElement, Examples) {
  EXPECT_EQ(fresh_element(z(1), FiniteSet(GroupId::IntegersZ, {z(5), z(-5)})), z(1));
  EXPECT_THROW(fresh_element(z(1), FiniteSet(GroupId::IntegersZ, {z(0)})), DomainError);
  EXPECT_EQ(fresh_element(w("a"), FiniteSet(GroupId::FreeF2, {w("bb"), w("BB")})), w("a"));
}

TEST(FreshElement, ProductsAvoidForbidden) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::int64_t a = static_cast<std::int64_t>(rng() % 21) - 10;
    std::vector<Element> f;
    for (int k = 0; k < 12; ++k) {
      std::int64_t v = static_cast<std::int64_t>(rng() % 81) - 40;
      if (v != 0 && v != a && v != -a) f.push_back(z(v));
    }
    FiniteSet forb(GroupId::IntegersZ, f);
    Element x = fresh_element(z(a), forb);
    std::int64_t xv = x.to_i64();
    std::int64_t four[4] = {xv, -xv, a + xv, -(a + xv)};
    for (auto u : four)
      for (auto v : four) EXPECT_FALSE(forb.contains(z(u + v)));
    // Nothing canonically earlier works.
    for (Element y = next_element(Element::identity(GroupId::IntegersZ)); y != x; y = next_element(y)) {
      std::int64_t yv = y.to_i64();
      std::int64_t g4[4] = {yv, -yv, a + yv, -(a + yv)};
      bool ok = true;
      for (auto u : g4)
        for (auto v : g4) ok = ok && !forb.contains(z(u + v));
      EXPECT_FALSE(ok);
    }
  }
}

TEST(FpWindow, Examples) {
  std::vector<Element> pow2;
  for (int i = 0; i < 10; ++i) pow2.push_back(z(std::int64_t{1} << i));
  std::vector<Element> want;
  for (int v = 1; v <= 15; ++v) want.push_back(z(v));
  sort_canonical(want);
  EXPECT_EQ(fp_window(pow2, 15).elements(), want);

  std::vector<Element> ab{w("a"), w("b")};
  std::vector<Element> f2{w("a"), w("b"), w("ab")};
  sort_canonical(f2);
  EXPECT_EQ(fp_window(ab, 2).elements(), f2);

  EXPECT_THROW(fp_window({z(3), z(3)}, 10), DomainError);
}

TEST(Inverse, Examples) {
  Construction c0 = inverse_construct(fin({0}), 30);
  EXPECT_EQ(delta_window(SymbolicSet(c0.set), 4096, 3), zs({0}));

  Construction c1 = inverse_construct(fin({-1, 0, 1}), 30);
  EXPECT_EQ(in_ball(delta_window(SymbolicSet(c1.set), 4096, 3), 64), zs({-1, 0, 1}));

  Construction c2 = inverse_construct(SymbolicSet(EPSet::ap(0, 2)), 30);
  std::vector<std::int64_t> even;
  for (std::int64_t g = -64; g <= 64; g += 2) even.push_back(g);
  EXPECT_EQ(in_ball(delta_window(SymbolicSet(c2.set), 4096, 3), 64), zs(even));
}

TEST(Inverse, RejectsBadTargets) {
  EXPECT_THROW(inverse_construct(fin({0, 1}), 5), DomainError);
  EXPECT_THROW(inverse_construct(fin({-1, 1}), 5), DomainError);
  EXPECT_THROW(inverse_construct(fin({0}), 0), DomainError);
}

TEST(Inverse, StageSoundnessBruteForce) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    SymbolicSet t = fin({0});
    random_symmetric_target_window(rng, t);
    Construction c = inverse_construct(t, 20);
    EXPECT_TRUE(verify_construction(c.log).ok);
    std::vector<std::vector<std::int64_t>> st;
    for (const StageRecord& s : c.log.stages) {
      std::vector<std::int64_t> v;
      for (const Element& u : s.added) v.push_back(u.to_i64());
      st.push_back(v);
    }
    for (std::size_t n = 0; n < st.size(); ++n) {
      auto r = static_cast<std::int64_t>(c.log.stages[n].forbidden_radius);
      for (std::size_t m = 0; m <= n; ++m)
        for (auto u : st[m])
          for (auto v : st[n]) {
            std::int64_t d = u - v;
            if (d == 0 || d > r || d < -r) continue;
            EXPECT_TRUE(member(t, z(d))) << "stage " << n << " difference " << d;
          }
    }
  }
}

TEST(Inverse, VerifierRejectsTamperedLog) {
  Construction c = inverse_construct(fin({-1, 0, 1}), 8);
  ConstructionLog bad = c.log;
  bad.stages[5].planted[2] = z(bad.stages[5].planted[2].to_i64() + 1);
  EXPECT_FALSE(verify_construction(bad).ok);

  ConstructionLog close = c.log;
  Element near = z(close.stages[3].added.front().to_i64() + 7);
  close.stages[4].added.push_back(near);
  sort_canonical(close.stages[4].added);
  EXPECT_FALSE(verify_construction(close).ok);
}

TEST(Inverse, WitnessSoundness) {
  SymbolicSet t = SymbolicSet(EPSet::ap(0, 3));
  Construction c = inverse_construct(t, 16);
  std::set<std::int64_t> x = ints(c.log.elements());
  const auto& st = c.log.stages;
  for (std::size_t i = 0; i < st.size(); ++i) {
    std::int64_t a = st[i].targets[i].to_i64();
    for (std::size_t j = i; j < st.size(); ++j) {
      EXPECT_EQ(st[j].targets[i].to_i64(), a);
      EXPECT_TRUE(x.count(st[j].chosen[i].to_i64()));
      EXPECT_TRUE(x.count(st[j].planted[i].to_i64()));
    }
    if (a != 0) {
      EXPECT_GE(pair_count(x, a), st.size() - i);
    }
  }
}

TEST(Inverse, BadPairsStayInEarlyStages) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 4; ++trial) {
    SymbolicSet t = fin({0});
    random_symmetric_target_window(rng, t);
    Construction c = inverse_construct(t, 20);
    auto stage_of = stage_map(c.log);
    for (const StageRecord& s : c.log.stages) {
      auto r = static_cast<std::int64_t>(s.forbidden_radius);
      for (std::int64_t g = 1; g <= r; ++g) {
        if (member(t, z(g))) continue;
        for (const auto& [u, su] : stage_of) {
          auto it = stage_of.find(u + g);
          if (it == stage_of.end()) continue;
          EXPECT_LT(std::max(su, it->second), s.n) << "g=" << g;
        }
      }
    }
  }
}

TEST(Inverse, Deterministic) {
  SymbolicSet t(EPSet::ap(0, 4));
  Construction a = inverse_construct(t, 12);
  Construction b = inverse_construct(t, 12);
  ASSERT_EQ(a.log.stages.size(), b.log.stages.size());
  for (std::size_t n = 0; n < a.log.stages.size(); ++n) {
    EXPECT_EQ(a.log.stages[n].chosen, b.log.stages[n].chosen);
    EXPECT_EQ(a.log.stages[n].planted, b.log.stages[n].planted);
    EXPECT_EQ(a.log.stages[n].added, b.log.stages[n].added);
  }
}

TEST(Inverse, FreeGroupTarget) {
  SymbolicSet t(FiniteSet(GroupId::FreeF2, {Element::identity(GroupId::FreeF2), w("a"), w("A")}));
  Construction c = inverse_construct(t, 8);
  EXPECT_TRUE(verify_construction(c.log).ok);
  std::vector<Element> x = c.log.elements();
  std::unordered_set<Element> xs(x.begin(), x.end());
  std::size_t a_pairs = 0;
  for (const Element& u : x) a_pairs += xs.count(mul(w("a"), u));
  EXPECT_GE(a_pairs, 8u);
}

TEST(Inverse, RestrictedSource) {
  ConstructOptions o;
  o.source = SymbolicSet(EPSet::ap(1, 2));
  Construction c = inverse_construct(fin({-2, 0, 2}), 8, o);
  EXPECT_TRUE(verify_construction(c.log).ok);
  for (const StageRecord& s : c.log.stages)
    for (const Element& x : s.chosen) EXPECT_NE(x.to_i64() % 2, 0);
}

TEST(Sparse, NoLateTripleWitness) {
  for (const SymbolicSet& t : {fin({0}), fin({-1, 0, 1}), SymbolicSet(EPSet::ap(0, 2))}) {
    Construction c = inverse_construct_sparse(t, 30);
    EXPECT_TRUE(verify_construction(c.log).ok);
    auto stage_of = stage_map(c.log);
    std::set<std::int64_t> win = ints(window(SymbolicSet(c.set), 2048));
    for (auto x : win)
      for (std::int64_t g1 = -64; g1 <= 64; ++g1)
        for (std::int64_t g2 = g1 + 1; g2 <= 64; ++g2) {
          if (g1 == 0 || g2 == 0 || !win.count(x + g1) || !win.count(x + g2)) continue;
          std::size_t late = std::max({stage_of[x], stage_of[x + g1], stage_of[x + g2]});
          EXPECT_LE(late, 3u) << x << " " << g1 << " " << g2;
        }
  }
}

TEST(Sparse, MeetAllTranslates) {
  ConstructOptions o;
  o.meet_all_translates = true;
  Construction c = inverse_construct(fin({-1, 0, 1}), 30, o);
  EXPECT_TRUE(verify_construction(c.log).ok);
  WitnessCounts wc(SymbolicSet(c.set), 2048);
  for (std::int64_t g = -32; g <= 32; ++g) EXPECT_GE(wc.count(z(g)), 1u) << g;
  EXPECT_EQ(in_ball(delta_window(SymbolicSet(c.set), 4096, 3), 64), zs({-1, 0, 1}));

  Construction plain = inverse_construct(fin({0}), 30);
  WitnessCounts pc(SymbolicSet(plain.set), 2048);
  bool some_missing = false;
  for (std::int64_t g = -32; g <= 32; ++g) some_missing = some_missing || pc.count(z(g)) == 0;
  EXPECT_TRUE(some_missing);
}

TEST(FpWitness, PowersOfTwo) {
  std::vector<Element> seq;
  for (int i = 0; i < 60; ++i) seq.push_back(z(std::int64_t{1} << i));
  Construction c = fp_delta_witness(seq, 30);
  EXPECT_TRUE(verify_construction(c.log).ok);
  std::vector<std::int64_t> all;
  for (std::int64_t g = -16; g <= 16; ++g) all.push_back(g);
  EXPECT_EQ(in_ball(delta_window(SymbolicSet(c.set), 4096, 3), 16), zs(all));
  for (const StageRecord& s : c.log.stages) {
    bool inside = false;
    for (const CertificateCheck& k : s.certificates) inside = inside || (k.name == "inside_fp" && k.ok);
    EXPECT_TRUE(inside);
  }
}

TEST(FpWitness, PowersOfFour) {
  std::vector<Element> seq;
  for (int i = 0; i < 29; ++i) seq.push_back(z(std::int64_t{1} << (2 * i)));
  Construction c = fp_delta_witness(seq, 8);
  EXPECT_TRUE(verify_construction(c.log).ok);
  std::set<std::int64_t> x = ints(c.log.elements());
  std::set<std::int64_t> evidence;
  for (std::int64_t g = -16; g <= 16; ++g)
    if (pair_count(x, g) >= 3) evidence.insert(g);
  EXPECT_EQ(evidence, (std::set<std::int64_t>{-16, -5, -4, -1, 0, 1, 4, 5, 16}));
  // FP of the powers of four: positive, base-4 digits all 0 or 1.
  for (auto v : x) {
    EXPECT_GT(v, 0);
    for (std::int64_t q = v; q > 0; q /= 4) EXPECT_LE(q % 4, 1) << v;
  }
}

TEST(FpWitness, FreeGroupPrefixStaysInside) {
  std::vector<Element> seq{w("a"), w("b"), w("aabb"), w("bbaa"), w("aaabbb"), w("bbbaaa"),
                           w("aaaabbbb"), w("bbbbaaaa"), w("aaaaabbbbb"), w("bbbbbaaaaa")};
  Construction c = fp_delta_witness(seq, 4);
  EXPECT_TRUE(verify_construction(c.log).ok);
  FiniteSet fp = fp_window(seq, 128);
  for (const Element& x : c.log.elements()) EXPECT_TRUE(fp.contains(x)) << x;
}

namespace {

// Sorted ints of chain j up to stage t.
std::vector<std::int64_t> chain_upto(const ConstructionLog& log, std::size_t t) {
  std::vector<std::int64_t> out;
  for (const StageRecord& s : log.stages)
    if (s.n <= t)
      for (const Element& u : s.added) out.push_back(u.to_i64());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::int64_t> chain_at(const ConstructionLog& log, std::size_t t) {
  std::vector<std::int64_t> out;
  for (const Element& u : log.stages[t].added) out.push_back(u.to_i64());
  std::sort(out.begin(), out.end());
  return out;
}

// Does some u + v with u in a, v in b land in ball(r) outside `allowed`?
bool sums_hit(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b, std::int64_t r,
              const std::vector<std::int64_t>& allowed) {
  for (auto u : a) {
    auto lo = std::lower_bound(b.begin(), b.end(), -r - u);
    for (auto it = lo; it != b.end() && *it <= r - u; ++it)
      if (!std::binary_search(allowed.begin(), allowed.end(), u + *it)) return true;
  }
  return false;
}

}  // namespace

TEST(Trajectory, PeriodTwoScheme) {
  TrajectoryBundle b = realize_trajectory(TrajectoryKind::Tr6, 2, 10);
  ASSERT_TRUE(b.passed());
  ASSERT_EQ(b.logs.size(), 2u);
  const ConstructionLog& lx = b.logs[0];
  const ConstructionLog& ly = b.logs[1];
  for (std::size_t t = 1; t <= 10; ++t) {
    auto r = static_cast<std::int64_t>(lx.stages[t].forbidden_radius);
    auto xo = chain_upto(lx, t - 1), yo = chain_upto(ly, t - 1);
    auto xn = chain_at(lx, t), yn = chain_at(ly, t);
    // The new pieces are built from exactly the earlier elements of the other chain.
    std::set<std::int64_t> served;
    for (const Element& y : lx.stages[t].targets) served.insert(y.to_i64());
    EXPECT_EQ(served, std::set<std::int64_t>(yo.begin(), yo.end()));
    std::vector<std::int64_t> expect_xn;
    for (std::size_t i = 0; i < lx.stages[t].chosen.size(); ++i) {
      std::int64_t x = lx.stages[t].chosen[i].to_i64(), y = lx.stages[t].targets[i].to_i64();
      for (auto v : {x, -x, x + y, -(x + y)}) expect_xn.push_back(v);
    }
    std::sort(expect_xn.begin(), expect_xn.end());
    expect_xn.erase(std::unique(expect_xn.begin(), expect_xn.end()), expect_xn.end());
    EXPECT_EQ(expect_xn, xn);
    std::vector<std::int64_t> both;
    std::set_intersection(xo.begin(), xo.end(), yo.begin(), yo.end(), std::back_inserter(both));
    EXPECT_EQ(both, std::vector<std::int64_t>{0});
    EXPECT_FALSE(sums_hit(xn, xn, r, yo)) << t;
    EXPECT_FALSE(sums_hit(yn, yn, r, xo)) << t;
    EXPECT_FALSE(sums_hit(xo, xn, r, yo)) << t;
    EXPECT_FALSE(sums_hit(yo, yn, r, xo)) << t;
  }
  std::vector<Element> both = detail::merge_intersect(window(SymbolicSet(b.sets[0]), 1 << 20),
                                                      window(SymbolicSet(b.sets[1]), 1 << 20));
  EXPECT_EQ(both, zs({0}));
}

TEST(Trajectory, WindowedDeltaMatchesTarget) {
  for (auto [kind, n, r] : {std::tuple{TrajectoryKind::Tr6, 3u, 16}, std::tuple{TrajectoryKind::Tr1, 3u, 16},
                            std::tuple{TrajectoryKind::Tr3, 1u, 32}}) {
    TrajectoryBundle b = realize_trajectory(kind, n, 10);
    ASSERT_TRUE(b.passed()) << trajectory_name(kind);
    std::size_t checked = 0;
    for (std::size_t i = 0; i < b.sets.size(); ++i) {
      if (!b.delta_of[i]) continue;
      auto d = in_ball(delta_window(SymbolicSet(b.sets[i]), 4096, 3), r);
      EXPECT_EQ(d, window(SymbolicSet(b.sets[*b.delta_of[i]]), static_cast<std::uint64_t>(r)))
          << trajectory_name(kind) << " " << b.labels[i];
      ++checked;
    }
    EXPECT_GE(checked, kind == TrajectoryKind::Tr3 ? 1u : 2u);
  }
}

TEST(Trajectory, NonSubgroupWitness) {
  TrajectoryBundle b = realize_trajectory(TrajectoryKind::Tr3, 1, 10);
  ASSERT_TRUE(b.non_subgroup_witness.has_value());
  auto [u, v] = *b.non_subgroup_witness;
  std::set<std::int64_t> a = ints(window(SymbolicSet(b.sets[0]), 1 << 22));
  EXPECT_TRUE(a.count(u.to_i64()));
  EXPECT_TRUE(a.count(v.to_i64()));
  EXPECT_FALSE(a.count(u.to_i64() + v.to_i64()));
}

TEST(Trajectory, PairwiseDisjoint) {
  for (auto kind : {TrajectoryKind::Tr1, TrajectoryKind::Tr2, TrajectoryKind::Tr6}) {
    TrajectoryBundle b = realize_trajectory(kind, 3, 5);
    for (std::uint64_t r : {16u, 256u, 4096u})
      for (std::size_t i = 0; i < b.sets.size(); ++i)
        for (std::size_t j = i + 1; j < b.sets.size(); ++j)
          EXPECT_EQ(detail::merge_intersect(window(SymbolicSet(b.sets[i]), r), window(SymbolicSet(b.sets[j]), r)),
                    zs({0}))
              << trajectory_name(kind) << " " << i << " " << j << " r=" << r;
  }
}

TEST(Trajectory, StrictSteps) {
  for (auto kind : {TrajectoryKind::Tr4, TrajectoryKind::Tr5}) {
    TrajectoryBundle b = realize_trajectory(kind, 3, 5);
    EXPECT_TRUE(b.passed()) << trajectory_name(kind);
    EXPECT_EQ(b.strict_witnesses.size(), 3u);
    EXPECT_EQ(b.steps.size(), 4u);
  }
}

TEST(Trajectory, FreeGroup) {
  TrajectoryBundle b = realize_trajectory(TrajectoryKind::Tr6, 2, 3, GroupId::FreeF2);
  EXPECT_TRUE(b.passed());
}

TEST(Trajectory, BadArguments) {
  EXPECT_THROW(parse_trajectory_kind("Tr7"), DomainError);
  EXPECT_EQ(parse_trajectory_kind("Tr4"), TrajectoryKind::Tr4);
  EXPECT_THROW(realize_trajectory(TrajectoryKind::Tr6, 0, 3), DomainError);
  EXPECT_THROW(realize_trajectory(TrajectoryKind::Tr6, 2, 0), DomainError);
}
