#include <gtest/gtest.h>

#include <random>

#include "deltaset/oracle.hpp"
#include "test_support.hpp"

using namespace deltaset;

namespace {

SymbolicSet ap(std::int64_t a, std::int64_t d) { return SymbolicSet(EPSet::ap(a, d)); }
SymbolicSet pow2() { return SymbolicSet(powers_stream(2)); }

std::vector<std::int64_t> ints(const std::vector<Element>& xs) {
  std::vector<std::int64_t> out;
  for (const Element& x : xs) out.push_back(x.to_i64());
  std::sort(out.begin(), out.end());
  return out;
}

// Literal count of pairs x, g + x both in A with |x|, |g + x| <= R.
std::size_t naive_count(const testsupport::Pred& a, std::int64_t R, std::int64_t g) {
  std::size_t c = 0;
  for (std::int64_t x = -R; x <= R; ++x)
    if (a(x) && x + g >= -R && x + g <= R && a(x + g)) ++c;
  return c;
}

}  // namespace

TEST(Oracle, DeltaWindowExamples) {
  EXPECT_EQ(delta_window(SymbolicSet(EPSet::integers()), 64, 3), ball(GroupId::IntegersZ, 64));
  EXPECT_TRUE(delta_window(SymbolicSet(EPSet::finite({0, 1, 4})), 64, 4).empty());
  // Frozen by direct count: 2Z at R = 256 keeps every even g with |g| <= 256.
  auto w = ints(delta_window(ap(0, 2), 256, 3));
  EXPECT_EQ(w.size(), 257u);
  EXPECT_EQ(w.front(), -256);
  EXPECT_EQ(w.back(), 256);
  for (std::int64_t g : w) EXPECT_EQ(g % 2, 0);
}

TEST(Oracle, CountsMatchNaivePairCounting) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    auto raw = testsupport::random_raw(rng);
    SymbolicSet a(raw.build());
    WitnessCounts c(a, 200);
    for (std::int64_t g = -60; g <= 60; ++g)
      ASSERT_EQ(c.count(Element::integer(g)),
                naive_count([&](std::int64_t x) { return raw.contains(x); }, 200, g));
  }
}

TEST(Oracle, StableCoreExamples) {
  EXPECT_EQ(ints(stability_report(ap(0, 2)).stable_core), window_z(ap(0, 2), 64));
  EXPECT_EQ(ints(stability_report(pow2()).stable_core), std::vector<std::int64_t>{0});
  EXPECT_TRUE(stability_report(SymbolicSet(EPSet::finite({0, 1, 2, 3, 4, 5}))).stable_core.empty());
}

TEST(Oracle, BruteClassifyExamples) {
  ProxyReport e = brute_classify(ap(0, 2), 256);
  EXPECT_EQ(e.max_gap, 2);
  EXPECT_GE(e.max_multiplicity, 3u);
  EXPECT_TRUE(e.large_proxy);
  ProxyReport n = brute_classify(SymbolicSet(EPSet::ray(0, 1, true)), 256);
  EXPECT_GE(n.max_complement_run, 128);
  EXPECT_FALSE(n.large_proxy);
  EXPECT_TRUE(n.thick_proxy);
  ProxyReport p = brute_classify(pow2(), 4096);
  EXPECT_EQ(p.max_multiplicity, 1u);
  EXPECT_THROW(brute_classify(ap(0, 2), 32), DomainError);
}

TEST(Oracle, MonotoneInThreshold) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    SymbolicSet a(testsupport::random_ep(rng));
    for (std::size_t t = 1; t < 6; ++t) {
      auto hi = ints(delta_window(a, 256, t + 1)), lo = ints(delta_window(a, 256, t));
      ASSERT_TRUE(std::includes(lo.begin(), lo.end(), hi.begin(), hi.end()));
    }
  }
}

TEST(Oracle, SymmetricOnQuarterBall) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    SymbolicSet a(testsupport::random_ep(rng));
    WitnessCounts c(a, 256);
    for (std::int64_t g = 0; g <= 64; ++g)
      ASSERT_EQ(c.count(Element::integer(g)), c.count(Element::integer(-g)));
  }
}

TEST(Oracle, FreeGroupCounts) {
  // a^Z: g is a power of a iff it has many witnesses.
  std::vector<Element> xs;
  for (int n = -10; n <= 10; ++n) xs.push_back(Element::word(std::string(std::abs(n), n < 0 ? 'A' : 'a')));
  SymbolicSet s(list_stream(GroupId::FreeF2, "aZ", xs));
  WitnessCounts c(s, 8);
  EXPECT_EQ(c.count(Element::word("a")), 16u);
  EXPECT_EQ(c.count(Element::word("b")), 0u);
  StabilityReport r = stability_report(s);
  EXPECT_EQ(r.stable_core.front(), Element::identity(GroupId::FreeF2));
}

TEST(Oracle, ScheduleValidation) {
  OracleSchedule s{{256, 128}, {3, 4}};
  EXPECT_THROW(s.validate(), DomainError);
  OracleSchedule t{{256, 1024}, {3}};
  EXPECT_THROW(t.validate(), DomainError);
  EXPECT_NO_THROW(OracleSchedule::for_group(GroupId::IntegersZ).validate());
}
