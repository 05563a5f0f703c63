#include <gtest/gtest.h>

#include <random>
#include <unordered_set>

#include "deltaset/group.hpp"

using namespace deltaset;

namespace {

Element Z(long long n) { return Element::integer(n); }
Element W(const char* s) { return Element::word(s); }

/// Reference reduction: repeatedly delete the first cancelling pair.
std::string naive_reduce(std::string w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (f2::inverse_letter(w[i]) == w[i + 1]) {
        w.erase(i, 2);
        changed = true;
        break;
      }
  }
  return w;
}

std::string random_letters(std::mt19937& rng, std::size_t len) {
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(f2::kLetters[rng() % 4]);
  return s;
}

}  // namespace

TEST(Group, IntegerArithmetic) {
  EXPECT_EQ(mul(Z(2), Z(3)), Z(5));
  EXPECT_EQ(inv(Z(5)), Z(-5));
  EXPECT_EQ(inv(Z(0)), Z(0));
  EXPECT_TRUE(Z(0).is_identity());
}

TEST(Group, FreeReduction) {
  EXPECT_EQ(mul(W("ab"), W("Ba")), W("aa"));
  EXPECT_EQ(mul(W("a"), W("A")), Element::identity(GroupId::FreeF2));
  EXPECT_EQ(inv(W("ab")), W("BA"));
  EXPECT_EQ(inv(W("")), W(""));
  EXPECT_EQ(W("abBA").letters(), "");
}

TEST(Group, WordLiteralRejectsForeignLetters) {
  EXPECT_THROW(Element::word("abc"), DomainError);
  EXPECT_THROW(parse_element(GroupId::FreeF2, "ax"), DomainError);
  EXPECT_EQ(parse_element(GroupId::FreeF2, "e"), Element::identity(GroupId::FreeF2));
}

TEST(Group, MixedGroupsRejected) {
  EXPECT_THROW(mul(Z(1), W("a")), DomainError);
  EXPECT_THROW(canonical_less(Z(1), W("a")), DomainError);
}

TEST(Group, ReductionMatchesNaive) {
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    std::string s = random_letters(rng, rng() % 20);
    Element e = Element::word(s);
    EXPECT_EQ(e.letters(), naive_reduce(s));
    EXPECT_TRUE(f2::is_reduced(e.letters()));
  }
}

TEST(Group, BallExamples) {
  auto b = ball(GroupId::IntegersZ, 2);
  std::vector<Element> expect{Z(0), Z(1), Z(-1), Z(2), Z(-2)};
  EXPECT_EQ(b, expect);
  auto f = ball(GroupId::FreeF2, 1);
  std::vector<Element> fe{W(""), W("a"), W("A"), W("b"), W("B")};
  EXPECT_EQ(f, fe);
  EXPECT_EQ(ball(GroupId::FreeF2, 2).size(), 17u);
}

TEST(Group, BallSizesMatchClosedForm) {
  std::size_t pow3 = 1;
  for (std::uint64_t r = 0; r <= 9; ++r) {
    EXPECT_EQ(ball(GroupId::FreeF2, r).size(), 2 * pow3 - 1);
    EXPECT_EQ(ball(GroupId::IntegersZ, r).size(), 2 * r + 1);
    pow3 *= 3;
  }
}

TEST(Group, BallMonotoneAndSymmetric) {
  for (GroupId G : {GroupId::IntegersZ, GroupId::FreeF2}) {
    std::unordered_set<Element> prev;
    for (std::uint64_t r = 0; r <= 12; ++r) {
      auto b = ball(G, r);
      std::unordered_set<Element> cur(b.begin(), b.end());
      EXPECT_EQ(cur.size(), b.size());
      for (const Element& x : prev) EXPECT_TRUE(cur.count(x));
      for (const Element& x : b) ASSERT_TRUE(cur.count(inv(x)));
      prev = std::move(cur);
    }
  }
}

TEST(Group, BallIsCanonicallySortedAndFollowsSuccessor) {
  for (GroupId G : {GroupId::IntegersZ, GroupId::FreeF2}) {
    auto b = ball(G, 5);
    Element cur = Element::identity(G);
    for (std::size_t i = 0; i < b.size(); ++i) {
      ASSERT_EQ(b[i], cur) << i;
      if (i + 1 < b.size()) {
        ASSERT_TRUE(canonical_less(b[i], b[i + 1]));
      }
      cur = next_element(cur);
    }
  }
}

TEST(Group, GroupLaws) {
  std::mt19937 rng(11);
  auto b = ball(GroupId::FreeF2, 4);
  for (int i = 0; i < 2000; ++i) {
    const Element& g = b[rng() % b.size()];
    const Element& h = b[rng() % b.size()];
    const Element& k = b[rng() % b.size()];
    EXPECT_EQ(mul(mul(g, h), k), mul(g, mul(h, k)));
    EXPECT_EQ(inv(mul(g, h)), mul(inv(h), inv(g)));
    EXPECT_TRUE(mul(g, inv(g)).is_identity());
    EXPECT_EQ(inv(inv(g)), g);
    EXPECT_EQ(mul(Element::identity(GroupId::FreeF2), g), g);
  }
}

TEST(Group, SquareRootExamples) {
  EXPECT_EQ(sqrt_set(Z(4)), std::vector<Element>{Z(2)});
  EXPECT_TRUE(sqrt_set(Z(3)).empty());
  EXPECT_EQ(sqrt_set(Z(-6)), std::vector<Element>{Z(-3)});
  EXPECT_EQ(sqrt_set(W("aa")), std::vector<Element>{W("a")});
  EXPECT_EQ(sqrt_set(W("")), std::vector<Element>{W("")});
  EXPECT_EQ(sqrt_set(W("baaB")), std::vector<Element>{W("baB")});
  EXPECT_TRUE(sqrt_set(W("ab")).empty());
  EXPECT_TRUE(sqrt_set(W("babaB")).empty());
}

TEST(Group, SquareRootsAgreeWithBruteForce) {
  // Any root x of g satisfies |x| <= |x²|, so squaring all of ball(6) finds
  // every root of every g in ball(6).
  std::unordered_map<Element, std::vector<Element>> brute;
  for (const Element& x : ball(GroupId::FreeF2, 6)) {
    Element sq = mul(x, x);
    if (sq.norm_le(6)) brute[sq].push_back(x);
  }
  for (const Element& g : ball(GroupId::FreeF2, 6)) {
    auto roots = sqrt_set(g);
    for (const Element& x : roots) EXPECT_EQ(mul(x, x), g);
    auto it = brute.find(g);
    std::size_t expected = it == brute.end() ? 0 : it->second.size();
    ASSERT_EQ(roots.size(), expected) << g;
  }
}

TEST(Group, ParseElement) {
  EXPECT_EQ(parse_element(GroupId::IntegersZ, "-17"), Z(-17));
  EXPECT_EQ(parse_element(GroupId::IntegersZ, "123456789012345678901234567890").str(),
            "123456789012345678901234567890");
  EXPECT_THROW(parse_element(GroupId::IntegersZ, "1x"), DomainError);
  EXPECT_THROW(parse_element(GroupId::IntegersZ, "-"), DomainError);
}
