#include <gtest/gtest.h>

#include <map>
#include <set>

#include "apx/errors.hpp"
#include "apx/rational.hpp"
#include "apx/renum.hpp"
#include "apx/schedule.hpp"
#include "apx/tupling.hpp"
#include "gen.hpp"

using namespace apx;

namespace {

// Independent oracle: walk the Cantor diagonals in order.
std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> diagonal_walk(std::uint64_t count) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> out;
  std::uint64_t code = 0;
  for (std::uint64_t d = 0; code < count; ++d) {
    for (std::uint64_t t = 0; t <= d && code < count; ++t) out[{d - t, t}] = code++;
  }
  return out;
}

}  // namespace

TEST(Rational, CanonicalForm) {
  EXPECT_EQ(Rat::parse("10/4").str(), "5/2");
  EXPECT_EQ(Rat::parse("-3/8").str(), "-3/8");
  EXPECT_EQ(Rat::parse("2").str(), "2");
  EXPECT_EQ(Rat::parse("0/7").str(), "0");
  EXPECT_THROW(Rat::parse("6/-4"), ParseError);
  EXPECT_THROW(Rat::parse("1/0"), ParseError);
  EXPECT_THROW(Rat::parse("abc"), ParseError);
  EXPECT_THROW(Rat::parse(""), ParseError);
}

TEST(Rational, ArithmeticIsExact) {
  EXPECT_EQ(Rat(1, 3) + Rat(1, 6), Rat(1, 2));
  EXPECT_EQ(Rat(2, 3) * Rat(3, 4), Rat(1, 2));
  EXPECT_EQ(Rat(1) / Rat(3) * 3, Rat(1));
  EXPECT_LT(Rat(1, 3), Rat(1, 2));
  EXPECT_THROW(Rat(1) / Rat(0), Error);
  EXPECT_EQ(inverse_power_of_two(10), Rat(1, 1024));
  EXPECT_EQ(floor(Rat(-1, 2)), Nat(-1));
}

TEST(Rational, ParseRoundTripsOnRandomValues) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    Rat q = gen::rational(rng, 1000, 1000);
    EXPECT_EQ(Rat::parse(q.str()), q);
  }
}

TEST(Tupling, Examples) {
  EXPECT_EQ(cantor_pair(0, 0), 0u);
  EXPECT_EQ(cantor_pair(1, 0), 1u);
  EXPECT_EQ(cantor_pair(0, 1), 2u);
}

TEST(Tupling, AgreesWithDiagonalWalk) {
  auto walk = diagonal_walk(10'001);
  for (const auto& [st, code] : walk) EXPECT_EQ(cantor_pair(st.first, st.second), code);
}

TEST(Tupling, UnpairRoundTripUpTo10000) {
  for (std::uint64_t n = 0; n <= 10'000; ++n) {
    auto [s, t] = cantor_unpair(n);
    ASSERT_EQ(cantor_pair(s, t), n);
  }
}

TEST(Tupling, PairInjectiveOnSquare) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s <= 100; ++s) {
    for (std::uint64_t t = 0; t <= 100; ++t) ASSERT_TRUE(seen.insert(cantor_pair(s, t)).second);
  }
}

TEST(Tupling, BigAndSmallAgree) {
  for (std::uint64_t n = 0; n < 2000; n += 7) {
    auto [s, t] = cantor_unpair(Nat(static_cast<unsigned long>(n)));
    auto [s2, t2] = cantor_unpair(n);
    EXPECT_EQ(s, Nat(static_cast<unsigned long>(s2)));
    EXPECT_EQ(t, Nat(static_cast<unsigned long>(t2)));
  }
  Nat big("123456789012345678901234567890");
  auto [s, t] = cantor_unpair(big);
  EXPECT_EQ(cantor_pair(s, t), big);
}

TEST(Tupling, PairOverflowThrows) { EXPECT_THROW(cantor_pair(1ull << 40, 1ull << 40), Error); }

TEST(Tupling, TupleRoundTripLengths2To6) {
  std::mt19937_64 rng(3);
  for (std::size_t len = 2; len <= 6; ++len) {
    for (int i = 0; i < 200; ++i) {
      std::vector<Nat> xs;
      for (std::size_t j = 0; j < len; ++j) xs.push_back(Nat(gen::integer(rng, 0, 1'000'000)));
      Nat code = tuple_encode(xs);
      EXPECT_EQ(tuple_decode(code, len), xs);
    }
  }
}

TEST(Tupling, TupleIsRightNested) {
  std::vector<std::uint64_t> xs{3, 1, 4};
  EXPECT_EQ(tuple_encode(xs), cantor_pair(3, cantor_pair(1, 4)));
  auto d = tuple_decode<3>(cantor_pair(3, cantor_pair(1, 4)));
  EXPECT_EQ(d[0], 3u);
  EXPECT_EQ(d[1], 1u);
  EXPECT_EQ(d[2], 4u);
}

TEST(Tupling, SequenceCodes) {
  EXPECT_EQ(sequence_encode(std::vector<Nat>{}), Nat(0));
  EXPECT_TRUE(sequence_decode(Nat(0)).empty());
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    std::vector<Nat> xs(gen::natural(rng, 5));
    for (auto& x : xs) x = Nat(gen::integer(rng, 0, 50));
    EXPECT_EQ(sequence_decode(sequence_encode(xs)), xs);
  }
  // Every code decodes to something and re-encodes to itself.
  for (std::uint64_t c = 0; c < 500; ++c) {
    auto xs = sequence_decode(c);
    EXPECT_EQ(sequence_encode(xs), c);
  }
}

TEST(Schedule, Examples) {
  auto d = Schedule::dyadic();
  auto h = Schedule::harmonic();
  EXPECT_EQ(d.r(0), Rat(1));
  EXPECT_EQ(d.r(3), Rat(1, 8));
  EXPECT_EQ(h.r(4), Rat(1, 5));
  EXPECT_EQ(d.find_m_below(Rat(1)), 0u);
  EXPECT_EQ(d.find_m_below(Rat(1, 5)), 3u);
  EXPECT_EQ(h.find_m_below(Rat(1, 3)), 2u);
  EXPECT_THROW(d.find_m_below(Rat(0)), Error);
  EXPECT_THROW(Schedule::by_name("cubic"), ParseError);
}

TEST(Schedule, PositiveAndLeastBelow) {
  std::mt19937_64 rng(17);
  auto wobbly = Schedule::custom(
      [](std::uint64_t t) { return t % 2 == 0 ? Rat(1, static_cast<long>(t + 1)) : Rat(2, static_cast<long>(t + 1)); },
      "wobbly");
  for (const auto& sch : {Schedule::dyadic(), Schedule::harmonic(), wobbly}) {
    for (std::uint64_t t = 0; t <= 1000; ++t) ASSERT_GT(sch.r(t), Rat(0));
    for (int i = 0; i < 100; ++i) {
      Rat q = gen::positive_rational(rng, 20, 200);
      std::uint64_t m = sch.find_m_below(q);
      EXPECT_LE(sch.r(m), q);
      for (std::uint64_t j = 0; j < m; ++j) ASSERT_GT(sch.r(j), q);
    }
  }
  EXPECT_EQ(wobbly.prefix_min(3), Rat(1, 3));
}

TEST(Schedule, CustomRejectsNonPositive) {
  EXPECT_THROW(Schedule::custom([](std::uint64_t) { return Rat(0); }, "zero"), ScheduleError);
  auto late = Schedule::custom([](std::uint64_t t) { return t < 5000 ? Rat(1) : Rat(-1); }, "late", 10);
  EXPECT_THROW(late.r(6000), ScheduleError);
}

TEST(REnum, MemberByStageExamples) {
  auto seven = finite_renum<int>({7});
  EXPECT_TRUE(seven.member_by_stage(7, 0));
  EXPECT_FALSE(seven.member_by_stage(8, 100));
  REnum<int> late([](std::uint64_t s) -> std::optional<int> {
    if (s == 5) return 42;
    return std::nullopt;
  });
  EXPECT_FALSE(late.member_by_stage(42, 4));
  EXPECT_TRUE(late.member_by_stage(42, 5));
}

TEST(REnum, MemberByStageMonotone) {
  std::mt19937_64 rng(23);
  auto evens = filter_renum(REnum<int>([](std::uint64_t s) -> std::optional<int> { return static_cast<int>(s % 40); }),
                            [](int x) { return x % 2 == 0; });
  for (int i = 0; i < 200; ++i) {
    int x = static_cast<int>(gen::integer(rng, 0, 50));
    std::uint64_t s = gen::natural(rng, 60);
    if (evens.member_by_stage(x, s)) EXPECT_TRUE(evens.member_by_stage(x, s + 1));
  }
}

TEST(REnum, DovetailExamples) {
  auto one = finite_renum<int>({1});
  auto two = finite_renum<int>({2});
  auto p = dovetail_product(one, two).prefix(100);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], std::make_pair(1, 2));
  EXPECT_TRUE(dovetail_product(empty_renum<int>(), two).prefix(500).empty());
  auto bits = finite_renum<int>({0, 1});
  auto all = dovetail_product(bits, bits).prefix(50);
  EXPECT_EQ((std::set<std::pair<int, int>>(all.begin(), all.end()).size()), 4u);
  auto u = dovetail_union(one, two).prefix(10);
  EXPECT_EQ(std::set<int>(u.begin(), u.end()), (std::set<int>{1, 2}));
}

TEST(REnum, TraversalsAreDeterministic) {
  auto e = dovetail_product(finite_renum<int>({3, 1, 4}), map_renum(finite_renum<int>({1, 5}), [](int x) { return 2 * x; }));
  for (std::uint64_t s = 0; s < 300; ++s) EXPECT_EQ(e.stage(s), e.stage(s));
  EXPECT_EQ(e.prefix(300), e.prefix(300));
}

TEST(REnum, FromApproximationsDenotesTheUnion) {
  auto e = from_approximations<int>([](std::uint64_t b) {
    std::vector<int> out;
    for (std::uint64_t i = 0; i <= b && i < 6; ++i) out.push_back(static_cast<int>(10 * i));
    return out;
  });
  auto got = e.prefix(200);
  EXPECT_EQ(std::set<int>(got.begin(), got.end()), (std::set<int>{0, 10, 20, 30, 40, 50}));
}
