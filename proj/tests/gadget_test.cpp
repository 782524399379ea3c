#include <gtest/gtest.h>

#include <array>
#include <random>
#include <set>
#include <vector>

#include "palsum/gadget.hpp"
#include "support.hpp"

namespace palsum {
namespace {

DigitVector dec(std::uint64_t v) { return to_digits(v, 10); }

TEST(MakeGadget, DecimalGapOne) {
  const auto sg = make_gadget(10, 1);
  EXPECT_EQ(sg.a.to_string(), "101");
  EXPECT_EQ(sg.b.to_string(), "000");
  EXPECT_EQ(sg.a_prime.to_string(), "090");
  EXPECT_EQ(sg.b_prime.to_string(), "011");
  EXPECT_EQ(from_digits(sg.a) + from_digits(sg.b), from_digits(sg.a_prime) + from_digits(sg.b_prime));
}

TEST(MakeGadget, BinaryGapZero) {
  const auto sg = make_gadget(2, 0);
  EXPECT_EQ(sg.a.to_string(), "11");
  EXPECT_EQ(sg.b.to_string(), "00");
  EXPECT_EQ(sg.a_prime.to_string(), "00");
  EXPECT_EQ(sg.b_prime.to_string(), "11");
}

TEST(MakeGadget, DecimalGapTwo) {
  const auto sg = make_gadget(10, 2);
  EXPECT_EQ(sg.a.to_string(), "1001");
  EXPECT_EQ(sg.b.to_string(), "0000");
  EXPECT_EQ(sg.a_prime.to_string(), "0990");
  EXPECT_EQ(sg.b_prime.to_string(), "0011");
}

TEST(MakeGadget, InvalidBase) { EXPECT_THROW(make_gadget(1, 0), Error); }

TEST(VerifyGadget, Examples) {
  EXPECT_TRUE(verify_gadget(make_gadget(10, 1)));
  EXPECT_TRUE(verify_gadget(make_gadget(2, 0)));
  auto tampered = make_gadget(10, 1);
  tampered.b_prime = DigitVector::from_msb(10, {0, 1, 2});
  EXPECT_FALSE(verify_gadget(tampered));
}

TEST(VerifyGadget, Grid) {
  for (Base g = 2; g <= 16; ++g) {
    for (std::size_t d = 0; d <= 8; ++d) EXPECT_TRUE(verify_gadget(make_gadget(g, d))) << g << "," << d;
  }
}

TEST(VerifyGadget, MirroredIdentityInIntegers) {
  // g^d r(a) + r(b) = g^d r(a') + r(b') checked with 128-bit values.
  for (Base g = 2; g <= 16; ++g) {
    for (std::size_t d = 0; d <= 6; ++d) {
      const auto sg = make_gadget(g, d);
      const uint128 shift = *checked_pow(g, d);
      const uint128 lhs = shift * from_digits(reverse(sg.a)) + from_digits(reverse(sg.b));
      const uint128 rhs = shift * from_digits(reverse(sg.a_prime)) + from_digits(reverse(sg.b_prime));
      EXPECT_TRUE(lhs == rhs) << g << "," << d;
    }
  }
}

TEST(BlockCapacity, Examples) {
  EXPECT_EQ(block_capacity(30, 0), 5u);
  EXPECT_EQ(block_capacity(48, 0), 8u);
  EXPECT_EQ(block_capacity(20, 3), 1u);
}

TEST(ValidConfig, Examples) {
  EXPECT_TRUE(valid_config(48, 0, 2));
  EXPECT_FALSE(valid_config(6, 2, 10));
  EXPECT_TRUE(valid_config(12, 0, 10));
  EXPECT_FALSE(valid_config(12, 0, 1));
  EXPECT_FALSE(valid_config(6, 0, 10));  // t = 1 but site 1 reaches the middle
  EXPECT_FALSE(valid_config(7, 0, 10));  // site 1 would contain the middle digit
}

TEST(ValidConfig, SitesStayInsideFreeHalves) {
  for (std::size_t n = 1; n <= 200; ++n) {
    for (std::size_t d = 0; d < n && d <= 8; ++d) {
      if (!valid_config(n, d, 2)) continue;
      const std::size_t t = block_capacity(n, d);
      const std::size_t m = n - d;
      for (std::size_t j = 1; j <= t; ++j) {
        const std::size_t lo = site_start(j, d), hi = lo + d + 1;
        ASSERT_GE(lo, 1u);
        ASSERT_LT(hi, (m + 1) / 2);
        ASSERT_LT(hi, m - 1 - hi);  // below its own mirror
        ASSERT_LT(hi, n - 1 - hi);
      }
    }
  }
}

TEST(MatchSites, DecimalWorkedExample) {
  const auto sg = make_gadget(10, 0);
  const auto report = match_sites(dec(311112211113), dec(100056650001), sg);
  EXPECT_EQ(report.t, 2u);
  EXPECT_EQ(report.sites, (std::vector<std::size_t>{1}));
  EXPECT_EQ(report.S(), 1u);
}

TEST(MatchSites, NoElevenBlocks) {
  const auto sg = make_gadget(10, 0);
  EXPECT_EQ(match_sites(dec(523456654325), dec(100056650001), sg).S(), 0u);
}

TEST(MatchSites, BinaryAllSites) {
  const auto sg = make_gadget(2, 0);
  const DigitVector p(2, std::vector<Digit>(48, 1));
  const auto q = to_digits((std::uint64_t{1} << 47) + 1, 2);
  const auto report = match_sites(p, q, sg);
  EXPECT_EQ(report.t, 8u);
  EXPECT_EQ(report.sites, (std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7, 8}));
}

TEST(MatchSites, Errors) {
  const auto sg = make_gadget(10, 0);
  try {
    match_sites(dec(311112211113), dec(10056650001), sg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::length_mismatch);
  }
  try {
    match_sites(dec(123321), dec(100001), sg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::config_invalid);
  }
}

TEST(ApplySwap, DecimalWorkedExample) {
  const auto sg = make_gadget(10, 0);
  const auto [p2, q2] = apply_swap({dec(311112211113), dec(100056650001), sg, {1}});
  EXPECT_EQ(from_digits(p2), 310012210013u);
  EXPECT_EQ(from_digits(q2), 101156651101u);
  EXPECT_TRUE(is_palindrome(p2));
  EXPECT_TRUE(is_palindrome(q2));
  EXPECT_EQ(from_digits(p2) + from_digits(q2), 411168861114u);
  EXPECT_EQ(311112211113u + 100056650001u, 411168861114u);
}

TEST(ApplySwap, EmptyPlanIsIdentity) {
  const auto sg = make_gadget(10, 0);
  const auto [p2, q2] = apply_swap({dec(311112211113), dec(100056650001), sg, {}});
  EXPECT_EQ(p2, dec(311112211113));
  EXPECT_EQ(q2, dec(100056650001));
}

TEST(ApplySwap, BinaryAllSites) {
  const auto sg = make_gadget(2, 0);
  const DigitVector p(2, std::vector<Digit>(48, 1));
  const auto q = to_digits((std::uint64_t{1} << 47) + 1, 2);
  const auto [p2, q2] = apply_swap({p, q, sg, {1, 2, 3, 4, 5, 6, 7, 8}});
  EXPECT_EQ(from_digits(p2) + from_digits(q2), from_digits(p) + from_digits(q));
  EXPECT_EQ(p2[47], p[47]);
}

TEST(ApplySwap, RejectsNonMatchingSite) {
  const auto sg = make_gadget(10, 0);
  try {
    apply_swap({dec(311112211113), dec(100056650001), sg, {2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::site_not_matching);
  }
  EXPECT_THROW(apply_swap({dec(311112211113), dec(100056650001), sg, {1, 1}}), Error);
  EXPECT_THROW(apply_swap({dec(311112211113), dec(100056650001), sg, {3}}), Error);
}

TEST(ApplySwap, RandomSoundness) {
  std::mt19937_64 rng(1234);
  const std::array<Base, 4> bases{2, 3, 10, 16};
  for (int iter = 0; iter < 10'000; ++iter) {
    const auto c = testing::random_valid_config(rng, 200, 6, bases);
    const auto sg = make_gadget(c.g, c.d);
    std::vector<std::size_t> planted;
    for (std::size_t j = 1; j <= block_capacity(c.n, c.d); ++j) {
      if (rng() % 3 == 0) planted.push_back(j);
    }
    const auto [p, q] = testing::planted_pair(rng, c, planted);
    const auto report = match_sites(p, q, sg);
    std::vector<std::size_t> chosen;
    for (auto j : report.sites) {
      if (rng() & 1) chosen.push_back(j);
    }
    const auto [p2, q2] = apply_swap({p, q, sg, chosen});
    ASSERT_EQ(add(p, q), add(p2, q2));
    ASSERT_TRUE(is_palindrome(p2));
    ASSERT_TRUE(is_palindrome(q2));
    ASSERT_EQ(p2.size(), p.size());
    ASSERT_EQ(q2.size(), q.size());

    const auto [p3, q3] = revert_swap({p2, q2, sg, chosen});
    ASSERT_EQ(p3, p);
    ASSERT_EQ(q3, q);
  }
}

TEST(EnumerateSwaps, Counts) {
  const auto sg = make_gadget(10, 0);
  EXPECT_EQ(enumerate_swaps(dec(311112211113), dec(100056650001), sg).size(), 2u);
  const auto none = enumerate_swaps(dec(523456654325), dec(100056650001), sg);
  ASSERT_EQ(none.size(), 1u);
  EXPECT_EQ(none[0].first, dec(523456654325));
}

TEST(EnumerateSwaps, BinaryAllSubsetsDistinct) {
  const auto sg = make_gadget(2, 0);
  const DigitVector p(2, std::vector<Digit>(48, 1));
  const auto q = to_digits((std::uint64_t{1} << 47) + 1, 2);
  const auto reps = enumerate_swaps(p, q, sg);
  ASSERT_EQ(reps.size(), 256u);
  const std::uint64_t sum = from_digits(p) + from_digits(q);
  std::set<std::pair<DigitVector, DigitVector>> distinct(reps.begin(), reps.end());
  EXPECT_EQ(distinct.size(), 256u);
  for (const auto& [a, b] : reps) EXPECT_EQ(from_digits(a) + from_digits(b), sum);
}

TEST(EnumerateSwaps, CapacityLimit) {
  const auto sg = make_gadget(2, 0);
  const DigitVector p(2, std::vector<Digit>(48, 1));
  const auto q = to_digits((std::uint64_t{1} << 47) + 1, 2);
  try {
    enumerate_swaps(p, q, sg, 128);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::capacity_exceeded);
  }
}

}  // namespace
}  // namespace palsum
