#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "cnc/cdcl.hpp"
#include "cnc/encoder.hpp"
#include "cnc/transform.hpp"
#include "oracle.hpp"

using namespace cnc;

TEST(Triples, SmallCases) {
  EXPECT_TRUE(enumerate_triples(4).empty());
  auto t5 = enumerate_triples(5);
  ASSERT_EQ(t5.size(), 1u);
  EXPECT_EQ(t5[0], (Triple{3, 4, 5}));
  EXPECT_FALSE(is_pythagorean(3, 4, 6));
  EXPECT_TRUE(is_pythagorean(5180, 5865, 7825));
}

TEST(Triples, UpToTwentyMatchesSearch) {
  auto got = enumerate_triples(20);
  auto want = oracle::triples_by_search(20);
  ASSERT_EQ(got.size(), 6u);
  // oracle lists by c, then b, then a
  for (std::size_t i = 0; i < want.size(); ++i)
    EXPECT_EQ(got[i], (Triple{want[i][0], want[i][1], want[i][2]}));
  EXPECT_EQ(got[4], (Triple{8, 15, 17}));
}

TEST(Triples, AgreeWithSearchUpTo150) {
  auto got = enumerate_triples(150);
  auto want = oracle::triples_by_search(150);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i)
    EXPECT_EQ(got[i], (Triple{want[i][0], want[i][1], want[i][2]}));
}

TEST(Triples, EuclidOracleAgrees) {
  EXPECT_EQ(oracle::triples_by_euclid(300), oracle::triples_by_search(300));
  auto got = enumerate_triples(7825);
  auto want = oracle::triples_by_euclid(7825);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i)
    ASSERT_EQ(got[i], (Triple{want[i][0], want[i][1], want[i][2]}));
}

TEST(Triples, Count7824) { EXPECT_EQ(enumerate_triples(7824).size(), 9465u); }

TEST(Encode, FiveHasTwoClauses) {
  auto f = encode(5);
  EXPECT_EQ(f.var_bound(), 5u);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0], (Clause{3, 4, 5}));
  EXPECT_EQ(f[1], (Clause{-3, -4, -5}));
}

TEST(Encode, ReferenceCounts) {
  auto f = encode(7824);
  EXPECT_EQ(occurrence_stats(f).occurring, 6492u);
  EXPECT_EQ(f.size(), 18930u);
  auto g = encode(7825);
  EXPECT_EQ(occurrence_stats(g).occurring, 6494u);
  EXPECT_EQ(g.size(), 18944u);
}

TEST(Encode, ClauseShapeAndFlipClosure) {
  for (std::uint64_t n : {5u, 30u, 100u, 500u}) {
    auto f = encode(n);
    EXPECT_EQ(f.size(), 2 * enumerate_triples(n).size());
    for (const auto& c : f) {
      ASSERT_EQ(c.size(), 3u);
      EXPECT_TRUE(c[0].is_positive() == c[1].is_positive() && c[1].is_positive() == c[2].is_positive());
    }
    EXPECT_TRUE(is_flip_symmetric(f));
  }
}

TEST(Encode, OccurringVariablesAreTripleMembers) {
  for (std::uint64_t n : {25u, 200u}) {
    std::set<std::uint64_t> members;
    for (auto t : oracle::triples_by_search(n)) members.insert(t.begin(), t.end());
    EXPECT_EQ(occurrence_stats(encode(n)).occurring, members.size());
  }
}

TEST(Encode, Monotone) {
  auto prev = enumerate_triples(1);
  for (std::uint64_t n = 2; n <= 120; ++n) {
    auto cur = enumerate_triples(n);
    for (const auto& t : prev) EXPECT_NE(std::find(cur.begin(), cur.end(), t), cur.end());
    EXPECT_GE(encode(n).size(), encode(n - 1).size());
    prev = std::move(cur);
  }
}

TEST(Encode, SatisfiableUpTo25ByBruteForceAndSolver) {
  for (std::uint64_t n = 1; n <= 25; ++n) {
    auto f = encode(n);
    bool bf = oracle::satisfiable(f);
    EXPECT_TRUE(bf);
    EXPECT_EQ(solve(f).verdict, Verdict::sat) << n;
  }
}

TEST(CheckPartition, Examples) {
  Partition p(5);
  p.set(3, Part::positive);
  p.set(4, Part::negative);
  p.set(5, Part::positive);
  EXPECT_TRUE(std::holds_alternative<PartitionValid>(check_partition(5, p)));
  p.set(4, Part::positive);
  auto v = check_partition(5, p);
  ASSERT_TRUE(std::holds_alternative<PartitionViolation>(v));
  EXPECT_EQ(std::get<PartitionViolation>(v).triple, (Triple{3, 4, 5}));
}

TEST(CheckPartition, UnassignedMemberIsAnError) {
  Partition p(5);
  p.set(3, Part::positive);
  p.set(4, Part::negative);
  EXPECT_THROW(check_partition(5, p), Error);
  // integers outside every triple may stay unassigned
  p.set(5, Part::negative);
  EXPECT_NO_THROW(check_partition(5, p));
}

TEST(CheckPartition, FirstViolationInOrder) {
  Partition p(20);
  for (std::uint64_t i = 1; i <= 20; ++i) p.set(i, Part::positive);
  auto v = check_partition(20, p);
  EXPECT_EQ(std::get<PartitionViolation>(v).triple, (Triple{3, 4, 5}));
}

TEST(OccurrenceStats, TwentyAndEmpty) {
  auto st = occurrence_stats(encode(20));
  // independent count over the triples: 12 lies in (5,12,13),(9,12,15),(12,16,20)
  std::map<std::uint64_t, int> count;
  for (auto t : oracle::triples_by_search(20))
    for (auto x : t) count[x] += 2;
  int best = 0;
  std::uint64_t arg = 0;
  for (auto [x, c] : count)
    if (c > best) best = c, arg = x;
  EXPECT_EQ(arg, 12u);
  EXPECT_EQ(best, 6);
  EXPECT_EQ(st.most_frequent, 12u);
  EXPECT_EQ(st.counts[12], 6u);
  auto empty = occurrence_stats(Formula(10));
  EXPECT_EQ(empty.occurring, 0u);
  EXPECT_EQ(empty.most_frequent, 0u);
}

TEST(OccurrenceStats, Pivot7825) {
  EXPECT_EQ(occurrence_stats(bce(encode(7825)).reduced).most_frequent, 2520u);
  // before elimination a different variable leads
  EXPECT_EQ(occurrence_stats(encode(7825)).most_frequent, 1680u);
}
