#include <gtest/gtest.h>

#include "circlab/classify.hpp"
#include "circlab/error.hpp"
#include "circlab/parse.hpp"
#include "oracles.hpp"

using namespace circlab;

namespace {

NatSet all() { return parse_set_expr("all", nullptr); }

}  // namespace

TEST(BBounded, Examples) {
  EXPECT_EQ(check_b_bounded(RatioSpec::constant(2), all(), 2, 10000).verdict, Verdict::holds);

  const ClassVerdict p = check_b_bounded(RatioSpec::power(2), all(), 100, 10000);
  EXPECT_EQ(p.verdict, Verdict::fails);
  EXPECT_EQ(p.witness, 7u);

  const ClassVerdict l = check_b_bounded(RatioSpec::linear(1), parse_set_expr("evens", nullptr), 5, 100);
  EXPECT_EQ(l.verdict, Verdict::fails);
  EXPECT_EQ(l.witness, 6u);
}

TEST(StronglyNonDli, Examples) {
  const ClassVerdict p = check_strongly_non_dli(RatioSpec::power(2), 1, 30);
  EXPECT_EQ(p.verdict, Verdict::holds);
  EXPECT_EQ(p.density_bound, Rational(1, 2));

  const ClassVerdict c = check_strongly_non_dli(RatioSpec::constant(2), 1, 10);
  EXPECT_EQ(c.verdict, Verdict::fails);
  EXPECT_EQ(c.witness, 2u);

  const ClassVerdict p2 = check_strongly_non_dli(RatioSpec::power(2), 2, 30);
  EXPECT_EQ(p2.verdict, Verdict::fails);
  EXPECT_EQ(p2.witness, 2u);
}

TEST(StronglyNonDli, PowTwoIsStrictInequality) {
  // sum_{i<=n} 2^i = 2^{n+1} - 2, strictly below b_{n+1}.
  const ClassVerdict p = check_strongly_non_dli(RatioSpec::power(2), 1, 30);
  for (const TracePoint& t : p.trace) {
    const BigInt big = BigInt(1) << (t.n + 1);
    EXPECT_EQ(t.value, oracle::q(big, big - 2));
  }
}

TEST(WeaklyDli, Examples) {
  const ClassVerdict lin = check_weakly_dli_condition(RatioSpec::linear(1), 10000);
  EXPECT_EQ(lin.verdict, Verdict::holds);
  for (const TracePoint& t : lin.trace) EXPECT_EQ(t.value, oracle::q(2, t.n));

  EXPECT_EQ(check_weakly_dli_condition(RatioSpec::power(2), 1000).verdict, Verdict::fails);

  const ClassVerdict c = check_weakly_dli_condition(RatioSpec::constant(2), 1000);
  EXPECT_EQ(c.verdict, Verdict::holds);
  for (const TracePoint& t : c.trace) EXPECT_EQ(t.value, oracle::q(2, t.n));
}

TEST(CubeGap, Blocks) {
  EXPECT_EQ(cube_gap_block(1), (Interval{1, 2}));
  EXPECT_EQ(cube_gap_block(2), (Interval{3, 11}));
  EXPECT_EQ(cube_gap_block(3), (Interval{13, 40}));
  for (std::uint64_t j = 1; j < 20; ++j) {
    const Interval b = cube_gap_block(j);
    EXPECT_EQ(b.hi - b.lo, j * j * j);
    EXPECT_EQ(cube_gap_block(j + 1).lo - b.hi, j);
  }
}

TEST(DliCounterexample, JoinRatios) {
  const RatioSpec two = build_dli_counterexample(2);
  for (const BigInt& b : two.head()) EXPECT_EQ(b, 2);
  const RatioSpec three = build_dli_counterexample(3);
  std::vector<BigInt> joins;
  for (const BigInt& b : three.head()) {
    EXPECT_GE(b, 2);
    if (b != 2) joins.push_back(b);
  }
  EXPECT_EQ(joins, (std::vector<BigInt>{3}));
}

TEST(DliCounterexample, BoundariesAreBlockSet) {
  // n_k runs through K = U [g_j, h_j] in order.
  auto seq = DerivedSeq::make(RatioSpec::cube_gap_blocks());
  const NatSet k = cube_gap_set();
  std::uint64_t expect = 1;
  for (std::uint64_t idx = 0; idx < 200; ++idx) {
    while (!k.contains(expect)) ++expect;
    ASSERT_EQ(seq->boundary_index(idx), expect) << idx;
    ++expect;
  }
}

TEST(WitnessSet, Examples) {
  const WitnessSet two = weakly_dli_witness_set(RatioSpec::linear(1), 2);
  EXPECT_EQ(two.u, (std::vector<std::uint64_t>{1, 4}));
  EXPECT_TRUE(two.set.contains(2));
  EXPECT_TRUE(two.set.contains(5));

  const WitnessSet one = weakly_dli_witness_set(RatioSpec::power(3), 1);
  EXPECT_EQ(one.set.elements(), (std::vector<std::uint64_t>{2}));

  const WitnessSet five = weakly_dli_witness_set(RatioSpec::linear(1), 5);
  for (std::size_t j = 1; j < five.u.size(); ++j) EXPECT_GT(five.u[j], five.u[j - 1] + j + 1);
}

TEST(WitnessSet, RecursionByDirectSum) {
  const RatioSpec spec = RatioSpec::linear(1);
  auto seq = DerivedSeq::make(spec);
  const WitnessSet ws = weakly_dli_witness_set(spec, 8);
  for (std::size_t j = 1; j < ws.u.size(); ++j) {
    BigInt bound = 0;
    for (std::size_t i = 1; i <= j; ++i) {
      for (std::uint64_t t = 0; t <= i; ++t) {
        const std::int64_t idx = static_cast<std::int64_t>(ws.u[i - 1]) + 1 - static_cast<std::int64_t>(t);
        if (idx >= 1) bound += spec.term(idx) - 1;
      }
    }
    bound *= static_cast<unsigned long>(j);
    const std::uint64_t r = ws.u[j];
    EXPECT_GT(seq->boundary(r), bound);
    // Minimality: the previous admissible r fails.
    if (r - 1 > ws.u[j - 1] + j + 1) EXPECT_LE(seq->boundary(r - 1), bound) << j;
  }
}
