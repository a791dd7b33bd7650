#include <random>

#include <gtest/gtest.h>

#include "circlab/circle.hpp"
#include "circlab/error.hpp"
#include "circlab/parse.hpp"
#include "oracles.hpp"

using namespace circlab;

namespace {

std::shared_ptr<const DerivedSeq> make(const char* spec) { return DerivedSeq::make(parse_ratio_spec(spec)); }

std::vector<BigInt> digits_of(const CirclePoint& x, std::uint64_t len) {
  std::vector<BigInt> out;
  for (std::uint64_t n = 1; n <= len; ++n) out.push_back(x.digit(n));
  return out;
}

}  // namespace

TEST(Digits, Examples) {
  auto seq = make("linear:1");
  const CirclePoint half = digits_from_rational(Rational(1, 2), seq, 64);
  EXPECT_EQ(digits_of(half, 4), (std::vector<BigInt>{1, 0, 0, 0}));
  EXPECT_EQ(half.finite_support_max(), 1u);
  const CirclePoint x = digits_from_rational(Rational(5, 24), seq, 64);
  EXPECT_EQ(digits_of(x, 5), (std::vector<BigInt>{0, 1, 1, 0, 0}));
  EXPECT_EQ(Rational(1, 6) + Rational(1, 24), Rational(5, 24));
  const CirclePoint zero = digits_from_rational(Rational(0), seq, 64);
  EXPECT_EQ(digits_of(zero, 6), std::vector<BigInt>(6, 0));
}

TEST(Digits, AgreeWithGreedyOracle) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<unsigned long> den(2, 100000);
  for (auto [spec, fn] : {std::pair{"linear:1", oracle::RatioFn(oracle::linear1)},
                          std::pair{"pow:2", oracle::RatioFn(oracle::pow2)}}) {
    auto seq = make(spec);
    for (int s = 0; s < 50; ++s) {
      const unsigned long q = den(rng);
      const unsigned long p = std::uniform_int_distribution<unsigned long>(0, q - 1)(rng);
            const Rational v = oracle::q(p, q);
      const CirclePoint x = digits_from_rational(v, seq, 20);
      const auto want = oracle::greedy_digits(v, fn, 20);
      EXPECT_EQ(digits_of(x, 20), want) << spec << " " << p << "/" << q;
    }
  }
}

TEST(Digits, UnknownTailBeyondHorizon) {
  const CirclePoint x = digits_from_rational(Rational(1, 7), make("const:2"), 10);
  EXPECT_EQ(x.known_prefix(), 10u);
  EXPECT_THROW(x.digit(11), HorizonExceeded);
}

TEST(Digits, RejectsOutOfRange) {
  EXPECT_THROW(digits_from_rational(Rational(1), make("linear:1"), 8), PreconditionError);
  EXPECT_THROW(CirclePoint::finite_digits(make("linear:1"), {2}), PreconditionError);
}

TEST(Digits, NonCanonicalRuleRejected) {
  auto seq = make("linear:1");
  EXPECT_THROW(CirclePoint::max_on(seq, parse_set_expr("all", seq)), PreconditionError);
  EXPECT_THROW(CirclePoint::periodic(make("const:2"), {1}), PreconditionError);
}

TEST(Support, Examples) {
  auto seq = make("linear:1");
  EXPECT_EQ(support(digits_from_rational(Rational(5, 24), seq, 64), 10, false).elements(),
            (std::vector<std::uint64_t>{2, 3}));
  EXPECT_TRUE(support(digits_from_rational(Rational(0), seq, 64), 10, false).empty());
}

TEST(FracBound, Examples) {
  auto seq = make("linear:1");
  const CirclePoint x = digits_from_rational(Rational(5, 24), seq, 64);
  const BoundInterval b = frac_bound(x, 2, 1);
  EXPECT_EQ(b.lo, Rational(5, 12));
  EXPECT_EQ(b.hi, Rational(5, 12) + Rational(1, 12));
  EXPECT_EQ(exact_frac(x, 2), Rational(5, 12));

  const CirclePoint zero = digits_from_rational(Rational(0), seq, 64);
  const BoundInterval z = frac_bound(zero, 3, 2);
  EXPECT_EQ(z.lo, 0);
  EXPECT_EQ(z.hi, Rational(1, 4 * 5 * 6));
}

TEST(FracBound, WidthShrinksByNextRatio) {
  auto seq = make("pow:2");
  const CirclePoint x = CirclePoint::periodic(seq, {1, 0});
  for (std::uint64_t n = 1; n <= 6; ++n) {
    for (std::uint64_t t = 0; t < 6; ++t) {
      EXPECT_EQ(frac_bound(x, n, t).width(), frac_bound(x, n, t + 1).width() * Rational(seq->ratio(n + t + 1)));
    }
  }
}

TEST(FracBound, ContainsExactValue) {
  auto seq = make("linear:1");
  const Rational v(3141, 10007);
  const CirclePoint x = digits_from_rational(v, seq, 60);
  for (std::uint64_t n = 1; n <= 20; ++n) {
    const Rational exact = oracle::frac(Rational(seq->base().term(n - 1)) * v);
    for (std::uint64_t t = 0; t <= 8; ++t) EXPECT_TRUE(frac_bound(x, n, t).contains(exact)) << n << "," << t;
  }
}

TEST(TailBound, AtMostReciprocalTerm) {
  auto seq = make("linear:1");
  const CirclePoint x = digits_from_rational(Rational(999, 1000), seq, 64);
  for (std::uint64_t j = 1; j <= 30; ++j) {
    EXPECT_LE(tail_upper_bound(x, j, 8) * Rational(seq->base().term(j - 1)), 1);
  }
}

TEST(NormBound, Examples) {
  auto b = [](Rational lo, Rational hi) { return norm_bound(BoundInterval::make(lo, hi)); };
  EXPECT_EQ(b(Rational(5, 12), Rational(5, 12)), BoundInterval::point(Rational(5, 12)));
  EXPECT_EQ(b(Rational(3, 4), Rational(3, 4)), BoundInterval::point(Rational(1, 4)));
  EXPECT_EQ(b(Rational(2, 5), Rational(3, 5)), BoundInterval::make(Rational(2, 5), Rational(1, 2)));
}

TEST(NormBound, BracketsSampledPoints) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> pick(0, 1000);
  for (int s = 0; s < 200; ++s) {
    long a = pick(rng), c = pick(rng);
    if (a > c) std::swap(a, c);
    const BoundInterval j = BoundInterval::make(oracle::q(a, 1000), oracle::q(c, 1000));
    const BoundInterval nb = norm_bound(j);
    for (long y = a; y <= c; y += 7) EXPECT_TRUE(nb.contains(oracle::norm(oracle::q(y, 1000))));
  }
}

TEST(ReduceModOne, StraddleAndShift) {
  EXPECT_FALSE(reduce_mod_one(Rational(3, 4), Rational(5, 4)).has_value());
  const auto r = reduce_mod_one(Rational(9, 4), Rational(5, 2));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->lo, Rational(1, 4));
  EXPECT_EQ(r->hi, Rational(1, 2));
  // Upper end is open: [1/2, 1) reduces to [1/2, 1].
  EXPECT_TRUE(reduce_mod_one(Rational(1, 2), Rational(1)).has_value());
}

TEST(Derived, Examples) {
  auto seq = make("linear:1");
  const CirclePoint x = digits_from_rational(Rational(1, 24), seq, 64);
  const DerivedEnclosure e = derived_frac_bound(x, 5, 8);
  EXPECT_EQ(seq->term(5), 12);
  EXPECT_EQ(e.frac, BoundInterval::point(Rational(1, 2)));

  const CirclePoint y = digits_from_rational(Rational(5, 24), seq, 64);
  EXPECT_EQ(derived_frac_bound(y, 2, 8).frac, BoundInterval::point(Rational(5, 12)));
}

TEST(Derived, FiniteSupportVanishesFromBoundary) {
  auto seq = make("pow:2");
  const CirclePoint x = CirclePoint::finite_digits(seq, {1, 3, 0, 9});
  MultipleEvaluator eval(x, 8, 64);
  for (std::uint64_t i = seq->boundary_index(4); i < 3000; ++i) {
    const DerivedEnclosure e = eval.at(i);
    ASSERT_TRUE(e.exact);
    ASSERT_EQ(e.frac, BoundInterval::point(0)) << i;
  }
}

TEST(Derived, EnclosuresContainExactValues) {
  auto seq = make("linear:1");
  const Rational v(1234567, 7654321);
  const CirclePoint x = digits_from_rational(v, seq, 64);
  MultipleEvaluator eval(x, 8, 40);
  for (std::uint64_t i = 1; i <= 2000; ++i) {
    const DerivedEnclosure e = eval.at(i);
    if (e.decided) ASSERT_TRUE(e.frac.contains(oracle::frac(Rational(seq->term(i)) * v))) << i;
  }
}

TEST(Derived, RefinementIsMonotone) {
  auto seq = make("pow:2");
  const CirclePoint x = CirclePoint::periodic(seq, {1, 0, 1});
  MultipleEvaluator eval(x, 1, 64);
  for (std::uint64_t i = 1; i <= 500; ++i) {
    std::optional<BoundInterval> prev;
    for (std::uint64_t t = 1; t <= 32; t *= 2) {
      const auto cur = eval.at_depth(i, t);
      if (prev) {
        ASSERT_TRUE(cur.has_value()) << "decided row became undecided at i=" << i;
        ASSERT_TRUE(cur->within(*prev));
      }
      prev = cur;
    }
  }
}

TEST(DepthCap, EnvironmentOverride) {
  ::setenv("CIRCLAB_DEPTH_CAP", "17", 1);
  EXPECT_EQ(default_depth_cap(), 17u);
  ::unsetenv("CIRCLAB_DEPTH_CAP");
  EXPECT_EQ(default_depth_cap(), 64u);
}
