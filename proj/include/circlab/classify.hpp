#pragma once

// Finite-horizon checks of the sequence classes (b-bounded, strongly non dli
// criterion, weakly dli criterion) and the two named constructions: the
// cube-gap block sequence and the weakly-dli witness set {u_j + 1}.
//
// A limit condition can only hold or fail "at the horizon"; every verdict
// carries the trace it was read from.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "circlab/density.hpp"
#include "circlab/numeric.hpp"
#include "circlab/sequences.hpp"

namespace circlab {

enum class Verdict { holds, fails, inconclusive };

std::string to_string(Verdict v);

struct TracePoint {
  std::uint64_t n;
  Rational value;
};

struct ClassVerdict {
  std::string property;
  std::uint64_t horizon = 0;
  Verdict verdict = Verdict::inconclusive;
  std::optional<std::uint64_t> witness;  // first failing index
  std::string witness_detail;
  std::vector<TracePoint> trace;
  std::optional<Rational> density_bound;  // alpha / (alpha + 1) for snd
  std::vector<std::string> notes;
};

// b_n <= bound for every n in set ∩ [1, horizon].
ClassVerdict check_b_bounded(const RatioSpec& spec, const NatSet& set, const BigInt& bound, std::uint64_t horizon);

// b_{n+1} >= alpha (b_1 + ... + b_n) for every 1 <= n < horizon.
// Trace: b_{n+1} / (b_1 + ... + b_n).
ClassVerdict check_strongly_non_dli(const RatioSpec& spec, const Rational& alpha, std::uint64_t horizon);

// Trace r_n = b_n / sum_{i<=n} (b_i - 1), n <= horizon.
// holds: r_H < threshold and r non-increasing over the last decade [H/10, H].
// fails: r stays >= threshold over the last decade with r_H > r_{H/10} / 2.
ClassVerdict check_weakly_dli_condition(const RatioSpec& spec, std::uint64_t horizon,
                                        const Rational& threshold = Rational(1, 100));

// j-th block [g_j, h_j] (j >= 1) of K: g_1 = 1, h_j - g_j = j^3, g_{j+1} - h_j = j.
Interval cube_gap_block(std::uint64_t j);

// K = U_j [g_j, h_j].
NatSet cube_gap_set();

// Explicit ratios b_1..b_{s_jmax} with n_{s_jmax} = h_jmax, tail const:2.
RatioSpec build_dli_counterexample(std::uint64_t jmax);

struct WitnessSet {
  std::vector<std::uint64_t> u;  // u[j - 1] = u_j
  NatSet set;                    // {u_j + 1 : j <= jmax}
  std::vector<BigInt> bounds;    // bounds[j - 1]: the n_r threshold that selected u_{j+1}
  std::vector<std::string> flags;
};

// u_1 = 1, u_{j+1} = min{ r > u_j + j + 1 : n_r > j sum_{i<=j} sum_{t=0}^{i} (b_{u_i+1-t} - 1) }.
// Ratio indices <= 0 contribute 0 and are flagged. The search for r stops at
// scan_limit with HorizonExceeded.
WitnessSet weakly_dli_witness_set(const RatioSpec& spec, std::uint64_t jmax, std::uint64_t scan_limit = 1000000);

}  // namespace circlab
