#pragma once

// Membership in t_(d_n)(T) for finite supports, and finite-horizon scans of
// E_eps = {i <= N : ||d_i x|| >= eps} as evidence about t^s_(d_n)(T).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "circlab/circle.hpp"
#include "circlab/density.hpp"
#include "circlab/numeric.hpp"

namespace circlab {

enum class MemberVerdict { member, non_member_by_citation, inconclusive };

std::string to_string(MemberVerdict v);

struct MembershipResult {
  MemberVerdict verdict = MemberVerdict::inconclusive;
  // {d_i x} = 0 for every i >= cutoff (member only).
  std::optional<std::uint64_t> cutoff;
  // Infinite support => non-member rests on an external result and is flagged.
  bool citation_dependent = false;
  std::string note;
};

// supp(x) ⊆ [1, m] gives cutoff n_m, since a_k x is an integer for k >= m.
MembershipResult finite_support_member(const CirclePoint& x);

enum class RowClass { in, out, undecided };

struct ScanRow {
  std::uint64_t horizon;
  DensityEstimate estimate;
};

struct ScanResult {
  Rational eps;
  std::uint64_t depth = 0;
  std::uint64_t cap = 0;
  std::vector<ScanRow> rows;
  std::vector<std::uint64_t> undecided_indices;  // up to the largest horizon
};

// Classifies ||d_i x|| against eps from certified enclosures, doubling the
// depth up to the cap before giving up on a row.
RowClass classify_row(MultipleEvaluator& eval, std::uint64_t i, const Rational& eps);

// threads = 0 picks the hardware concurrency. Counts do not depend on it.
// classes, when given, receives the class of every i <= max horizon (index i - 1).
ScanResult statistical_scan(const CirclePoint& x, const Rational& eps, const std::vector<std::uint64_t>& horizons,
                            std::uint64_t depth, std::uint64_t cap = default_depth_cap(), unsigned threads = 1,
                            std::vector<RowClass>* classes = nullptr);

enum class Trend { evidence_for, evidence_against, inconclusive };

std::string to_string(Trend t);

struct TrendVerdict {
  Trend trend = Trend::inconclusive;
  std::string reason;
};

// In order: any horizon with more than half its rows undecided -> inconclusive;
// upper bounds non-increasing over the later half, last <= 1/4 of the overall
// max -> evidence-for;
// max lower bound over the later half of the horizons positive and >= 1/4 of
// the overall max -> evidence-against.
TrendVerdict convergence_verdict(const ScanResult& scan);

}  // namespace circlab
