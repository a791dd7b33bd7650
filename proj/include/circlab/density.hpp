#pragma once

// Subsets of N = {1, 2, ...}, prefix densities over [1, N], and the lifting
// map L(A) = U_{k in A} [n_{k-1}, n_k - 1] onto derived-sequence indices.
//
// Density prefixes are [1, N]. The classical [0, N-1] convention differs by an
// O(1/N) boundary term that never changes a zero/positive verdict.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "circlab/numeric.hpp"
#include "circlab/sequences.hpp"

namespace circlab {

// Closed integer interval [lo, hi], lo >= 1.
struct Interval {
  std::uint64_t lo;
  std::uint64_t hi;

  std::uint64_t size() const noexcept { return hi - lo + 1; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// What is known about the size of a set or of its complement.
enum class Extent { finite, cofinite, infinite_coinfinite, unknown };

std::string to_string(Extent e);

class NatSet {
 public:
  using Predicate = std::function<bool(std::uint64_t)>;
  // j-th interval (j >= 0) of an infinite, sorted, pairwise disjoint family.
  using IntervalRule = std::function<Interval(std::uint64_t)>;

  NatSet();  // empty set

  static NatSet finite(std::vector<std::uint64_t> elements);
  static NatSet intervals(std::vector<Interval> parts);
  // Membership is only defined for n <= horizon (nullopt = every n).
  static NatSet predicate(Predicate test, std::optional<std::uint64_t> horizon, Extent extent, std::string label);
  static NatSet interval_rule(IntervalRule nth, Extent extent, std::string label);

  // Finite interval union held explicitly.
  bool is_materialized() const noexcept { return form_ == Form::intervals; }
  const std::vector<Interval>& parts() const;
  std::vector<std::uint64_t> elements() const;
  std::optional<std::uint64_t> max_element() const;
  bool empty() const;

  std::optional<std::uint64_t> horizon() const noexcept { return horizon_; }
  Extent extent() const noexcept { return extent_; }

  bool contains(std::uint64_t n) const;
  // |S ∩ [1, N]|
  std::uint64_t count_upto(std::uint64_t n) const;
  // S ∩ [1, N] as a sorted disjoint interval list.
  std::vector<Interval> restrict_to(std::uint64_t n) const;

  std::string to_string() const;

  // Exact equality; both sides must be materialized.
  friend bool operator==(const NatSet& a, const NatSet& b);

 private:
  enum class Form { intervals, predicate, rule };

  void require_within(std::uint64_t n) const;

  Form form_ = Form::intervals;
  std::shared_ptr<const std::vector<Interval>> parts_;
  Predicate test_;
  IntervalRule rule_;
  std::optional<std::uint64_t> horizon_;
  Extent extent_ = Extent::finite;
  std::string label_;
};

// Set-expression text: `ivl:[a,b]+...` or `fin:{}` when materialized, else the label.
std::string expression(const NatSet& set);

// Sorts and merges overlapping or adjacent intervals.
std::vector<Interval> normalize(std::vector<Interval> parts);

struct DensityEstimate {
  std::uint64_t horizon = 0;
  std::uint64_t in_count = 0;
  std::uint64_t out_count = 0;
  std::uint64_t undecided_count = 0;

  // Validates in + out + undecided = horizon, horizon >= 1.
  static DensityEstimate make(std::uint64_t horizon, std::uint64_t in, std::uint64_t out, std::uint64_t undecided);

  Rational lower() const;  // in / N
  Rational upper() const;  // (in + undecided) / N
};

// Exact |S ∩ [1, N]| / N. Throws HorizonExceeded when N passes the set horizon.
DensityEstimate prefix_density(const NatSet& set, std::uint64_t n);

// L(S) = U_{k in S} [n_{k-1}, n_k - 1].
NatSet lift(const NatSet& set, const std::shared_ptr<const DerivedSeq>& seq);

// S - m = {a - m : a in S, a - m >= 1}.
NatSet translate(const NatSet& set, std::uint64_t m);

enum class SetOp { unite, intersect, subtract };

// Exact set operation. Horizon of the result is the smaller horizon.
NatSet set_algebra(SetOp op, const NatSet& a, const NatSet& b);

}  // namespace circlab
