#pragma once

// Arithmetic sequences a_k = b_1 * ... * b_k built from a ratio rule, and the
// derived sequence d_i enumerating every r * a_k with 1 <= r < b_{k+1}.
//
// Index origins: b_n and d_i start at 1; a_k and the block boundaries n_k
// start at 0 with a_0 = 1 and n_0 = 1.

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "circlab/numeric.hpp"

namespace circlab {

// Rule producing the ratio sequence (b_n), n >= 1. Every rule yields b_n >= 2;
// parameters that would break this are rejected at construction.
class RatioSpec {
 public:
  enum class Kind { constant, linear, power, explicit_list, cube_gap_blocks };

  static RatioSpec constant(const BigInt& value);  // b_n = value
  static RatioSpec linear(const BigInt& offset);   // b_n = n + offset
  static RatioSpec power(const BigInt& base);      // b_n = base^n
  // b_n = head[n-1] for n <= head.size(), then tail.term(n).
  static RatioSpec explicit_list(std::vector<BigInt> head, const RatioSpec& tail);
  // Ratios realizing the block set K = U [g_j, h_j] with h_j - g_j = j^3 and
  // g_{j+1} - h_j = j: b_n = 2 inside blocks and j + 1 at the j-th join.
  static RatioSpec cube_gap_blocks();

  Kind kind() const noexcept { return kind_; }
  BigInt term(std::uint64_t n) const;

  const std::vector<BigInt>& head() const;  // explicit_list only
  const RatioSpec& tail() const;            // explicit_list only
  const BigInt& parameter() const noexcept { return param_; }

  // Mini-language form (`const:2`, `linear:1`, `pow:2`, `list:2,3|const:2`, `dlictrex`).
  std::string to_string() const;

 private:
  RatioSpec(Kind kind, BigInt param) : kind_(kind), param_(std::move(param)) {}

  Kind kind_;
  BigInt param_;
  std::shared_ptr<const std::vector<BigInt>> head_;
  std::shared_ptr<const RatioSpec> tail_;
};

// b_n of the cube-gap block construction.
BigInt cube_gap_ratio(std::uint64_t n);

// Memoized (a_k) and (b_n). Logically immutable: memo fills are idempotent and
// guarded, so concurrent readers see identical values.
class ArithSeq {
 public:
  explicit ArithSeq(RatioSpec spec);

  const RatioSpec& spec() const noexcept { return spec_; }

  // b_n, n >= 1.
  const BigInt& ratio(std::uint64_t n) const;
  // a_k, k >= 0.
  const BigInt& term(std::uint64_t k) const;

 private:
  const BigInt& ratio_locked(std::uint64_t n) const;

  RatioSpec spec_;
  mutable std::mutex mu_;
  mutable std::deque<BigInt> ratios_;  // ratios_[n - 1] = b_n
  mutable std::deque<BigInt> terms_;   // terms_[k] = a_k
};

struct IndexPair {
  std::uint64_t k;  // block: d_i = r * a_k
  std::uint64_t r;  // multiplier in [1, b_{k+1} - 1]
};

class DerivedSeq {
 public:
  explicit DerivedSeq(std::shared_ptr<const ArithSeq> base);
  static std::shared_ptr<const DerivedSeq> make(const RatioSpec& spec);

  const ArithSeq& base() const noexcept { return *base_; }
  const RatioSpec& spec() const noexcept { return base_->spec(); }
  const BigInt& ratio(std::uint64_t n) const { return base_->ratio(n); }

  // n_k = 1 + sum_{j<=k} (b_j - 1).
  const BigInt& boundary(std::uint64_t k) const;
  // n_k as a machine index; throws PreconditionError on overflow.
  std::uint64_t boundary_index(std::uint64_t k) const;

  // Unique (k, r) with n_k <= i < n_{k+1}, r = i - n_k + 1.
  IndexPair decompose(std::uint64_t i) const;

  // d_i, i >= 1.
  BigInt term(std::uint64_t i) const;

 private:
  // Both require mu_ held.
  void extend_to_cover(std::uint64_t i) const;
  void push_next_bound() const;

  std::shared_ptr<const ArithSeq> base_;
  mutable std::mutex mu_;
  mutable std::deque<BigInt> bounds_;
  // Saturated copy of bounds_ for binary search on machine indices.
  mutable std::vector<std::uint64_t> fast_bounds_;
};

}  // namespace circlab
