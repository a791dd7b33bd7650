#pragma once

// Points of the circle group T = R/Z given by their canonical mixed-radix
// digits x = sum_n c_n / a_n (0 <= c_n <= b_n - 1, c_n < b_n - 1 infinitely
// often), and certified rational enclosures of {a_k x}, {d_i x} and ||d_i x||.
//
// No floating point is used for any bound.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "circlab/density.hpp"
#include "circlab/numeric.hpp"
#include "circlab/sequences.hpp"

namespace circlab {

// Exact enclosure [lo, hi] ⊆ [0, 1] of a fractional value.
struct BoundInterval {
  Rational lo;
  Rational hi;

  static BoundInterval make(Rational lo, Rational hi);  // validates 0 <= lo <= hi <= 1
  static BoundInterval point(const Rational& v) { return make(v, v); }

  Rational width() const { return hi - lo; }
  bool is_point() const { return lo == hi; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool within(const BoundInterval& outer) const { return outer.lo <= lo && hi <= outer.hi; }
  std::string to_string() const;  // "lo,hi"

  friend bool operator==(const BoundInterval&, const BoundInterval&) = default;
};

class CirclePoint {
 public:
  // c_n from (n, b_n). Canonicality of such rules is attested by the caller.
  using DigitFn = std::function<BigInt(std::uint64_t, const BigInt&)>;

  enum class RuleKind { prefix, ones_on, max_on, periodic, floor_div, custom };

  // digits[n-1] = c_n, zero beyond.
  static CirclePoint finite_digits(std::shared_ptr<const DerivedSeq> seq, std::vector<BigInt> digits);
  // Known prefix; digits after it are zero when zero_tail, unknown otherwise.
  static CirclePoint prefix_digits(std::shared_ptr<const DerivedSeq> seq, std::vector<BigInt> digits, bool zero_tail,
                                   std::string origin);
  // c_n = 1 on the set, 0 elsewhere.
  static CirclePoint ones_on(std::shared_ptr<const DerivedSeq> seq, NatSet set);
  // c_n = b_n - 1 on the set, 0 elsewhere.
  static CirclePoint max_on(std::shared_ptr<const DerivedSeq> seq, NatSet set);
  // c_n = pattern[(n - 1) mod p].
  static CirclePoint periodic(std::shared_ptr<const DerivedSeq> seq, std::vector<BigInt> pattern);
  // c_n = floor(b_n / m_n) for listed n, 0 elsewhere.
  static CirclePoint floor_div(std::shared_ptr<const DerivedSeq> seq, std::map<std::uint64_t, BigInt> divisors);
  static CirclePoint custom(std::shared_ptr<const DerivedSeq> seq, DigitFn fn, Extent support_extent,
                            std::optional<std::uint64_t> support_max, std::string label);

  const DerivedSeq& seq() const;
  const std::shared_ptr<const DerivedSeq>& seq_ptr() const;
  RuleKind rule_kind() const;

  // c_n, validated against [0, b_n - 1]. Throws HorizonExceeded for unknown digits.
  BigInt digit(std::uint64_t n) const;
  // Digits after this index are unknown; nullopt when every digit is known.
  std::optional<std::uint64_t> known_prefix() const;
  // Largest support index when the support is declared finite (0 for x = 0).
  std::optional<std::uint64_t> finite_support_max() const;
  Extent support_extent() const;
  // True for opaque rules whose canonicality is the caller's declaration.
  bool canonicality_attested() const;
  // Source rational when the point came from digits_from_rational.
  std::optional<Rational> source_value() const;

  // Digit-rule mini-language (`rat:5/24`, `finite:[0,1,1]`, `ones-on:evens`, ...).
  std::string describe() const;

  struct Impl;

 private:
  friend CirclePoint digits_from_rational(const Rational& x, std::shared_ptr<const DerivedSeq> seq,
                                          std::uint64_t horizon);

  explicit CirclePoint(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  static CirclePoint build(std::shared_ptr<Impl> impl);

  std::shared_ptr<const Impl> impl_;
};

// Greedy digit extraction with exact remainders: c_n = floor(b_n y_{n-1}),
// y_n = b_n y_{n-1} - c_n = {a_n x}. A zero remainder within the horizon gives
// a declared finite support; otherwise digits past the horizon are unknown.
CirclePoint digits_from_rational(const Rational& x, std::shared_ptr<const DerivedSeq> seq, std::uint64_t horizon);

// supp(x) = {n : c_n != 0}, or supp_q(x) = {n : c_n = b_n - 1} when quasi.
NatSet support(const CirclePoint& x, std::uint64_t horizon, bool quasi);

// Enclosure of {a_{n-1} x} from digits c_n..c_{n+t}:
// [S, S + 1/(b_n...b_{n+t})] with S the partial sum. Uses ratios only.
BoundInterval frac_bound(const CirclePoint& x, std::uint64_t n, std::uint64_t t);

// Exact {a_{n-1} x} when the support is declared finite.
std::optional<Rational> exact_frac(const CirclePoint& x, std::uint64_t n);

// Certified upper bound on sum_{i>=j} c_i / a_i from a depth-t window.
Rational tail_upper_bound(const CirclePoint& x, std::uint64_t j, std::uint64_t t);

// Enclosure of min(y, 1 - y) over y in J.
BoundInterval norm_bound(const BoundInterval& j);

// Reduces the real interval [lo, hi] (half-open at hi unless a point) modulo 1.
// nullopt when it straddles an integer.
std::optional<BoundInterval> reduce_mod_one(const Rational& lo, const Rational& hi);

// Enclosure of {r y} for y in J.
std::optional<BoundInterval> scale_frac(const BoundInterval& j, const BigInt& r);

// Default refinement cap for derived enclosures; CIRCLAB_DEPTH_CAP overrides 64.
std::uint64_t default_depth_cap();

struct DerivedEnclosure {
  std::uint64_t index = 0;
  std::uint64_t k = 0;
  std::uint64_t r = 0;
  BoundInterval frac;  // [0, 1] when undecided
  bool decided = false;
  bool exact = false;
  std::uint64_t depth = 0;  // depth that decided the row (or the cap)
};

// Evaluates {d_i x} for many i, caching the block enclosures of {a_k x}.
// An enclosure that straddles an integer after scaling by r is refined by
// doubling the depth up to the cap, then reported undecided.
class MultipleEvaluator {
 public:
  MultipleEvaluator(CirclePoint x, std::uint64_t depth, std::uint64_t cap);

  DerivedEnclosure at(std::uint64_t i);
  // {d_i x} at exactly depth t; nullopt when the scaled block straddles an integer.
  std::optional<BoundInterval> at_depth(std::uint64_t i, std::uint64_t t);
  // Largest usable depth for block k (the cap, or what a finite digit prefix allows).
  std::uint64_t max_depth(std::uint64_t k) const;
  std::uint64_t depth() const noexcept { return depth_; }
  std::uint64_t cap() const noexcept { return cap_; }
  // Enclosure of {a_k x} at depth t (exact for finite support points).
  BoundInterval block(std::uint64_t k, std::uint64_t t);

  const CirclePoint& point() const noexcept { return x_; }

 private:
  CirclePoint x_;
  std::uint64_t depth_;
  std::uint64_t cap_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, BoundInterval> blocks_;
  std::unordered_map<std::uint64_t, Rational> exact_;
};

DerivedEnclosure derived_frac_bound(const CirclePoint& x, std::uint64_t i, std::uint64_t t,
                                    std::uint64_t cap = default_depth_cap());

}  // namespace circlab
