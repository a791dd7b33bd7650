#include "circlab/circle.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>

#include "circlab/error.hpp"

namespace circlab {

namespace {

constexpr std::uint64_t kCanonicalWindow = 64;

std::string digits_to_string(const std::vector<BigInt>& digits) {
  std::string out = "[";
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i) out += ',';
    out += digits[i].get_str();
  }
  return out + "]";
}

}  // namespace

BoundInterval BoundInterval::make(Rational lo, Rational hi) {
  lo.canonicalize();
  hi.canonicalize();
  if (lo < 0 || hi > 1 || lo > hi) {
    throw PreconditionError("invalid enclosure [" + lo.get_str() + "," + hi.get_str() + "]");
  }
  return BoundInterval{std::move(lo), std::move(hi)};
}

std::string BoundInterval::to_string() const { return lo.get_str() + "," + hi.get_str(); }

struct CirclePoint::Impl {
  std::shared_ptr<const DerivedSeq> seq;
  RuleKind kind = RuleKind::prefix;
  std::vector<BigInt> digits;  // prefix digits or periodic pattern
  bool zero_tail = true;
  NatSet set;
  std::map<std::uint64_t, BigInt> divisors;
  DigitFn fn;
  Extent extent = Extent::finite;
  std::optional<std::uint64_t> support_max;
  std::optional<Rational> source;
  std::string label;

  mutable std::mutex mu;
  mutable std::unordered_map<std::uint64_t, BigInt> cache;

  BigInt raw_digit(std::uint64_t n) const {
    switch (kind) {
      case RuleKind::prefix:
        if (n <= digits.size()) return digits[n - 1];
        if (zero_tail) return BigInt(0);
        throw HorizonExceeded("digit c_" + std::to_string(n) + " is beyond the declared prefix of length " +
                              std::to_string(digits.size()) + " for " + label + "; raise the digit horizon");
      case RuleKind::ones_on:
        return set.contains(n) ? BigInt(1) : BigInt(0);
      case RuleKind::max_on:
        return set.contains(n) ? BigInt(seq->ratio(n) - 1) : BigInt(0);
      case RuleKind::periodic:
        return digits[(n - 1) % digits.size()];
      case RuleKind::floor_div: {
        auto it = divisors.find(n);
        if (it == divisors.end()) return BigInt(0);
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), seq->ratio(n).get_mpz_t(), it->second.get_mpz_t());
        return q;
      }
      case RuleKind::custom:
        return fn(n, seq->ratio(n));
    }
    return BigInt(0);
  }

  BigInt digit(std::uint64_t n) const {
    if (n == 0) throw PreconditionError("digit index starts at 1");
    const bool cached = kind != RuleKind::prefix && kind != RuleKind::periodic;
    if (cached) {
      std::lock_guard<std::mutex> lock(mu);
      auto it = cache.find(n);
      if (it != cache.end()) return it->second;
    }
    BigInt c = raw_digit(n);
    const BigInt& b = seq->ratio(n);
    if (c < 0 || c > b - 1) {
      throw PreconditionError("digit c_" + std::to_string(n) + " = " + c.get_str() + " outside [0, b_n - 1 = " +
                              BigInt(b - 1).get_str() + "]");
    }
    if (cached) {
      std::lock_guard<std::mutex> lock(mu);
      cache.emplace(n, c);
    }
    return c;
  }
};

CirclePoint CirclePoint::build(std::shared_ptr<Impl> impl) {
  if (!impl->seq) throw PreconditionError("circle point needs a sequence");
  // Closed-form rules: reject an all-maximal window, the detectable face of a
  // non-canonical (eventually b_n - 1) expansion.
  const bool closed_form = impl->kind == RuleKind::ones_on || impl->kind == RuleKind::max_on ||
                           impl->kind == RuleKind::periodic;
  if (closed_form) {
    std::uint64_t w = kCanonicalWindow;
    if (impl->set.horizon() && (impl->kind != RuleKind::periodic)) w = std::min(w, *impl->set.horizon() / 2);
    if (w >= 1) {
      bool all_max = true;
      for (std::uint64_t n = w + 1; n <= 2 * w; ++n) {
        if (impl->digit(n) != impl->seq->ratio(n) - 1) {
          all_max = false;
          break;
        }
      }
      if (all_max) {
        throw PreconditionError("non-canonical digit rule " + impl->label +
                                ": c_n = b_n - 1 on the whole check window [" + std::to_string(w + 1) + "," +
                                std::to_string(2 * w) + "]");
      }
    }
  }
  return CirclePoint(std::move(impl));
}

CirclePoint CirclePoint::finite_digits(std::shared_ptr<const DerivedSeq> seq, std::vector<BigInt> digits) {
  const std::string label = "finite:" + digits_to_string(digits);
  return prefix_digits(std::move(seq), std::move(digits), true, label);
}

CirclePoint CirclePoint::prefix_digits(std::shared_ptr<const DerivedSeq> seq, std::vector<BigInt> digits,
                                       bool zero_tail, std::string origin) {
  auto impl = std::make_shared<Impl>();
  impl->seq = std::move(seq);
  impl->kind = RuleKind::prefix;
  impl->zero_tail = zero_tail;
  impl->label = origin.empty() ? "finite:" + digits_to_string(digits) : std::move(origin);
  if (zero_tail) {
    while (!digits.empty() && digits.back() == 0) digits.pop_back();
    impl->extent = Extent::finite;
    impl->support_max = digits.size();
  } else {
    impl->extent = Extent::unknown;
  }
  impl->digits = std::move(digits);
  // Validate every explicit digit eagerly.
  for (std::uint64_t n = 1; n <= impl->digits.size(); ++n) impl->digit(n);
  return build(std::move(impl));
}

CirclePoint CirclePoint::ones_on(std::shared_ptr<const DerivedSeq> seq, NatSet set) {
  auto impl = std::make_shared<Impl>();
  impl->seq = std::move(seq);
  impl->kind = RuleKind::ones_on;
  impl->extent = set.extent();
  if (set.is_materialized()) impl->support_max = set.max_element().value_or(0);
  impl->label = "ones-on:" + expression(set);
  impl->set = std::move(set);
  return build(std::move(impl));
}

CirclePoint CirclePoint::max_on(std::shared_ptr<const DerivedSeq> seq, NatSet set) {
  auto impl = std::make_shared<Impl>();
  impl->seq = std::move(seq);
  impl->kind = RuleKind::max_on;
  impl->extent = set.extent();
  if (set.is_materialized()) impl->support_max = set.max_element().value_or(0);
  impl->label = "max-on:" + expression(set);
  impl->set = std::move(set);
  return build(std::move(impl));
}

CirclePoint CirclePoint::periodic(std::shared_ptr<const DerivedSeq> seq, std::vector<BigInt> pattern) {
  if (pattern.empty()) throw PreconditionError("periodic digit pattern is empty");
  auto impl = std::make_shared<Impl>();
  impl->seq = std::move(seq);
  impl->kind = RuleKind::periodic;
  const bool any_zero = std::any_of(pattern.begin(), pattern.end(), [](const BigInt& c) { return c == 0; });
  const bool all_zero = std::all_of(pattern.begin(), pattern.end(), [](const BigInt& c) { return c == 0; });
  impl->extent = all_zero ? Extent::finite : any_zero ? Extent::infinite_coinfinite : Extent::cofinite;
  if (all_zero) impl->support_max = 0;
  impl->label = "periodic:" + digits_to_string(pattern);
  impl->digits = std::move(pattern);
  return build(std::move(impl));
}

CirclePoint CirclePoint::floor_div(std::shared_ptr<const DerivedSeq> seq, std::map<std::uint64_t, BigInt> divisors) {
  auto impl = std::make_shared<Impl>();
  impl->seq = std::move(seq);
  impl->kind = RuleKind::floor_div;
  impl->extent = Extent::finite;
  std::string label = "floor-div:m={";
  std::uint64_t top = 0;
  bool first = true;
  for (const auto& [n, m] : divisors) {
    if (n == 0) throw PreconditionError("floor-div index starts at 1");
    if (m < 1) throw PreconditionError("floor-div divisor must be positive");
    if (!first) label += ',';
    first = false;
    label += std::to_string(n) + ":" + m.get_str();
  }
  impl->label = label + "}";
  impl->divisors = std::move(divisors);
  for (const auto& [n, m] : impl->divisors) {
    if (impl->digit(n) != 0) top = std::max(top, n);
  }
  impl->support_max = top;
  return build(std::move(impl));
}

CirclePoint CirclePoint::custom(std::shared_ptr<const DerivedSeq> seq, DigitFn fn, Extent support_extent,
                                std::optional<std::uint64_t> support_max, std::string label) {
  if (!fn) throw PreconditionError("custom digit rule needs a function");
  if (support_max && support_extent != Extent::finite) {
    throw PreconditionError("a declared support bound requires a finite support");
  }
  auto impl = std::make_shared<Impl>();
  impl->seq = std::move(seq);
  impl->kind = RuleKind::custom;
  impl->fn = std::move(fn);
  impl->extent = support_extent;
  impl->support_max = support_max;
  impl->label = std::move(label);
  return build(std::move(impl));
}

const DerivedSeq& CirclePoint::seq() const { return *impl_->seq; }
const std::shared_ptr<const DerivedSeq>& CirclePoint::seq_ptr() const { return impl_->seq; }
CirclePoint::RuleKind CirclePoint::rule_kind() const { return impl_->kind; }
BigInt CirclePoint::digit(std::uint64_t n) const { return impl_->digit(n); }

std::optional<std::uint64_t> CirclePoint::known_prefix() const {
  if (impl_->kind == RuleKind::prefix && !impl_->zero_tail) return impl_->digits.size();
  return std::nullopt;
}

std::optional<std::uint64_t> CirclePoint::finite_support_max() const { return impl_->support_max; }
Extent CirclePoint::support_extent() const { return impl_->extent; }
bool CirclePoint::canonicality_attested() const { return impl_->kind == RuleKind::custom; }
std::optional<Rational> CirclePoint::source_value() const { return impl_->source; }
std::string CirclePoint::describe() const { return impl_->label; }

CirclePoint digits_from_rational(const Rational& x, std::shared_ptr<const DerivedSeq> seq, std::uint64_t horizon) {
  if (x < 0 || x >= 1) throw PreconditionError("rational " + x.get_str() + " is outside [0, 1)");
  if (horizon == 0) throw PreconditionError("digit horizon must be >= 1");
  std::vector<BigInt> digits;
  Rational y = x;
  y.canonicalize();
  bool terminated = y == 0;
  for (std::uint64_t n = 1; n <= horizon && !terminated; ++n) {
    const Rational scaled = y * Rational(seq->ratio(n));
    BigInt c = floor_of(scaled);
    y = scaled - Rational(c);
    y.canonicalize();
    digits.push_back(std::move(c));
    terminated = y == 0;
  }
  Rational value = x;
  value.canonicalize();
  auto impl = std::make_shared<CirclePoint::Impl>();
  impl->seq = std::move(seq);
  impl->kind = CirclePoint::RuleKind::prefix;
  impl->zero_tail = terminated;
  impl->label = "rat:" + value.get_str();
  impl->source = value;
  if (terminated) {
    while (!digits.empty() && digits.back() == 0) digits.pop_back();
    impl->support_max = digits.size();
    impl->extent = Extent::finite;
  } else {
    impl->extent = Extent::unknown;
  }
  impl->digits = std::move(digits);
  return CirclePoint::build(std::move(impl));
}

NatSet support(const CirclePoint& x, std::uint64_t horizon, bool quasi) {
  if (horizon == 0) throw PreconditionError("support horizon must be >= 1");
  const auto& seq = x.seq_ptr();
  auto matches = [x, seq, quasi](std::uint64_t n) {
    const BigInt c = x.digit(n);
    return quasi ? c == seq->ratio(n) - 1 : c != 0;
  };
  if (const auto top = x.finite_support_max()) {
    std::vector<std::uint64_t> members;
    for (std::uint64_t n = 1; n <= *top; ++n) {
      if (matches(n)) members.push_back(n);
    }
    return NatSet::finite(std::move(members));
  }
  if (const auto prefix = x.known_prefix()) {
    const std::uint64_t cap = std::min(horizon, *prefix);
    return NatSet::predicate(matches, cap, Extent::unknown,
                             std::string(quasi ? "supp_q" : "supp") + "(" + x.describe() + ")");
  }
  Extent extent = quasi ? Extent::unknown : x.support_extent();
  if (x.rule_kind() == CirclePoint::RuleKind::max_on) extent = x.support_extent();
  return NatSet::predicate(matches, std::nullopt, extent,
                           std::string(quasi ? "supp_q" : "supp") + "(" + x.describe() + ")");
}

BoundInterval frac_bound(const CirclePoint& x, std::uint64_t n, std::uint64_t t) {
  if (n == 0) throw PreconditionError("frac_bound index n starts at 1");
  const DerivedSeq& seq = x.seq();
  BigInt num = 0;
  BigInt den = 1;
  for (std::uint64_t j = 0; j <= t; ++j) {
    const BigInt& b = seq.ratio(n + j);
    num = num * b + x.digit(n + j);
    den *= b;
  }
  return BoundInterval::make(make_rational(num, den), make_rational(num + 1, den));
}

std::optional<Rational> exact_frac(const CirclePoint& x, std::uint64_t n) {
  if (n == 0) throw PreconditionError("exact_frac index n starts at 1");
  const auto top = x.finite_support_max();
  if (!top) return std::nullopt;
  if (n > *top) return Rational(0);
  return frac_bound(x, n, *top - n).lo;
}

Rational tail_upper_bound(const CirclePoint& x, std::uint64_t j, std::uint64_t t) {
  if (j == 0) throw PreconditionError("tail index j starts at 1");
  Rational out = frac_bound(x, j, t).hi / Rational(x.seq().base().term(j - 1));
  out.canonicalize();
  return out;
}

BoundInterval norm_bound(const BoundInterval& j) {
  const Rational half(1, 2);
  if (j.hi <= half) return j;
  if (j.lo >= half) return BoundInterval::make(Rational(1) - j.hi, Rational(1) - j.lo);
  return BoundInterval::make(std::min(j.lo, Rational(Rational(1) - j.hi)), half);
}

std::optional<BoundInterval> reduce_mod_one(const Rational& lo, const Rational& hi) {
  if (lo > hi) throw PreconditionError("reduce_mod_one needs lo <= hi");
  const BigInt base = floor_of(lo);
  if (lo == hi) return BoundInterval::point(lo - Rational(base));
  // The upper end is not attained, so touching base + 1 still reduces.
  if (hi > Rational(base + 1)) return std::nullopt;
  return BoundInterval::make(lo - Rational(base), hi - Rational(base));
}

std::optional<BoundInterval> scale_frac(const BoundInterval& j, const BigInt& r) {
  const Rational factor(r);
  return reduce_mod_one(j.lo * factor, j.hi * factor);
}

std::uint64_t default_depth_cap() {
  if (const char* env = std::getenv("CIRCLAB_DEPTH_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return 64;
}

MultipleEvaluator::MultipleEvaluator(CirclePoint x, std::uint64_t depth, std::uint64_t cap)
    : x_(std::move(x)), depth_(depth), cap_(std::max(cap, depth)) {}

BoundInterval MultipleEvaluator::block(std::uint64_t k, std::uint64_t t) {
  if (x_.finite_support_max()) {
    auto it = exact_.find(k);
    if (it == exact_.end()) it = exact_.emplace(k, *exact_frac(x_, k + 1)).first;
    return BoundInterval::point(it->second);
  }
  const auto key = std::make_pair(k, t);
  auto it = blocks_.find(key);
  if (it == blocks_.end()) it = blocks_.emplace(key, frac_bound(x_, k + 1, t)).first;
  return it->second;
}

std::uint64_t MultipleEvaluator::max_depth(std::uint64_t k) const {
  if (const auto prefix = x_.known_prefix()) {
    if (k + 1 > *prefix) {
      throw HorizonExceeded("block " + std::to_string(k) + " needs digit c_" + std::to_string(k + 1) +
                            " beyond the declared prefix " + std::to_string(*prefix));
    }
    return std::min(cap_, *prefix - (k + 1));
  }
  return cap_;
}

std::optional<BoundInterval> MultipleEvaluator::at_depth(std::uint64_t i, std::uint64_t t) {
  const IndexPair p = x_.seq().decompose(i);
  const BoundInterval j = block(p.k, std::min(t, max_depth(p.k)));
  return scale_frac(j, from_u64(p.r));
}

DerivedEnclosure MultipleEvaluator::at(std::uint64_t i) {
  const IndexPair p = x_.seq().decompose(i);
  DerivedEnclosure out;
  out.index = i;
  out.k = p.k;
  out.r = p.r;
  const BigInt r = from_u64(p.r);
  if (x_.finite_support_max()) {
    const BoundInterval j = block(p.k, 0);
    out.frac = BoundInterval::point(frac_of(j.lo * Rational(r)));
    out.decided = true;
    out.exact = true;
    return out;
  }
  const std::uint64_t limit = max_depth(p.k);
  std::uint64_t t = std::min(depth_, limit);
  for (;;) {
    if (auto scaled = scale_frac(block(p.k, t), r)) {
      out.frac = *scaled;
      out.decided = true;
      out.exact = scaled->is_point();
      out.depth = t;
      return out;
    }
    const std::uint64_t next = std::min(std::max<std::uint64_t>(2 * t, 1), limit);
    if (next <= t) break;
    t = next;
  }
  out.frac = BoundInterval::make(Rational(0), Rational(1));
  out.decided = false;
  out.depth = t;
  return out;
}

DerivedEnclosure derived_frac_bound(const CirclePoint& x, std::uint64_t i, std::uint64_t t, std::uint64_t cap) {
  MultipleEvaluator eval(x, t, cap);
  return eval.at(i);
}

}  // namespace circlab
