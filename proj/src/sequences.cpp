#include "circlab/sequences.hpp"

#include <algorithm>
#include <limits>

#include "circlab/error.hpp"

namespace circlab {

RatioSpec RatioSpec::constant(const BigInt& value) {
  if (value < 2) throw PreconditionError("constant ratio must be >= 2, got " + value.get_str());
  return RatioSpec(Kind::constant, value);
}

RatioSpec RatioSpec::linear(const BigInt& offset) {
  if (offset < 1) throw PreconditionError("linear offset must be >= 1 so that b_1 >= 2, got " + offset.get_str());
  return RatioSpec(Kind::linear, offset);
}

RatioSpec RatioSpec::power(const BigInt& base) {
  if (base < 2) throw PreconditionError("power base must be >= 2, got " + base.get_str());
  return RatioSpec(Kind::power, base);
}

RatioSpec RatioSpec::explicit_list(std::vector<BigInt> head, const RatioSpec& tail) {
  for (std::size_t i = 0; i < head.size(); ++i) {
    if (head[i] < 2) {
      throw PreconditionError("explicit ratio b_" + std::to_string(i + 1) + " = " + head[i].get_str() + " is below 2");
    }
  }
  RatioSpec spec(Kind::explicit_list, BigInt(0));
  spec.head_ = std::make_shared<const std::vector<BigInt>>(std::move(head));
  spec.tail_ = std::make_shared<const RatioSpec>(tail);
  return spec;
}

RatioSpec RatioSpec::cube_gap_blocks() { return RatioSpec(Kind::cube_gap_blocks, BigInt(0)); }

const std::vector<BigInt>& RatioSpec::head() const {
  if (kind_ != Kind::explicit_list) throw PreconditionError("head() on a non-explicit ratio spec");
  return *head_;
}

const RatioSpec& RatioSpec::tail() const {
  if (kind_ != Kind::explicit_list) throw PreconditionError("tail() on a non-explicit ratio spec");
  return *tail_;
}

BigInt cube_gap_ratio(std::uint64_t n) {
  // Block j holds j^3 + 1 elements of K; the join after block j sits at
  // ratio index s_j + 1 with s_j = sum_{i<=j} (i^3 + 1) - 1.
  std::uint64_t s = 0;
  for (std::uint64_t j = 1;; ++j) {
    s += j * j * j + 1;
    const std::uint64_t join = s;  // s_j + 1
    if (join == n) return BigInt(static_cast<unsigned long>(j + 1));
    if (join > n) return BigInt(2);
  }
}

BigInt RatioSpec::term(std::uint64_t n) const {
  if (n == 0) throw PreconditionError("ratio index starts at 1");
  switch (kind_) {
    case Kind::constant:
      return param_;
    case Kind::linear:
      return from_u64(n) + param_;
    case Kind::power: {
      BigInt out;
      mpz_pow_ui(out.get_mpz_t(), param_.get_mpz_t(), n);
      return out;
    }
    case Kind::explicit_list:
      if (n <= head_->size()) return (*head_)[n - 1];
      return tail_->term(n);
    case Kind::cube_gap_blocks:
      return cube_gap_ratio(n);
  }
  return BigInt(2);
}

std::string RatioSpec::to_string() const {
  switch (kind_) {
    case Kind::constant:
      return "const:" + param_.get_str();
    case Kind::linear:
      return "linear:" + param_.get_str();
    case Kind::power:
      return "pow:" + param_.get_str();
    case Kind::explicit_list: {
      std::string out = "list:";
      for (std::size_t i = 0; i < head_->size(); ++i) {
        if (i) out += ',';
        out += (*head_)[i].get_str();
      }
      return out + "|" + tail_->to_string();
    }
    case Kind::cube_gap_blocks:
      return "dlictrex";
  }
  return {};
}

ArithSeq::ArithSeq(RatioSpec spec) : spec_(std::move(spec)) { terms_.emplace_back(1); }

const BigInt& ArithSeq::ratio(std::uint64_t n) const {
  if (n == 0) throw PreconditionError("ratio index starts at 1");
  std::lock_guard<std::mutex> lock(mu_);
  return ratio_locked(n);
}

const BigInt& ArithSeq::ratio_locked(std::uint64_t n) const {
  while (ratios_.size() < n) ratios_.push_back(spec_.term(ratios_.size() + 1));
  return ratios_[n - 1];
}

const BigInt& ArithSeq::term(std::uint64_t k) const {
  std::lock_guard<std::mutex> lock(mu_);
  while (terms_.size() <= k) {
    const BigInt& b = ratio_locked(terms_.size());
    terms_.push_back(terms_.back() * b);
  }
  return terms_[k];
}

DerivedSeq::DerivedSeq(std::shared_ptr<const ArithSeq> base) : base_(std::move(base)) {
  if (!base_) throw PreconditionError("derived sequence needs a base sequence");
  bounds_.emplace_back(1);
  fast_bounds_.push_back(1);
}

std::shared_ptr<const DerivedSeq> DerivedSeq::make(const RatioSpec& spec) {
  return std::make_shared<const DerivedSeq>(std::make_shared<const ArithSeq>(spec));
}

const BigInt& DerivedSeq::boundary(std::uint64_t k) const {
  std::lock_guard<std::mutex> lock(mu_);
  while (bounds_.size() <= k) push_next_bound();
  return bounds_[k];
}

void DerivedSeq::push_next_bound() const {
  const std::uint64_t j = bounds_.size();
  bounds_.push_back(bounds_.back() + base_->ratio(j) - 1);
  fast_bounds_.push_back(fits_u64(bounds_.back()) ? to_u64(bounds_.back())
                                                  : std::numeric_limits<std::uint64_t>::max());
}

std::uint64_t DerivedSeq::boundary_index(std::uint64_t k) const {
  const BigInt& v = boundary(k);
  if (!fits_u64(v)) throw PreconditionError("boundary n_" + std::to_string(k) + " exceeds 64-bit index range");
  return to_u64(v);
}

void DerivedSeq::extend_to_cover(std::uint64_t i) const {
  while (fast_bounds_.back() <= i) push_next_bound();
}

IndexPair DerivedSeq::decompose(std::uint64_t i) const {
  if (i == 0) throw PreconditionError("derived index starts at 1");
  std::lock_guard<std::mutex> lock(mu_);
  extend_to_cover(i);
  // First boundary strictly greater than i is n_{k+1}.
  const auto it = std::upper_bound(fast_bounds_.begin(), fast_bounds_.end(), i);
  const auto k = static_cast<std::uint64_t>(std::distance(fast_bounds_.begin(), it)) - 1;
  return IndexPair{k, i - fast_bounds_[k] + 1};
}

BigInt DerivedSeq::term(std::uint64_t i) const {
  const IndexPair p = decompose(i);
  return from_u64(p.r) * base_->term(p.k);
}

}  // namespace circlab
