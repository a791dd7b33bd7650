#include "circlab/classify.hpp"

#include <algorithm>

#include "circlab/error.hpp"

namespace circlab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds-at-horizon";
    case Verdict::fails:
      return "fails-at-witness";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

ClassVerdict check_b_bounded(const RatioSpec& spec, const NatSet& set, const BigInt& bound, std::uint64_t horizon) {
  if (bound < 2) throw PreconditionError("b-bounded check needs a bound M >= 2");
  if (horizon == 0) throw PreconditionError("horizon must be >= 1");
  ArithSeq seq(spec);
  ClassVerdict out;
  out.property = "bbounded";
  out.horizon = horizon;
  out.verdict = Verdict::holds;
  for (const Interval& p : set.restrict_to(horizon)) {
    for (std::uint64_t n = p.lo; n <= p.hi; ++n) {
      const BigInt& b = seq.ratio(n);
      out.trace.push_back({n, Rational(b)});
      if (b > bound) {
        out.verdict = Verdict::fails;
        out.witness = n;
        out.witness_detail = "b_" + std::to_string(n) + " = " + b.get_str() + " > " + bound.get_str();
        return out;
      }
    }
  }
  return out;
}

ClassVerdict check_strongly_non_dli(const RatioSpec& spec, const Rational& alpha, std::uint64_t horizon) {
  if (alpha <= 0) throw PreconditionError("alpha must be positive");
  if (horizon < 2) throw PreconditionError("horizon must be >= 2");
  ArithSeq seq(spec);
  ClassVerdict out;
  out.property = "snd";
  out.horizon = horizon;
  out.verdict = Verdict::holds;
  BigInt sum = 0;
  for (std::uint64_t n = 1; n < horizon; ++n) {
    sum += seq.ratio(n);
    const BigInt& next = seq.ratio(n + 1);
    out.trace.push_back({n, make_rational(next, sum)});
    if (Rational(next) < alpha * Rational(sum)) {
      out.verdict = Verdict::fails;
      out.witness = n;
      out.witness_detail = "b_" + std::to_string(n + 1) + " = " + next.get_str() + " < " + alpha.get_str() + " * " +
                           sum.get_str();
      return out;
    }
  }
  Rational bound = alpha / (alpha + 1);
  bound.canonicalize();
  out.density_bound = bound;
  return out;
}

ClassVerdict check_weakly_dli_condition(const RatioSpec& spec, std::uint64_t horizon, const Rational& threshold) {
  if (horizon < 10) throw PreconditionError("weakly dli check needs horizon >= 10");
  if (threshold <= 0) throw PreconditionError("threshold must be positive");
  ArithSeq seq(spec);
  ClassVerdict out;
  out.property = "wdli";
  out.horizon = horizon;
  BigInt sum = 0;
  out.trace.reserve(horizon);
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    const BigInt& b = seq.ratio(n);
    sum += b - 1;
    out.trace.push_back({n, make_rational(b, sum)});
  }
  const std::uint64_t start = horizon / 10;
  bool non_increasing = true;
  Rational low = out.trace[start - 1].value;
  for (std::uint64_t n = start + 1; n <= horizon; ++n) {
    const Rational& prev = out.trace[n - 2].value;
    const Rational& cur = out.trace[n - 1].value;
    if (cur > prev && non_increasing) {
      non_increasing = false;
      out.notes.push_back("trace increases at n = " + std::to_string(n));
    }
    low = std::min(low, cur);
  }
  const Rational& last = out.trace.back().value;
  const Rational& first = out.trace[start - 1].value;
  if (last < threshold && non_increasing) {
    out.verdict = Verdict::holds;
  } else if (low >= threshold && last * 2 > first) {
    out.verdict = Verdict::fails;
    out.witness = horizon;
    out.witness_detail = "r_n >= " + threshold.get_str() + " on [" + std::to_string(start) + "," +
                         std::to_string(horizon) + "], r_H = " + last.get_str();
  } else {
    out.verdict = Verdict::inconclusive;
  }
  return out;
}

Interval cube_gap_block(std::uint64_t j) {
  if (j == 0) throw PreconditionError("block index starts at 1");
  std::uint64_t g = 1;
  for (std::uint64_t i = 1; i < j; ++i) g += i * i * i + i;
  return {g, g + j * j * j};
}

NatSet cube_gap_set() {
  return NatSet::interval_rule([](std::uint64_t j) { return cube_gap_block(j + 1); }, Extent::infinite_coinfinite,
                               "blocks:cube-gap");
}

RatioSpec build_dli_counterexample(std::uint64_t jmax) {
  if (jmax < 2) throw PreconditionError("counterexample needs jmax >= 2");
  // Enumerate K = {n_0 < n_1 < ...} and take b_{k+1} = n_{k+1} - n_k + 1.
  std::vector<BigInt> head;
  std::uint64_t prev = 1;
  for (std::uint64_t j = 1; j <= jmax; ++j) {
    const Interval block = cube_gap_block(j);
    for (std::uint64_t n = std::max<std::uint64_t>(block.lo, 2); n <= block.hi; ++n) {
      head.emplace_back(static_cast<unsigned long>(n - prev + 1));
      prev = n;
    }
  }
  return RatioSpec::explicit_list(std::move(head), RatioSpec::constant(BigInt(2)));
}

WitnessSet weakly_dli_witness_set(const RatioSpec& spec, std::uint64_t jmax, std::uint64_t scan_limit) {
  if (jmax == 0) throw PreconditionError("witness set needs jmax >= 1");
  auto seq = DerivedSeq::make(spec);
  WitnessSet out;
  out.u.push_back(1);
  BigInt inner = 0;  // sum_{i<=j} sum_{t=0}^{i} (b_{u_i+1-t} - 1)
  for (std::uint64_t j = 1; j < jmax; ++j) {
    const std::uint64_t uj = out.u[j - 1];
    for (std::uint64_t t = 0; t <= j; ++t) {
      if (t > uj) {
        out.flags.push_back("b_" + std::to_string(static_cast<std::int64_t>(uj + 1) - static_cast<std::int64_t>(t)) +
                            " (j=" + std::to_string(j) + ", t=" + std::to_string(t) + ") has index <= 0; counted as 0");
        continue;
      }
      inner += seq->ratio(uj + 1 - t) - 1;
    }
    const BigInt bound = from_u64(j) * inner;
    out.bounds.push_back(bound);
    std::uint64_t r = uj + j + 2;
    while (seq->boundary(r) <= bound) {
      if (++r > scan_limit) {
        throw HorizonExceeded("u_" + std::to_string(j + 1) + " not found below scan limit " +
                              std::to_string(scan_limit));
      }
    }
    out.u.push_back(r);
  }
  std::vector<std::uint64_t> elements;
  for (std::uint64_t v : out.u) elements.push_back(v + 1);
  out.set = NatSet::finite(std::move(elements));
  return out;
}

}  // namespace circlab
