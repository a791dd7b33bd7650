#include "circlab/membership.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include "circlab/error.hpp"

namespace circlab {

std::string to_string(MemberVerdict v) {
  switch (v) {
    case MemberVerdict::member:
      return "member";
    case MemberVerdict::non_member_by_citation:
      return "non-member-by-cited-theorem";
    case MemberVerdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(Trend t) {
  switch (t) {
    case Trend::evidence_for:
      return "evidence-for";
    case Trend::evidence_against:
      return "evidence-against";
    case Trend::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

MembershipResult finite_support_member(const CirclePoint& x) {
  MembershipResult out;
  if (const auto m = x.finite_support_max()) {
    out.verdict = MemberVerdict::member;
    out.cutoff = x.seq().boundary_index(*m);
    out.note = "supp(x) within [1," + std::to_string(*m) + "]";
    return out;
  }
  switch (x.support_extent()) {
    case Extent::cofinite:
    case Extent::infinite_coinfinite:
      out.verdict = MemberVerdict::non_member_by_citation;
      out.citation_dependent = true;
      out.note = "infinite support; non-membership relies on the external finite-support characterization";
      break;
    default:
      out.verdict = MemberVerdict::inconclusive;
      out.note = "support form not declared";
      break;
  }
  return out;
}

RowClass classify_row(MultipleEvaluator& eval, std::uint64_t i, const Rational& eps) {
  const CirclePoint& x = eval.point();
  if (x.finite_support_max()) {
    const BoundInterval v = norm_bound(eval.at(i).frac);
    return v.lo >= eps ? RowClass::in : RowClass::out;
  }
  const std::uint64_t limit = eval.max_depth(x.seq().decompose(i).k);
  std::uint64_t t = std::min(eval.depth(), limit);
  for (;;) {
    if (auto j = eval.at_depth(i, t)) {
      const BoundInterval v = norm_bound(*j);
      if (v.lo >= eps) return RowClass::in;
      if (v.hi < eps) return RowClass::out;
    }
    const std::uint64_t next = std::min(std::max<std::uint64_t>(2 * t, 1), limit);
    if (next <= t) return RowClass::undecided;
    t = next;
  }
}

ScanResult statistical_scan(const CirclePoint& x, const Rational& eps, const std::vector<std::uint64_t>& horizons,
                            std::uint64_t depth, std::uint64_t cap, unsigned threads,
                            std::vector<RowClass>* classes_out) {
  if (eps <= 0 || eps > Rational(1, 2)) throw PreconditionError("eps must lie in (0, 1/2]");
  if (horizons.empty()) throw PreconditionError("scan needs at least one horizon");
  for (std::size_t j = 0; j < horizons.size(); ++j) {
    if (horizons[j] == 0) throw PreconditionError("scan horizons must be >= 1");
    if (j > 0 && horizons[j] <= horizons[j - 1]) throw PreconditionError("scan horizons must increase");
  }
  const std::uint64_t top = horizons.back();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, top / 1024)));

  std::vector<RowClass> classes(top);
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned w) {
    try {
      MultipleEvaluator eval(x, depth, cap);
      const std::uint64_t lo = top * w / threads;
      const std::uint64_t hi = top * (w + 1) / threads;
      for (std::uint64_t i = lo + 1; i <= hi; ++i) classes[i - 1] = classify_row(eval, i, eps);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ScanResult out;
  out.eps = eps;
  out.depth = depth;
  out.cap = std::max(cap, depth);
  std::uint64_t in = 0, undecided = 0;
  std::size_t next = 0;
  for (std::uint64_t i = 1; i <= top; ++i) {
    switch (classes[i - 1]) {
      case RowClass::in:
        ++in;
        break;
      case RowClass::undecided:
        ++undecided;
        out.undecided_indices.push_back(i);
        break;
      case RowClass::out:
        break;
    }
    if (i == horizons[next]) {
      out.rows.push_back({i, DensityEstimate::make(i, in, i - in - undecided, undecided)});
      ++next;
    }
  }
  if (classes_out) *classes_out = std::move(classes);
  return out;
}

TrendVerdict convergence_verdict(const ScanResult& scan) {
  if (scan.rows.size() < 3) throw PreconditionError("a trend verdict needs at least 3 horizons");
  TrendVerdict out;
  for (const ScanRow& row : scan.rows) {
    if (2 * row.estimate.undecided_count > row.estimate.horizon) {
      out.reason = "more than half of the rows undecided at N = " + std::to_string(row.horizon);
      return out;
    }
  }
  // Early horizons can sit inside the support of x, so only the later half
  // has to decrease; the drop is measured against the overall peak.
  bool non_increasing = true;
  for (std::size_t j = scan.rows.size() / 2 + 1; j < scan.rows.size(); ++j) {
    if (scan.rows[j].estimate.upper() > scan.rows[j - 1].estimate.upper()) non_increasing = false;
  }
  Rational hi_max = 0;
  for (const ScanRow& row : scan.rows) hi_max = std::max(hi_max, row.estimate.upper());
  const Rational last_hi = scan.rows.back().estimate.upper();
  if (non_increasing && last_hi * 4 <= hi_max) {
    out.trend = Trend::evidence_for;
    out.reason = "upper bound falls from a peak of " + hi_max.get_str() + " to " + last_hi.get_str();
    return out;
  }
  // Non-convergence is a lim sup statement: the later horizons must keep
  // returning to a positive level, not stay there.
  Rational lo_max = 0;
  for (const ScanRow& row : scan.rows) lo_max = std::max(lo_max, row.estimate.lower());
  Rational late_max = 0;
  for (std::size_t j = scan.rows.size() / 2; j < scan.rows.size(); ++j) {
    late_max = std::max(late_max, scan.rows[j].estimate.lower());
  }
  if (late_max > 0 && late_max * 4 >= lo_max) {
    out.trend = Trend::evidence_against;
    out.reason = "lower bound over the later horizons returns to " + late_max.get_str() + " (overall max " +
                 lo_max.get_str() + ")";
    return out;
  }
  out.reason = "neither bound shows a clear trend";
  return out;
}

}  // namespace circlab
