#include "circlab/density.hpp"

#include <algorithm>
#include <limits>

#include "circlab/error.hpp"

namespace circlab {

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::optional<std::uint64_t> min_horizon(std::optional<std::uint64_t> a, std::optional<std::uint64_t> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

std::vector<Interval> intersect_parts(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Interval> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const std::uint64_t lo = std::max(a[i].lo, b[j].lo);
    const std::uint64_t hi = std::min(a[i].hi, b[j].hi);
    if (lo <= hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

std::vector<Interval> subtract_parts(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Interval> out;
  std::size_t j = 0;
  for (Interval cur : a) {
    while (j < b.size() && b[j].hi < cur.lo) ++j;
    std::size_t jj = j;
    bool alive = true;
    while (jj < b.size() && b[jj].lo <= cur.hi) {
      if (b[jj].lo > cur.lo) out.push_back({cur.lo, b[jj].lo - 1});
      if (b[jj].hi >= cur.hi) {
        alive = false;
        break;
      }
      cur.lo = b[jj].hi + 1;
      ++jj;
    }
    if (alive) out.push_back(cur);
  }
  return out;
}

Extent combine_extent(SetOp op, Extent a, Extent b) {
  switch (op) {
    case SetOp::unite:
      if (a == Extent::finite && b == Extent::finite) return Extent::finite;
      if (a == Extent::cofinite || b == Extent::cofinite) return Extent::cofinite;
      if (a == Extent::finite) return b;
      if (b == Extent::finite) return a;
      return Extent::unknown;
    case SetOp::intersect:
      if (a == Extent::finite || b == Extent::finite) return Extent::finite;
      if (a == Extent::cofinite && b == Extent::cofinite) return Extent::cofinite;
      if (a == Extent::cofinite) return b;
      if (b == Extent::cofinite) return a;
      return Extent::unknown;
    case SetOp::subtract:
      if (a == Extent::finite || b == Extent::cofinite) return Extent::finite;
      if (b == Extent::finite) return a;
      return Extent::unknown;
  }
  return Extent::unknown;
}

}  // namespace

std::string to_string(Extent e) {
  switch (e) {
    case Extent::finite:
      return "finite";
    case Extent::cofinite:
      return "cofinite";
    case Extent::infinite_coinfinite:
      return "infinite-coinfinite";
    case Extent::unknown:
      return "unknown";
  }
  return "unknown";
}

std::vector<Interval> normalize(std::vector<Interval> parts) {
  for (const Interval& p : parts) {
    if (p.lo == 0 || p.lo > p.hi) {
      throw PreconditionError("invalid interval [" + std::to_string(p.lo) + "," + std::to_string(p.hi) + "]");
    }
  }
  std::sort(parts.begin(), parts.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  std::vector<Interval> out;
  for (const Interval& p : parts) {
    if (!out.empty() && (out.back().hi == kMax || out.back().hi + 1 >= p.lo)) {
      out.back().hi = std::max(out.back().hi, p.hi);
    } else {
      out.push_back(p);
    }
  }
  return out;
}

NatSet::NatSet() : parts_(std::make_shared<const std::vector<Interval>>()) {}

NatSet NatSet::finite(std::vector<std::uint64_t> elements) {
  std::vector<Interval> parts;
  parts.reserve(elements.size());
  for (std::uint64_t e : elements) {
    if (e == 0) throw PreconditionError("natural numbers start at 1");
    parts.push_back({e, e});
  }
  return intervals(std::move(parts));
}

NatSet NatSet::intervals(std::vector<Interval> parts) {
  NatSet s;
  s.parts_ = std::make_shared<const std::vector<Interval>>(normalize(std::move(parts)));
  return s;
}

NatSet NatSet::predicate(Predicate test, std::optional<std::uint64_t> horizon, Extent extent, std::string label) {
  NatSet s;
  s.form_ = Form::predicate;
  s.test_ = std::move(test);
  s.horizon_ = horizon;
  s.extent_ = extent;
  s.label_ = std::move(label);
  return s;
}

NatSet NatSet::interval_rule(IntervalRule nth, Extent extent, std::string label) {
  NatSet s;
  s.form_ = Form::rule;
  s.rule_ = std::move(nth);
  s.extent_ = extent;
  s.label_ = std::move(label);
  return s;
}

const std::vector<Interval>& NatSet::parts() const {
  if (form_ != Form::intervals) throw PreconditionError("set " + label_ + " is not materialized");
  return *parts_;
}

std::vector<std::uint64_t> NatSet::elements() const {
  std::vector<std::uint64_t> out;
  for (const Interval& p : parts()) {
    for (std::uint64_t v = p.lo;; ++v) {
      out.push_back(v);
      if (v == p.hi) break;
    }
  }
  return out;
}

std::optional<std::uint64_t> NatSet::max_element() const {
  const auto& ps = parts();
  if (ps.empty()) return std::nullopt;
  return ps.back().hi;
}

bool NatSet::empty() const { return parts().empty(); }

void NatSet::require_within(std::uint64_t n) const {
  if (horizon_ && n > *horizon_) {
    throw HorizonExceeded("membership of " + std::to_string(n) + " requested beyond horizon " +
                          std::to_string(*horizon_) + " of set " + label_);
  }
}

bool NatSet::contains(std::uint64_t n) const {
  if (n == 0) return false;
  switch (form_) {
    case Form::intervals: {
      const auto& ps = *parts_;
      auto it = std::upper_bound(ps.begin(), ps.end(), n, [](std::uint64_t v, const Interval& p) { return v < p.lo; });
      if (it == ps.begin()) return false;
      --it;
      return n <= it->hi;
    }
    case Form::predicate:
      require_within(n);
      return test_(n);
    case Form::rule:
      for (std::uint64_t j = 0;; ++j) {
        const Interval p = rule_(j);
        if (n < p.lo) return false;
        if (n <= p.hi) return true;
      }
  }
  return false;
}

std::vector<Interval> NatSet::restrict_to(std::uint64_t n) const {
  std::vector<Interval> out;
  switch (form_) {
    case Form::intervals:
      for (const Interval& p : *parts_) {
        if (p.lo > n) break;
        out.push_back({p.lo, std::min(p.hi, n)});
      }
      break;
    case Form::predicate: {
      require_within(n);
      for (std::uint64_t v = 1; v <= n; ++v) {
        if (!test_(v)) continue;
        if (!out.empty() && out.back().hi + 1 == v) {
          out.back().hi = v;
        } else {
          out.push_back({v, v});
        }
      }
      break;
    }
    case Form::rule:
      for (std::uint64_t j = 0;; ++j) {
        const Interval p = rule_(j);
        if (p.lo > n) break;
        out.push_back({p.lo, std::min(p.hi, n)});
      }
      break;
  }
  return out;
}

std::uint64_t NatSet::count_upto(std::uint64_t n) const {
  std::uint64_t total = 0;
  for (const Interval& p : restrict_to(n)) total += p.size();
  return total;
}

std::string NatSet::to_string() const {
  if (form_ != Form::intervals) return label_;
  if (parts_->empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < parts_->size(); ++i) {
    if (i) out += '+';
    out += '[' + std::to_string((*parts_)[i].lo) + ',' + std::to_string((*parts_)[i].hi) + ']';
  }
  return out;
}

std::string expression(const NatSet& set) {
  if (!set.is_materialized()) return set.to_string();
  if (set.empty()) return "fin:{}";
  return "ivl:" + set.to_string();
}

bool operator==(const NatSet& a, const NatSet& b) { return a.parts() == b.parts(); }

DensityEstimate DensityEstimate::make(std::uint64_t horizon, std::uint64_t in, std::uint64_t out,
                                      std::uint64_t undecided) {
  if (horizon == 0) throw PreconditionError("density horizon must be >= 1");
  if (in + out + undecided != horizon) throw PreconditionError("density counts do not sum to the horizon");
  return DensityEstimate{horizon, in, out, undecided};
}

Rational DensityEstimate::lower() const { return make_rational(from_u64(in_count), from_u64(horizon)); }

Rational DensityEstimate::upper() const {
  return make_rational(from_u64(in_count + undecided_count), from_u64(horizon));
}

DensityEstimate prefix_density(const NatSet& set, std::uint64_t n) {
  if (n == 0) throw PreconditionError("density horizon must be >= 1");
  if (set.horizon() && n > *set.horizon()) {
    throw HorizonExceeded("density at " + std::to_string(n) + " requested beyond set horizon " +
                          std::to_string(*set.horizon()));
  }
  const std::uint64_t in = set.count_upto(n);
  return DensityEstimate::make(n, in, n - in, 0);
}

NatSet lift(const NatSet& set, const std::shared_ptr<const DerivedSeq>& seq) {
  if (set.is_materialized()) {
    std::vector<Interval> out;
    for (const Interval& p : set.parts()) {
      // Blocks k1..k2 are contiguous: [n_{k1-1}, n_{k2} - 1].
      out.push_back({seq->boundary_index(p.lo - 1), seq->boundary_index(p.hi) - 1});
    }
    return NatSet::intervals(std::move(out));
  }
  std::optional<std::uint64_t> horizon;
  if (set.horizon()) {
    const BigInt& nk = seq->boundary(*set.horizon());
    horizon = fits_u64(nk) ? to_u64(nk) - 1 : kMax;
  }
  return NatSet::predicate([set, seq](std::uint64_t i) { return set.contains(seq->decompose(i).k + 1); }, horizon,
                           set.extent(), "lift(" + expression(set) + ")");
}

NatSet translate(const NatSet& set, std::uint64_t m) {
  if (m == 0) return set;
  if (set.is_materialized()) {
    std::vector<Interval> out;
    for (const Interval& p : set.parts()) {
      if (p.hi <= m) continue;
      out.push_back({p.lo > m ? p.lo - m : 1, p.hi - m});
    }
    return NatSet::intervals(std::move(out));
  }
  std::optional<std::uint64_t> horizon;
  if (set.horizon()) horizon = *set.horizon() > m ? *set.horizon() - m : 0;
  return NatSet::predicate([set, m](std::uint64_t n) { return set.contains(n + m); }, horizon, set.extent(),
                           "shift(" + expression(set) + "," + std::to_string(m) + ")");
}

NatSet set_algebra(SetOp op, const NatSet& a, const NatSet& b) {
  if (a.is_materialized() && b.is_materialized()) {
    switch (op) {
      case SetOp::unite: {
        std::vector<Interval> all = a.parts();
        all.insert(all.end(), b.parts().begin(), b.parts().end());
        return NatSet::intervals(std::move(all));
      }
      case SetOp::intersect:
        return NatSet::intervals(intersect_parts(a.parts(), b.parts()));
      case SetOp::subtract:
        return NatSet::intervals(subtract_parts(a.parts(), b.parts()));
    }
  }
  // A finite operand bounds intersections and differences, so those stay exact.
  if (op == SetOp::intersect && (a.is_materialized() || b.is_materialized())) {
    const NatSet& fin = a.is_materialized() ? a : b;
    const NatSet& other = a.is_materialized() ? b : a;
    const auto top = fin.max_element();
    if (!top) return NatSet();
    return set_algebra(op, fin, NatSet::intervals(other.restrict_to(*top)));
  }
  if (op == SetOp::subtract && a.is_materialized()) {
    const auto top = a.max_element();
    if (!top) return NatSet();
    return set_algebra(op, a, NatSet::intervals(b.restrict_to(*top)));
  }
  const char* name = op == SetOp::unite ? "union" : op == SetOp::intersect ? "inter" : "diff";
  NatSet::Predicate test;
  switch (op) {
    case SetOp::unite:
      test = [a, b](std::uint64_t n) { return a.contains(n) || b.contains(n); };
      break;
    case SetOp::intersect:
      test = [a, b](std::uint64_t n) { return a.contains(n) && b.contains(n); };
      break;
    case SetOp::subtract:
      test = [a, b](std::uint64_t n) { return a.contains(n) && !b.contains(n); };
      break;
  }
  return NatSet::predicate(std::move(test), min_horizon(a.horizon(), b.horizon()),
                           combine_extent(op, a.extent(), b.extent()),
                           std::string(name) + "(" + expression(a) + "," + expression(b) + ")");
}

}  // namespace circlab
