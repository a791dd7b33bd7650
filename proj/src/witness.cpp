#include "circlab/witness.hpp"

#include <algorithm>

#include "circlab/error.hpp"

namespace circlab {

namespace {

struct Band {
  Rational lo;
  Rational hi;
};

}  // namespace

std::string to_string(RowStatus s) {
  switch (s) {
    case RowStatus::certified:
      return "certified";
    case RowStatus::violation:
      return "violation";
    case RowStatus::undecided:
      return "undecided";
  }
  return "undecided";
}

std::string to_string(Branch b) { return b == Branch::cofinite ? "cofinite" : "non-cofinite"; }

std::string to_string(BadCase c) { return c == BadCase::one ? "I" : "II"; }

CirclePoint continuum_family_point(const NatSet& a, const std::vector<bool>& zeta,
                                   std::shared_ptr<const DerivedSeq> seq) {
  if (!a.is_materialized()) throw PreconditionError("continuum family needs a listed witness set");
  const std::vector<std::uint64_t> listed = a.elements();
  if (listed.size() < 2 * zeta.size() + 2) {
    throw PreconditionError("witness set lists " + std::to_string(listed.size()) + " elements; |zeta| = " +
                            std::to_string(zeta.size()) + " needs " + std::to_string(2 * zeta.size() + 2));
  }
  std::vector<std::uint64_t> support;
  for (std::size_t k = 1; k <= zeta.size(); ++k) {
    // u_{2k + s_k} + 1 is the (2k + s_k)-th listed element.
    support.push_back(listed[2 * k + (zeta[k - 1] ? 1 : 0) - 1]);
  }
  return CirclePoint::ones_on(std::move(seq), NatSet::finite(std::move(support)));
}

NatSet continuum_exceptional_set(const std::vector<std::uint64_t>& u, std::uint64_t m, const DerivedSeq& seq) {
  if (m < 2) throw PreconditionError("exceptional set needs m >= 2");
  if (u.size() < m) throw PreconditionError("exceptional set needs u_1..u_m");
  std::vector<Interval> parts;
  auto u_at = [&](std::uint64_t j) { return u[j - 1]; };
  if (u_at(m) + 1 < m) throw PreconditionError("u_m - m + 1 is negative");
  const std::uint64_t head_end = seq.boundary_index(u_at(m) - m + 1);
  if (head_end > 1) parts.push_back({1, head_end - 1});
  for (std::uint64_t j = m; j <= u.size(); ++j) {
    parts.push_back({seq.boundary_index(u_at(j) - m + 1), seq.boundary_index(u_at(j) + 1) - 1});
  }
  return NatSet::intervals(std::move(parts));
}

Partition nonmembership_partition(const CirclePoint& x, std::uint64_t m0, std::uint64_t n0, std::uint64_t horizon) {
  if (m0 <= 9) throw PreconditionError("m_0 must exceed 9");
  if (n0 <= 12) throw PreconditionError("n_0 must exceed 12");
  if (horizon == 0) throw PreconditionError("partition horizon must be >= 1");
  Partition out;
  out.horizon = horizon;
  switch (x.support_extent()) {
    case Extent::cofinite:
      out.branch = Branch::cofinite;
      break;
    case Extent::infinite_coinfinite:
      out.branch = Branch::non_cofinite;
      break;
    case Extent::finite:
      throw PreconditionError("the partition needs an infinite support; " + x.describe() + " has finite support");
    case Extent::unknown:
      throw PreconditionError("the support extent of " + x.describe() + " is not declared");
  }
  const Rational low(1, m0);
  const Rational high = Rational(1) - Rational(1, n0);
  std::vector<std::uint64_t> a, a1, a2, a3;
  BigInt next = x.digit(1);
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    const BigInt c = next;
    next = x.digit(n + 1);
    if (c == 0) continue;
    const BigInt& b = x.seq().ratio(n);
    const bool keep = out.branch == Branch::cofinite ? c != b - 1 : next == 0;
    if (!keep) continue;
    a.push_back(n);
    const Rational q = make_rational(c, b);
    if (q < low) {
      a1.push_back(n);
    } else if (q > high) {
      a2.push_back(n);
    } else {
      a3.push_back(n);
    }
  }
  out.a = NatSet::finite(std::move(a));
  out.a1 = NatSet::finite(std::move(a1));
  out.a2 = NatSet::finite(std::move(a2));
  out.a3 = NatSet::finite(std::move(a3));
  return out;
}

std::uint64_t covering_block(const DerivedSeq& seq, std::uint64_t horizon) {
  std::uint64_t k = 0;
  while (seq.boundary(k) <= from_u64(horizon)) ++k;
  return k;
}

NatSet bad_interval_family(const Partition& part, const CirclePoint& x, BadCase which, std::uint64_t m0,
                           std::uint64_t n0, std::uint64_t horizon) {
  const DerivedSeq& seq = x.seq();
  const std::uint64_t need = covering_block(seq, horizon);
  if (part.horizon < need) {
    throw HorizonExceeded("derived horizon " + std::to_string(horizon) + " needs the partition up to k = " +
                          std::to_string(need) + ", have " + std::to_string(part.horizon));
  }
  const NatSet& chosen = which == BadCase::one ? part.a1 : part.a2;
  std::vector<Interval> parts;
  for (std::uint64_t k : chosen.elements()) {
    const std::uint64_t base = seq.boundary_index(k - 1);
    if (base > horizon) break;
    const BigInt& b = seq.ratio(k);
    const BigInt c = x.digit(k);
    // width is c_k (Case I) or b_k - c_k (Case II); the band offsets scale by b_k / width.
    const BigInt width = which == BadCase::one ? c : BigInt(b - c);
    const Rational step = make_rational(b, width);
    const BigInt count = which == BadCase::one ? BigInt(width / from_u64(m0)) : BigInt(width / from_u64(2 * n0));
    const Rational start_off = which == BadCase::one ? Rational(1, m0) : Rational(8, n0);
    const Rational end_off = which == BadCase::one ? Rational(4, m0) : Rational(12, n0);
    for (BigInt m = 0; m <= count; ++m) {
      const BigInt lo = floor_of((Rational(m) + start_off) * step);
      const BigInt hi = floor_of((Rational(m) + end_off) * step) - 1;
      if (hi < lo) continue;
      const BigInt first = from_u64(base) + lo;
      if (first > from_u64(horizon)) break;
      const BigInt last = std::min(BigInt(from_u64(base) + hi), from_u64(horizon));
      parts.push_back({to_u64(first), to_u64(last)});
    }
  }
  return NatSet::intervals(std::move(parts));
}

WitnessReport certify_nonmembership(const CirclePoint& x, const Partition& part, BadCase which, std::uint64_t m0,
                                    std::uint64_t n0, std::uint64_t depth, std::uint64_t horizon,
                                    std::uint64_t cap) {
  const NatSet family = bad_interval_family(part, x, which, m0, n0, horizon);
  WitnessReport out;
  out.construction = "nonmember";
  out.parameters = {{"case", to_string(which)},   {"branch", to_string(part.branch)},
                    {"m0", std::to_string(m0)},   {"n0", std::to_string(n0)},
                    {"depth", std::to_string(depth)}, {"horizon", std::to_string(horizon)}};
  out.point = x;
  out.set = family;

  Band band;
  if (which == BadCase::one) {
    band = {Rational(1, m0), Rational(9, m0)};
  } else {
    const Rational first = part.branch == Branch::cofinite ? Rational(3, 2 * n0) : Rational(7, 4 * n0);
    const Rational second = Rational(1) - Rational(12, n0);
    band = {std::min(first, second), Rational(1, 2)};
  }
  out.parameters.emplace_back("band", band.lo.get_str() + "," + band.hi.get_str());

  MultipleEvaluator eval(x, depth, cap);
  const DerivedSeq& seq = x.seq();
  for (const Interval& p : family.parts()) {
    for (std::uint64_t i = p.lo; i <= p.hi; ++i) {
      const IndexPair ix = seq.decompose(i);
      CertRow row;
      row.index = i;
      row.k = ix.k;
      row.r = ix.r;
      row.enclosure = BoundInterval::make(Rational(0), Rational(1));
      const std::uint64_t limit = eval.max_depth(ix.k);
      std::uint64_t t = std::min(depth, limit);
      for (;;) {
        row.depth = t;
        if (auto j = eval.at_depth(i, t)) {
          const BoundInterval v = which == BadCase::one ? *j : norm_bound(*j);
          row.enclosure = v;
          if (band.lo <= v.lo && v.hi <= band.hi) {
            row.status = RowStatus::certified;
            break;
          }
          if (v.hi < band.lo || v.lo > band.hi) {
            row.status = RowStatus::violation;
            break;
          }
        }
        const std::uint64_t next = std::min(std::max<std::uint64_t>(2 * t, 1), limit);
        if (next <= t) break;
        t = next;
      }
      switch (row.status) {
        case RowStatus::certified:
          ++out.certified;
          break;
        case RowStatus::violation:
          ++out.violations;
          break;
        case RowStatus::undecided:
          ++out.undecided;
          break;
      }
      out.rows.push_back(std::move(row));
    }
  }

  const NatSet& chosen = which == BadCase::one ? part.a1 : part.a2;
  const NatSet lifted = lift(chosen, x.seq_ptr());
  std::size_t cursor = 0;
  std::uint64_t certified_so_far = 0;
  for (std::uint64_t k : chosen.elements()) {
    const std::uint64_t end = seq.boundary_index(k) - 1;
    if (end > horizon) break;
    while (cursor < out.rows.size() && out.rows[cursor].index <= end) {
      if (out.rows[cursor].status == RowStatus::certified) ++certified_so_far;
      ++cursor;
    }
    BlockEndFraction be;
    be.k = k;
    be.horizon = end;
    be.certified = certified_so_far;
    be.certified_fraction = make_rational(from_u64(certified_so_far), from_u64(end));
    be.lifted_density = prefix_density(lifted, end).lower();
    out.block_ends.push_back(std::move(be));
  }
  if (out.violations > 0) {
    out.notes.push_back("certified enclosures outside the band contradict the construction; the evaluator is at fault");
  }
  return out;
}

SplitDiagnostic case3_split(const Partition& part, const std::shared_ptr<const DerivedSeq>& seq, const BigInt& bound, std::uint64_t horizon) {
  if (bound < 2) throw PreconditionError("split bound must be >= 2");
  std::vector<std::uint64_t> low, high;
  for (std::uint64_t n : part.a3.elements()) {
    (seq->ratio(n) <= bound ? low : high).push_back(n);
  }
  SplitDiagnostic out{bound, NatSet::finite(std::move(low)), NatSet::finite(std::move(high)), {}, {}};
  out.bounded_density = prefix_density(lift(out.bounded, seq), horizon);
  out.divergent_density = prefix_density(lift(out.divergent, seq), horizon);
  return out;
}

Factorization factor_u(const BigInt& u, const ArithSeq& seq) {
  if (u < 1) throw PreconditionError("factor_u needs u >= 1");
  std::uint64_t k = 0;
  while (seq.term(k + 1) <= u && mpz_divisible_p(u.get_mpz_t(), seq.term(k + 1).get_mpz_t())) ++k;
  return {k, BigInt(u / seq.term(k))};
}

ArbaultReport arbault_witness(std::shared_ptr<const DerivedSeq> seq, const std::vector<BigInt>& u, std::uint64_t rows,
                              bool require_valid) {
  if (u.empty()) throw PreconditionError("arbault witness needs a nonempty u");
  if (rows == 0) throw PreconditionError("arbault witness needs rows >= 1");
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (u[n] < 1) throw PreconditionError("u must be positive");
    if (n > 0 && u[n] <= u[n - 1]) throw PreconditionError("u must be strictly increasing");
  }
  const ArithSeq& base = seq->base();

  auto candidate = [&](std::size_t n) {
    ArbaultRow row;
    row.s = n + 1;
    row.u = u[n];
    const Factorization f = factor_u(u[n], base);
    row.k = f.k;
    row.v = f.v;
    row.b = seq->ratio(f.k + 1);
    mpz_fdiv_r(row.l.get_mpz_t(), row.v.get_mpz_t(), row.b.get_mpz_t());
    if (row.l == 0) throw CertificationFailure("b_{k+1} divides v for u = " + row.u.get_str());
    row.upper_case = 2 * row.l > row.b;
    row.m = row.upper_case ? BigInt(2 * (row.b - row.l)) : BigInt(2 * row.l);
    row.m_valid = row.m > 1 && row.m <= row.b;
    row.c = row.m_valid ? BigInt(row.b / row.m) : BigInt(0);
    row.e = row.b - row.m * row.c;
    row.e_valid = row.m_valid && row.e >= 1 && row.e <= row.m - 1;
    return row;
  };

  ArbaultReport out;
  std::vector<ArbaultRow> chosen;
  for (std::size_t n = 0; n < u.size() && chosen.size() < rows + 1; ++n) {
    ArbaultRow row = candidate(n);
    if (!chosen.empty()) {
      if (base.term(row.k) < 8 * chosen.back().u) continue;
    }
    if (!row.m_valid) continue;
    if (require_valid && !row.e_valid) continue;
    chosen.push_back(std::move(row));
  }
  if (chosen.size() < 2) throw PreconditionError("u is too short to select two admissible indices");
  if (chosen.size() < rows + 1) {
    out.notes.push_back("u exhausted after " + std::to_string(chosen.size()) + " selections; certifying " +
                        std::to_string(chosen.size() - 1) + " rows");
  }

  std::map<std::uint64_t, BigInt> divisors;
  for (const ArbaultRow& row : chosen) divisors.emplace(row.k + 1, row.m);
  const CirclePoint x = CirclePoint::floor_div(seq, std::move(divisors));
  const Rational value = *exact_frac(x, 1);
  out.point = x;

  const Rational lo(1, 4);
  const Rational hi(7, 8);
  for (std::size_t i = 0; i + 1 < chosen.size(); ++i) {
    ArbaultRow row = chosen[i];
    row.step = i + 1;
    row.head = frac_of(Rational(row.c * row.v) / Rational(row.b));
    Rational tail = make_rational(row.u, base.term(chosen[i + 1].k));
    Rational top = row.head + tail;
    top.canonicalize();
    if (top <= 1) row.enclosure = BoundInterval::make(row.head, top);
    row.exact = frac_of(Rational(row.u) * value);
    if (!row.e_valid) ++out.existence_failures;
    if (!row.enclosure) {
      row.status = RowStatus::undecided;
    } else if (!row.enclosure->contains(*row.exact)) {
      row.status = RowStatus::violation;
      out.notes.push_back("exact {u x} escapes its enclosure at step " + std::to_string(i + 1));
    } else if (lo <= row.enclosure->lo && row.enclosure->hi <= hi) {
      row.status = RowStatus::certified;
    } else if (row.enclosure->hi < lo || row.enclosure->lo > hi) {
      row.status = RowStatus::violation;
    } else {
      row.status = RowStatus::undecided;
    }
    if (row.status == RowStatus::certified) ++out.certified;
    if (row.status == RowStatus::violation) ++out.violations;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace circlab
