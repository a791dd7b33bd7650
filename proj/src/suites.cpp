#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "circlab/classify.hpp"
#include "circlab/error.hpp"
#include "circlab/experiment.hpp"
#include "circlab/membership.hpp"
#include "circlab/parse.hpp"
#include "circlab/witness.hpp"

namespace circlab {

namespace {

// Tallies checks and keeps the first counterexample.
class Tally {
 public:
  void check(bool ok, const std::function<Json()>& detail) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (first_.is_null()) first_ = detail();
  }

  Json finish(const std::string& name, Json extra) const {
    Json out{{"suite", name}, {"passed", failures_ == 0}, {"checks", checks_}, {"failures", failures_}};
    out["first_counterexample"] = first_;
    for (auto& [key, value] : extra.items()) out[key] = value;
    return out;
  }

 private:
  std::uint64_t checks_ = 0;
  std::uint64_t failures_ = 0;
  Json first_;
};

std::vector<std::uint64_t> random_subset(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  std::bernoulli_distribution coin(0.5);
  std::vector<std::uint64_t> out;
  for (std::uint64_t v = lo; v <= hi; ++v) {
    if (coin(rng)) out.push_back(v);
  }
  return out;
}

std::string join_u64(const std::vector<std::uint64_t>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + "}";
}

// x = sum c_n / a_n evaluated directly.
Rational digit_value(const std::vector<BigInt>& digits, const ArithSeq& seq) {
  Rational x = 0;
  for (std::size_t n = 1; n <= digits.size(); ++n) x += Rational(digits[n - 1]) / Rational(seq.term(n));
  x.canonicalize();
  return x;
}

Json lift_algebra(const ExperimentConfig& c) {
  std::mt19937_64 rng(c.seed);
  Tally tally;
  Json per_spec = Json::object();
  for (const char* text : {"linear:1", "pow:2", "dlictrex"}) {
    auto seq = DerivedSeq::make(parse_ratio_spec(text));
    std::uint64_t pairs = 0;
    for (int p = 0; p < 200; ++p) {
      const auto ea = random_subset(rng, 1, 50);
      const auto eb = random_subset(rng, 1, 50);
      const NatSet a = NatSet::finite(ea);
      const NatSet b = NatSet::finite(eb);
      const NatSet la = lift(a, seq);
      const NatSet lb = lift(b, seq);
      auto where = [&](const char* law) {
        return [=] { return Json{{"spec", text}, {"law", law}, {"A", join_u64(ea)}, {"B", join_u64(eb)}}; };
      };
      tally.check(lift(set_algebra(SetOp::unite, a, b), seq) == set_algebra(SetOp::unite, la, lb), where("union"));
      tally.check(lift(set_algebra(SetOp::intersect, a, b), seq) == set_algebra(SetOp::intersect, la, lb),
                  where("intersection"));
      tally.check(lift(set_algebra(SetOp::subtract, a, b), seq) == set_algebra(SetOp::subtract, la, lb),
                  where("difference"));
      tally.check((ea == eb) == (la == lb), where("injectivity"));
      ++pairs;
    }
    per_spec[text] = pairs;
  }
  return tally.finish("lift-algebra", Json{{"pairs", per_spec}});
}

Json tail_bound(const ExperimentConfig& c) {
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<std::uint64_t> den(2, 1000000);
  Tally tally;
  const std::uint64_t t = 8;
  Rational worst = 0;
  for (const char* text : {"linear:1", "pow:2"}) {
    auto seq = DerivedSeq::make(parse_ratio_spec(text));
    for (int s = 0; s < 100; ++s) {
      const std::uint64_t q = den(rng);
      const std::uint64_t p = std::uniform_int_distribution<std::uint64_t>(1, q - 1)(rng);
      const Rational value = make_rational(from_u64(p), from_u64(q));
      const CirclePoint x = digits_from_rational(value, seq, 64);
      for (std::uint64_t j = 1; j <= 30; ++j) {
        const BigInt& a_prev = seq->base().term(j - 1);
        const Rational bound = tail_upper_bound(x, j, t);
        // sum_{i >= j} c_i / a_i = {a_{j-1} x} / a_{j-1}
        const Rational tail = frac_of(Rational(a_prev) * value) / Rational(a_prev);
        const Rational ratio = bound * Rational(a_prev);
        worst = std::max(worst, ratio);
        BigInt prod = 1;
        for (std::uint64_t n = j; n <= j + t; ++n) prod *= seq->ratio(n);
        const BoundInterval fb = frac_bound(x, j, t);
        auto where = [&](const char* what) {
          return [=] { return Json{{"spec", text}, {"x", to_string(value)}, {"j", j}, {"check", what}}; };
        };
        tally.check(ratio <= 1, where("bound * a_{j-1} <= 1"));
        tally.check(tail <= bound, where("tail <= bound"));
        tally.check(fb.width() == Rational(1) / Rational(prod), where("width"));
      }
    }
  }
  return tally.finish("tail-bound", Json{{"max_ratio", to_string(worst)}});
}

Json recursion(const ExperimentConfig& c) {
  std::mt19937_64 rng(c.seed);
  Tally tally;
  for (const char* text : {"linear:1", "pow:2", "const:3"}) {
    auto seq = DerivedSeq::make(parse_ratio_spec(text));
    for (int s = 0; s < 50; ++s) {
      const std::uint64_t len = std::uniform_int_distribution<std::uint64_t>(1, 8)(rng);
      std::vector<BigInt> digits;
      for (std::uint64_t n = 1; n <= len; ++n) {
        const std::uint64_t b = to_u64(seq->ratio(n));
        digits.push_back(from_u64(std::uniform_int_distribution<std::uint64_t>(0, b - 1)(rng)));
      }
      const Rational value = digit_value(digits, seq->base());
      const CirclePoint x = CirclePoint::finite_digits(seq, digits);
      for (std::uint64_t n = 1; n <= 12; ++n) {
        const Rational exact = frac_of(Rational(seq->base().term(n - 1)) * value);
        BigInt prod = 1;
        for (std::uint64_t t = 0; t <= 8; ++t) {
          prod *= seq->ratio(n + t);
          const BoundInterval fb = frac_bound(x, n, t);
          auto where = [&] {
            return [=] { return Json{{"spec", text}, {"x", to_string(value)}, {"n", n}, {"t", t}}; };
          };
          tally.check(fb.contains(exact), where());
          tally.check(fb.width() == Rational(1) / Rational(prod), where());
        }
      }
    }
  }
  return tally.finish("recursion", Json::object());
}

Json finite_support(const ExperimentConfig& c) {
  Tally tally;
  const std::uint64_t top = 10000;
  Json cases = Json::array();
  for (const char* text : {"linear:1", "pow:2"}) {
    auto seq = DerivedSeq::make(parse_ratio_spec(text));
    for (std::uint64_t m = 1; m <= 10; ++m) {
      const BigInt& am = seq->base().term(m);
      const Rational value = Rational(1) / Rational(am);
      const Rational eps = value;
      const CirclePoint x = digits_from_rational(value, seq, 64);
      const std::uint64_t nm = seq->boundary_index(m);
      std::uint64_t expected = 0;
      std::uint64_t early_zeros = 0;
      MultipleEvaluator eval(x, c.depth, c.cap.value_or(default_depth_cap()));
      for (std::uint64_t i = 1; i <= top; ++i) {
        // d_i / a_m reduced mod 1 directly.
        const Rational v = frac_of(Rational(seq->term(i)) / Rational(am));
        const Rational norm = std::min(v, Rational(Rational(1) - v));
        if (norm >= eps) ++expected;
        if (i < nm && v == 0) ++early_zeros;
        if (i >= nm) {
          const DerivedEnclosure e = eval.at(i);
          tally.check(e.exact && e.frac.lo == 0 && e.frac.hi == 0,
                      [=] { return Json{{"spec", text}, {"m", m}, {"i", i}, {"check", "zero tail"}}; });
        }
      }
      const std::uint64_t cnt = std::min(nm - 1, top) - early_zeros;
      const ScanResult scan = statistical_scan(x, eps, {top}, c.depth, c.cap.value_or(default_depth_cap()));
      const DensityEstimate& est = scan.rows.back().estimate;
      const Rational want = make_rational(from_u64(cnt), from_u64(top));
      tally.check(expected == cnt && est.lower() == want && est.upper() == want, [=] {
        return Json{{"spec", text}, {"m", m}, {"lower", to_string(est.lower())}, {"upper", to_string(est.upper())},
                    {"expected", to_string(want)}};
      });
      cases.push_back(Json{{"spec", text}, {"m", m}, {"n_m", nm}, {"density", to_string(est.lower())}});
    }
  }
  return tally.finish("finite-support", Json{{"cases", cases}});
}

Json snd_density(const ExperimentConfig& c) {
  std::mt19937_64 rng(c.seed);
  Tally tally;
  const RatioSpec spec = parse_ratio_spec("pow:2");
  auto seq = DerivedSeq::make(spec);
  const ClassVerdict v = check_strongly_non_dli(spec, Rational(1), 31);
  tally.check(v.verdict == Verdict::holds, [&] { return Json{{"check", "criterion"}, {"verdict", to_string(v.verdict)}}; });
  const Rational floor(9, 20);
  Rational worst = 1;
  for (int s = 0; s < 20; ++s) {
    std::vector<std::uint64_t> elements = random_subset(rng, 2, 15);
    if (elements.empty()) elements.push_back(2);
    const NatSet lifted = lift(NatSet::finite(elements), seq);
    for (std::uint64_t k : elements) {
      const std::uint64_t n = seq->boundary_index(k) - 1;
      // Direct count of indices in blocks of A up to n_k - 1.
      std::uint64_t count = 0;
      for (std::uint64_t j : elements) {
        if (j <= k) count += to_u64(seq->ratio(j)) - 1;
      }
      const Rational d = prefix_density(lifted, n).lower();
      worst = std::min(worst, d);
      tally.check(d == make_rational(from_u64(count), from_u64(n)) && d >= floor, [=] {
        return Json{{"A", join_u64(elements)}, {"k", k}, {"N", n}, {"density", to_string(d)}};
      });
    }
  }
  return tally.finish("snd-density", Json{{"min_density", to_string(worst)}, {"floor", to_string(floor)}});
}

Json wdli_shrink(const ExperimentConfig& c) {
  Tally tally;
  const RatioSpec spec = parse_ratio_spec("linear:1");
  auto seq = DerivedSeq::make(spec);
  const WitnessSet ws = weakly_dli_witness_set(spec, 8);
  const Rational eps(1, 10);
  const std::uint64_t m = 6;
  const NatSet b = continuum_exceptional_set(ws.u, m, *seq);
  const std::vector<std::uint64_t> horizons = {1000, 10000, 100000};
  Json points = Json::array();
  for (unsigned code = 0; code < 8; ++code) {
    const std::vector<bool> zeta = {(code & 4) != 0, (code & 2) != 0, (code & 1) != 0};
    const CirclePoint x = continuum_family_point(ws.set, zeta, seq);
    std::vector<RowClass> classes;
    const ScanResult scan =
        statistical_scan(x, eps, horizons, c.depth, c.cap.value_or(default_depth_cap()), c.threads, &classes);
    Json uppers = Json::array();
    for (std::size_t j = 0; j < scan.rows.size(); ++j) {
      const Rational hi = scan.rows[j].estimate.upper();
      uppers.push_back(to_string(hi));
      if (j > 0) {
        tally.check(hi < scan.rows[j - 1].estimate.upper(),
                    [=] { return Json{{"zeta", code}, {"check", "strict decrease"}, {"N", horizons[j]}}; });
      }
    }
    tally.check(scan.rows.back().estimate.upper() <= Rational(1, 20),
                [=] { return Json{{"zeta", code}, {"check", "upper <= 1/20 at N = 10^5"}}; });
    for (std::uint64_t i = 1; i <= horizons.back(); ++i) {
      if (classes[i - 1] == RowClass::in && !b.contains(i)) {
        tally.check(false, [=] { return Json{{"zeta", code}, {"check", "row outside B"}, {"i", i}}; });
      }
    }
    points.push_back(Json{{"zeta", code}, {"x", x.describe()}, {"upper", uppers}});
  }
  // Lifted translates L(A - m') thin out as the witness set grows.
  Json translates = Json::array();
  for (std::uint64_t shift = 0; shift <= 3; ++shift) {
    Json row = Json::array();
    Rational prev = 2;
    for (std::uint64_t jmax = 4; jmax <= 8; ++jmax) {
      const WitnessSet w = weakly_dli_witness_set(spec, jmax);
      const std::uint64_t n = seq->boundary_index(w.u.back());
      const Rational d = prefix_density(lift(translate(w.set, shift), seq), n).lower();
      tally.check(d < prev, [=] { return Json{{"check", "L(A-m) decreasing"}, {"m", shift}, {"jmax", jmax}}; });
      prev = d;
      row.push_back(to_string(d));
    }
    translates.push_back(Json{{"m", shift}, {"densities", row}});
  }
  return tally.finish("wdli-shrink",
                      Json{{"u", ws.u}, {"exceptional_set", expression(b)}, {"points", points},
                           {"lifted_translates", translates}});
}

Json coincidence(const ExperimentConfig& c) {
  std::mt19937_64 rng(c.seed);
  Tally tally;
  auto seq = DerivedSeq::make(parse_ratio_spec("pow:2"));
  const Rational eps(1, 8);
  std::vector<std::uint64_t> horizons;
  std::vector<std::uint64_t> ks;
  for (std::uint64_t k = 1; seq->boundary_index(k) - 1 <= 100000; ++k) ks.push_back(k);
  for (std::size_t j = 5; j < ks.size(); ++j) horizons.push_back(seq->boundary_index(ks[j]) - 1);
  const std::uint64_t cap = c.cap.value_or(default_depth_cap());
  Json periodic = Json::array();
  for (int s = 0; s < 10; ++s) {
    const std::uint64_t period = std::uniform_int_distribution<std::uint64_t>(1, 4)(rng);
    std::vector<BigInt> pattern;
    std::bernoulli_distribution coin(0.5);
    for (std::uint64_t p = 0; p < period; ++p) pattern.push_back(coin(rng) ? 1 : 0);
    pattern[std::uniform_int_distribution<std::uint64_t>(0, period - 1)(rng)] = 1;
    const CirclePoint x = CirclePoint::periodic(seq, pattern);
    const ScanResult scan = statistical_scan(x, eps, horizons, c.depth, cap, c.threads);
    const TrendVerdict v = convergence_verdict(scan);
    tally.check(v.trend == Trend::evidence_against,
                [=] { return Json{{"x", x.describe()}, {"trend", to_string(v.trend)}, {"reason", v.reason}}; });
    periodic.push_back(Json{{"x", x.describe()}, {"trend", to_string(v.trend)},
                            {"lower_last", to_string(scan.rows.back().estimate.lower())}});
  }
  Json finite = Json::array();
  for (int s = 0; s < 10; ++s) {
    const std::uint64_t len = std::uniform_int_distribution<std::uint64_t>(1, 8)(rng);
    std::vector<BigInt> digits;
    for (std::uint64_t n = 1; n <= len; ++n) {
      const std::uint64_t b = to_u64(seq->ratio(n));
      digits.push_back(from_u64(std::uniform_int_distribution<std::uint64_t>(0, b - 1)(rng)));
    }
    digits.back() = 1;
    const Rational value = digit_value(digits, seq->base());
    const CirclePoint x = CirclePoint::finite_digits(seq, digits);
    const ScanResult scan = statistical_scan(x, eps, horizons, c.depth, cap, c.threads);
    const TrendVerdict v = convergence_verdict(scan);
    tally.check(v.trend == Trend::evidence_for,
                [=] { return Json{{"x", x.describe()}, {"trend", to_string(v.trend)}, {"reason", v.reason}}; });
    // d_i x is an integer once a_{len} | d_i, i.e. from n_len on.
    const std::uint64_t from = seq->boundary_index(len);
    bool zero_tail = true;
    for (std::uint64_t i = from; i <= std::min<std::uint64_t>(from + 2000, horizons.back()); ++i) {
      if (frac_of(Rational(seq->term(i)) * value) != 0) zero_tail = false;
    }
    MultipleEvaluator eval(x, c.depth, cap);
    for (std::uint64_t i = from; i <= std::min<std::uint64_t>(from + 2000, horizons.back()); ++i) {
      if (!eval.at(i).frac.is_point() || eval.at(i).frac.lo != 0) zero_tail = false;
    }
    tally.check(zero_tail, [=] { return Json{{"x", x.describe()}, {"check", "zero tail"}}; });
    finite.push_back(Json{{"x", x.describe()}, {"trend", to_string(v.trend)}});
  }
  return tally.finish("coincidence", Json{{"horizons", horizons}, {"periodic", periodic}, {"finite", finite}});
}

Json arbault(const ExperimentConfig&) {
  Tally tally;
  auto seq = DerivedSeq::make(parse_ratio_spec("linear:1"));
  std::vector<BigInt> u;
  for (std::uint64_t n = 1; n <= 80; ++n) u.push_back(seq->base().term(n) + seq->base().term(n - 1));
  const ArbaultReport rep = arbault_witness(seq, u, 20, true);
  tally.check(rep.rows.size() == 20, [&] { return Json{{"check", "rows"}, {"got", rep.rows.size()}}; });
  for (const ArbaultRow& r : rep.rows) {
    const bool inside = r.exact && Rational(1, 4) <= *r.exact && *r.exact <= Rational(7, 8);
    tally.check(r.status == RowStatus::certified && inside && r.enclosure->contains(*r.exact),
                [&] { return Json{{"step", r.step}, {"status", to_string(r.status)}}; });
  }
  tally.check(rep.existence_failures == 0, [&] { return Json{{"existence_failures", rep.existence_failures}}; });
  std::vector<std::uint64_t> s;
  for (const ArbaultRow& r : rep.rows) s.push_back(r.s);
  return tally.finish("arbault", Json{{"selected", s}, {"certified", rep.certified}, {"violations", rep.violations}});
}

Json factor(const ExperimentConfig& c) {
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<std::uint64_t> pick(1, 1000000000);
  Tally tally;
  for (const char* text : {"linear:1", "pow:2"}) {
    auto seq = DerivedSeq::make(parse_ratio_spec(text));
    for (int s = 0; s < 500; ++s) {
      const BigInt u = from_u64(pick(rng));
      const Factorization f = factor_u(u, seq->base());
      const BigInt& b = seq->ratio(f.k + 1);
      const bool ok = seq->base().term(f.k) * f.v == u && f.v % b != 0;
      tally.check(ok, [=] { return Json{{"spec", text}, {"u", to_string(u)}, {"k", f.k}, {"v", to_string(f.v)}}; });
    }
  }
  return tally.finish("factor", Json::object());
}

using SuiteFn = Json (*)(const ExperimentConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> table = {
      {"lift-algebra", lift_algebra}, {"tail-bound", tail_bound},   {"recursion", recursion},
      {"finite-support", finite_support}, {"snd-density", snd_density}, {"wdli-shrink", wdli_shrink},
      {"coincidence", coincidence},   {"arbault", arbault},         {"factor", factor}};
  return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

Json run_suite(const ExperimentConfig& config) {
  for (const auto& [name, fn] : registry()) {
    if (name == config.suite) return fn(config);
  }
  throw ParseError("unknown suite '" + config.suite + "'");
}

}  // namespace circlab
