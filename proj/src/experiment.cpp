#include "circlab/experiment.hpp"

#include <algorithm>
#include <sstream>

#include "circlab/classify.hpp"
#include "circlab/error.hpp"
#include "circlab/membership.hpp"
#include "circlab/parse.hpp"
#include "circlab/witness.hpp"

namespace circlab {

namespace {

constexpr std::size_t kListedRows = 100;

struct Outcome {
  Json result = Json::object();
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> table;
  std::string csv_line;  // single-line CSV form (seq, lift)
  int exit_code = 0;
  std::string err;
};

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

Json intervals_json(const std::vector<Interval>& parts) {
  Json out = Json::array();
  for (const Interval& p : parts) out.push_back(Json::array({p.lo, p.hi}));
  return out;
}

Json estimate_json(const DensityEstimate& e) {
  return Json{{"N", e.horizon},
              {"in", e.in_count},
              {"out", e.out_count},
              {"undecided", e.undecided_count},
              {"lower", to_string(e.lower())},
              {"upper", to_string(e.upper())}};
}

std::vector<std::string> estimate_cells(const DensityEstimate& e) {
  return {std::to_string(e.horizon),        std::to_string(e.in_count), std::to_string(e.out_count),
          std::to_string(e.undecided_count), to_string(e.lower()),      to_string(e.upper())};
}

std::uint64_t resolved_cap(const ExperimentConfig& c) { return c.cap.value_or(default_depth_cap()); }

std::vector<bool> parse_zeta(const std::string& text) {
  std::vector<bool> out;
  for (char ch : text) {
    if (ch != '0' && ch != '1') throw ParseError("zeta must be a 0/1 string, got '" + text + "'");
    out.push_back(ch == '1');
  }
  return out;
}

std::vector<BigInt> parse_u_rule(const std::string& text, const ArithSeq& seq) {
  if (text.rfind("adjacent:", 0) == 0) {
    const std::uint64_t count = parse_u64(std::string_view(text).substr(9));
    if (count == 0) throw PreconditionError("adjacent:N needs N >= 1");
    std::vector<BigInt> out;
    for (std::uint64_t n = 1; n <= count; ++n) out.push_back(seq.term(n) + seq.term(n - 1));
    return out;
  }
  return parse_bigint_list(text);
}

// Smallest m >= 2 with 1 / 2^(m-2) < eps.
std::uint64_t exceptional_order(const Rational& eps) {
  std::uint64_t m = 2;
  BigInt pow = 1;
  while (Rational(1) / Rational(pow) >= eps) {
    pow *= 2;
    ++m;
  }
  return m;
}

Json membership_json(const MembershipResult& m) {
  Json out{{"verdict", to_string(m.verdict)}, {"citation_dependent", m.citation_dependent}, {"note", m.note}};
  out["cutoff"] = m.cutoff ? Json(*m.cutoff) : Json(nullptr);
  return out;
}

Json scan_json(const ScanResult& scan, Outcome& o) {
  Json rows = Json::array();
  o.header = {"N", "in", "out", "undecided", "lower", "upper"};
  for (const ScanRow& row : scan.rows) {
    rows.push_back(estimate_json(row.estimate));
    o.table.push_back(estimate_cells(row.estimate));
  }
  return rows;
}

Outcome cmd_seq(const ExperimentConfig& c) {
  auto seq = DerivedSeq::make(parse_ratio_spec(c.spec));
  std::vector<std::string> terms;
  for (std::uint64_t j = 0; j < c.count; ++j) {
    if (c.kind == "a") {
      terms.push_back(to_string(seq->base().term(j)));
    } else if (c.kind == "b") {
      terms.push_back(to_string(seq->ratio(j + 1)));
    } else if (c.kind == "d") {
      terms.push_back(to_string(seq->term(j + 1)));
    } else if (c.kind == "n") {
      terms.push_back(to_string(seq->boundary(j)));
    } else {
      throw ParseError("seq kind must be one of a, b, d, n; got '" + c.kind + "'");
    }
  }
  Outcome o;
  o.result = Json{{"spec", seq->spec().to_string()}, {"kind", c.kind}, {"count", c.count}, {"terms", terms}};
  o.csv_line = join(terms, ',');
  return o;
}

Outcome cmd_lift(const ExperimentConfig& c) {
  auto seq = DerivedSeq::make(parse_ratio_spec(c.spec));
  const NatSet set = parse_set_expr(c.set, seq);
  const NatSet lifted = lift(set, seq);
  Outcome o;
  o.result = Json{{"spec", seq->spec().to_string()}, {"set", expression(set)}};
  std::vector<Interval> parts;
  if (lifted.is_materialized()) {
    parts = lifted.parts();
    o.result["horizon"] = nullptr;
  } else {
    parts = lifted.restrict_to(c.horizon);
    o.result["horizon"] = c.horizon;
  }
  const NatSet shown = NatSet::intervals(parts);
  o.result["lifted"] = shown.to_string();
  o.result["intervals"] = intervals_json(parts);
  o.result["size"] = shown.count_upto(parts.empty() ? 1 : parts.back().hi);
  o.csv_line = shown.to_string();
  return o;
}

Outcome cmd_scan(const ExperimentConfig& c) {
  auto seq = DerivedSeq::make(parse_ratio_spec(c.spec));
  const CirclePoint x = parse_digit_rule(c.x, seq, c.digit_horizon);
  const Rational eps = parse_rational(c.eps);
  const ScanResult scan = statistical_scan(x, eps, c.horizons, c.depth, resolved_cap(c), c.threads);
  Outcome o;
  o.result = Json{{"spec", seq->spec().to_string()},
                  {"x", x.describe()},
                  {"canonicality", x.canonicality_attested() ? "declared" : "structural"},
                  {"eps", to_string(eps)},
                  {"depth", scan.depth},
                  {"cap", scan.cap}};
  o.result["rows"] = scan_json(scan, o);
  o.result["undecided_total"] = scan.undecided_indices.size();
  std::vector<std::uint64_t> listed(scan.undecided_indices.begin(),
                                    scan.undecided_indices.begin() +
                                        static_cast<std::ptrdiff_t>(std::min(kListedRows, scan.undecided_indices.size())));
  o.result["undecided_indices"] = listed;
  o.result["membership"] = membership_json(finite_support_member(x));
  if (scan.rows.size() >= 3) {
    const TrendVerdict v = convergence_verdict(scan);
    o.result["trend"] = Json{{"label", to_string(v.trend)}, {"reason", v.reason}};
  } else {
    o.result["trend"] = nullptr;
  }
  return o;
}

Outcome cmd_classify(const ExperimentConfig& c) {
  const RatioSpec spec = parse_ratio_spec(c.spec);
  ClassVerdict v;
  if (c.property == "bbounded") {
    auto seq = DerivedSeq::make(spec);
    v = check_b_bounded(spec, parse_set_expr(c.set.empty() ? "all" : c.set, seq), parse_bigint(c.bound), c.horizon);
  } else if (c.property == "snd") {
    v = check_strongly_non_dli(spec, parse_rational(c.alpha), c.horizon);
  } else if (c.property == "wdli") {
    v = check_weakly_dli_condition(spec, c.horizon, parse_rational(c.threshold));
  } else {
    throw ParseError("property must be one of bbounded, snd, wdli; got '" + c.property + "'");
  }
  Outcome o;
  o.result = Json{{"property", v.property},
                  {"spec", spec.to_string()},
                  {"horizon", v.horizon},
                  {"verdict", to_string(v.verdict)}};
  o.result["witness"] = v.witness ? Json(*v.witness) : Json(nullptr);
  o.result["detail"] = v.witness_detail;
  o.result["density_bound"] = v.density_bound ? Json(to_string(*v.density_bound)) : Json(nullptr);
  o.result["notes"] = v.notes;
  Json trace = Json::array();
  o.header = {"n", "value"};
  for (const TracePoint& p : v.trace) {
    trace.push_back(Json::array({p.n, to_string(p.value)}));
    o.table.push_back({std::to_string(p.n), to_string(p.value)});
  }
  o.result["trace"] = std::move(trace);
  return o;
}

Outcome witness_continuum(const ExperimentConfig& c) {
  const RatioSpec spec = parse_ratio_spec(c.spec);
  auto seq = DerivedSeq::make(spec);
  const WitnessSet ws = weakly_dli_witness_set(spec, c.jmax);
  const CirclePoint x = continuum_family_point(ws.set, parse_zeta(c.zeta), seq);
  const Rational eps = parse_rational(c.eps);
  const std::uint64_t m = exceptional_order(eps);
  if (ws.u.size() < m) {
    throw PreconditionError("eps = " + to_string(eps) + " needs jmax >= " + std::to_string(m));
  }
  const NatSet b = continuum_exceptional_set(ws.u, m, *seq);

  Outcome o;
  o.result = Json{{"spec", spec.to_string()}, {"jmax", c.jmax}, {"zeta", c.zeta}, {"u", ws.u}};
  o.result["witness_set"] = expression(ws.set);
  o.result["flags"] = ws.flags;
  o.result["x"] = x.describe();
  o.result["support"] = expression(support(x, 1, false));

  // Lifted translates L(A - m') at N = n_{u_jmax}.
  const std::uint64_t n_top = seq->boundary_index(ws.u.back());
  Json translates = Json::array();
  for (std::uint64_t shift = 0; shift <= 3; ++shift) {
    const DensityEstimate d = prefix_density(lift(translate(ws.set, shift), seq), n_top);
    translates.push_back(Json{{"m", shift}, {"N", n_top}, {"density", to_string(d.lower())}});
  }
  o.result["lifted_translates"] = std::move(translates);

  std::vector<std::uint64_t> horizons = c.horizons;
  std::vector<std::uint64_t> checks;
  for (std::uint64_t j : {std::uint64_t{5}, std::uint64_t{8}}) {
    if (j <= ws.u.size()) checks.push_back(seq->boundary_index(ws.u[j - 1]));
  }
  const std::uint64_t top = std::max(horizons.back(), checks.empty() ? 0 : checks.back());
  std::vector<std::uint64_t> grid = horizons;
  if (top > grid.back()) grid.push_back(top);
  std::vector<RowClass> classes;
  ScanResult scan = statistical_scan(x, eps, grid, c.depth, resolved_cap(c), c.threads, &classes);
  if (grid.size() != horizons.size()) scan.rows.pop_back();

  std::uint64_t outside = 0;
  std::optional<std::uint64_t> first_outside;
  for (std::uint64_t i = 1; i <= horizons.back(); ++i) {
    if (classes[i - 1] == RowClass::in && !b.contains(i)) {
      ++outside;
      if (!first_outside) first_outside = i;
    }
  }
  Json invariant = Json::array();
  bool invariant_ok = outside == 0;
  for (std::uint64_t n : checks) {
    std::uint64_t in = 0, und = 0;
    for (std::uint64_t i = 1; i <= n; ++i) {
      in += classes[i - 1] == RowClass::in;
      und += classes[i - 1] == RowClass::undecided;
    }
    const Rational in_frac = make_rational(from_u64(in), from_u64(n));
    const Rational b_frac = prefix_density(b, n).lower();
    const Rational und_frac = make_rational(from_u64(und), from_u64(n));
    const bool ok = in_frac <= b_frac + und_frac;
    invariant_ok = invariant_ok && ok;
    invariant.push_back(Json{{"N", n},
                             {"in_fraction", to_string(in_frac)},
                             {"exceptional_density", to_string(b_frac)},
                             {"undecided_fraction", to_string(und_frac)},
                             {"ok", ok}});
  }
  o.result["eps"] = to_string(eps);
  o.result["exceptional_order"] = m;
  o.result["exceptional_set"] = expression(b);
  o.result["rows_outside_exceptional"] = outside;
  o.result["first_outside"] = first_outside ? Json(*first_outside) : Json(nullptr);
  o.result["invariant"] = std::move(invariant);
  o.result["invariant_ok"] = invariant_ok;
  o.result["depth"] = scan.depth;
  o.result["cap"] = scan.cap;
  o.result["rows"] = scan_json(scan, o);
  if (scan.rows.size() >= 3) {
    const TrendVerdict v = convergence_verdict(scan);
    o.result["trend"] = Json{{"label", to_string(v.trend)}, {"reason", v.reason}};
  } else {
    o.result["trend"] = nullptr;
  }
  o.result["membership"] = membership_json(finite_support_member(x));
  if (!invariant_ok) {
    o.exit_code = exit_code_for(ErrorKind::certification);
    o.err = "continuum witness: rows with ||d_i x|| >= eps fall outside the exceptional set\n";
  }
  return o;
}

Json cert_row_json(const CertRow& r) {
  return Json{{"i", r.index},
              {"k", r.k},
              {"r", r.r},
              {"enclosure", r.enclosure.to_string()},
              {"status", to_string(r.status)},
              {"depth", r.depth}};
}

Outcome witness_nonmember(const ExperimentConfig& c) {
  auto seq = DerivedSeq::make(parse_ratio_spec(c.spec));
  const CirclePoint x = parse_digit_rule(c.x, seq, c.digit_horizon);
  BadCase which;
  if (c.bad_case == "I") {
    which = BadCase::one;
  } else if (c.bad_case == "II") {
    which = BadCase::two;
  } else {
    throw ParseError("case must be I or II; got '" + c.bad_case + "'");
  }
  const Partition part = nonmembership_partition(x, c.m0, c.n0, covering_block(*seq, c.horizon));
  const WitnessReport rep = certify_nonmembership(x, part, which, c.m0, c.n0, c.depth, c.horizon, resolved_cap(c));

  Outcome o;
  o.result = Json{{"spec", seq->spec().to_string()}, {"x", x.describe()}};
  for (const auto& [key, value] : rep.parameters) o.result[key] = value;
  o.result["partition"] = Json{{"horizon", part.horizon},
                               {"A", expression(part.a)},
                               {"A1", expression(part.a1)},
                               {"A2", expression(part.a2)},
                               {"A3", expression(part.a3)}};
  o.result["family_size"] = rep.rows.size();
  o.result["certified"] = rep.certified;
  o.result["violations"] = rep.violations;
  o.result["undecided"] = rep.undecided;
  Json ends = Json::array();
  for (const BlockEndFraction& be : rep.block_ends) {
    ends.push_back(Json{{"k", be.k},
                        {"N", be.horizon},
                        {"certified", be.certified},
                        {"certified_fraction", to_string(be.certified_fraction)},
                        {"lifted_density", to_string(be.lifted_density)}});
  }
  o.result["block_ends"] = std::move(ends);
  Json problems = Json::array();
  o.header = {"i", "k", "r", "lo", "hi", "status", "depth"};
  for (const CertRow& r : rep.rows) {
    if (r.status != RowStatus::certified && problems.size() < kListedRows) problems.push_back(cert_row_json(r));
    o.table.push_back({std::to_string(r.index), std::to_string(r.k), std::to_string(r.r), to_string(r.enclosure.lo),
                       to_string(r.enclosure.hi), to_string(r.status), std::to_string(r.depth)});
  }
  o.result["problem_rows"] = std::move(problems);
  if (!part.a3.empty()) {
    const SplitDiagnostic split = case3_split(part, seq, parse_bigint(c.bound), c.horizon);
    o.result["case3_split"] = Json{{"bound", to_string(split.bound)},
                                   {"bounded", expression(split.bounded)},
                                   {"divergent", expression(split.divergent)},
                                   {"bounded_lifted_density", to_string(split.bounded_density.lower())},
                                   {"divergent_lifted_density", to_string(split.divergent_density.lower())}};
  } else {
    o.result["case3_split"] = nullptr;
  }
  o.result["notes"] = rep.notes;
  if (rep.violations > 0) {
    o.exit_code = exit_code_for(ErrorKind::certification);
    o.err = "nonmember witness: " + std::to_string(rep.violations) + " rows violate the certified band\n";
  }
  return o;
}

Outcome witness_arbault(const ExperimentConfig& c) {
  auto seq = DerivedSeq::make(parse_ratio_spec(c.spec));
  const std::vector<BigInt> u = parse_u_rule(c.u, seq->base());
  const ArbaultReport rep = arbault_witness(seq, u, c.rows, c.require_valid);
  Outcome o;
  o.result = Json{{"spec", seq->spec().to_string()}, {"u", c.u}, {"rows_requested", c.rows},
                  {"require_valid", c.require_valid}, {"x", rep.point->describe()}};
  Json rows = Json::array();
  o.header = {"i", "s", "u", "k", "v", "b", "l", "m", "c", "e", "lo", "hi", "exact", "status"};
  for (const ArbaultRow& r : rep.rows) {
    Json row{{"i", r.step},
             {"s", r.s},
             {"u", to_string(r.u)},
             {"k", r.k},
             {"v", to_string(r.v)},
             {"b", to_string(r.b)},
             {"l", to_string(r.l)},
             {"m", to_string(r.m)},
             {"c", to_string(r.c)},
             {"e", to_string(r.e)},
             {"upper_case", r.upper_case},
             {"e_valid", r.e_valid},
             {"m_valid", r.m_valid},
             {"head", to_string(r.head)}};
    row["enclosure"] = r.enclosure ? Json(r.enclosure->to_string()) : Json(nullptr);
    row["exact"] = r.exact ? Json(to_string(*r.exact)) : Json(nullptr);
    row["status"] = to_string(r.status);
    rows.push_back(std::move(row));
    o.table.push_back({std::to_string(r.step), std::to_string(r.s), to_string(r.u), std::to_string(r.k),
                       to_string(r.v), to_string(r.b), to_string(r.l), to_string(r.m), to_string(r.c),
                       to_string(r.e), r.enclosure ? to_string(r.enclosure->lo) : "",
                       r.enclosure ? to_string(r.enclosure->hi) : "", r.exact ? to_string(*r.exact) : "",
                       to_string(r.status)});
  }
  o.result["rows"] = std::move(rows);
  o.result["certified"] = rep.certified;
  o.result["violations"] = rep.violations;
  o.result["existence_failures"] = rep.existence_failures;
  o.result["notes"] = rep.notes;
  if (rep.violations > 0) {
    o.exit_code = exit_code_for(ErrorKind::certification);
    o.err = "arbault witness: " + std::to_string(rep.violations) + " rows violate [1/4, 7/8]\n";
  }
  return o;
}

Outcome cmd_witness(const ExperimentConfig& c) {
  if (c.witness == "continuum") return witness_continuum(c);
  if (c.witness == "nonmember") return witness_nonmember(c);
  if (c.witness == "arbault") return witness_arbault(c);
  throw ParseError("witness kind must be one of continuum, nonmember, arbault; got '" + c.witness + "'");
}

Outcome cmd_factor(const ExperimentConfig& c) {
  auto seq = DerivedSeq::make(parse_ratio_spec(c.spec));
  const BigInt u = parse_bigint(c.value);
  const Factorization f = factor_u(u, seq->base());
  Outcome o;
  const BigInt& b = seq->ratio(f.k + 1);
  o.result = Json{{"spec", seq->spec().to_string()},
                  {"u", to_string(u)},
                  {"k", f.k},
                  {"a_k", to_string(seq->base().term(f.k))},
                  {"v", to_string(f.v)},
                  {"b_next", to_string(b)},
                  {"b_next_divides_v", mpz_divisible_p(f.v.get_mpz_t(), b.get_mpz_t()) != 0}};
  o.csv_line = std::to_string(f.k) + "," + to_string(f.v);
  return o;
}

Outcome cmd_verify(const ExperimentConfig& c) {
  Outcome o;
  o.result = run_suite(c);
  if (!o.result.at("passed").get<bool>()) {
    o.exit_code = exit_code_for(ErrorKind::certification);
    o.err = "suite " + c.suite + " failed: " + o.result.at("first_counterexample").dump() + "\n";
  }
  o.header = {"check", "value"};
  for (const auto& [key, value] : o.result.items()) {
    if (!value.is_structured()) o.table.push_back({key, value.is_string() ? value.get<std::string>() : value.dump()});
  }
  return o;
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string render_csv(const Outcome& o) {
  if (o.table.empty() && o.header.empty()) return o.csv_line + "\n";
  std::ostringstream out;
  std::vector<std::string> cells;
  for (const auto& h : o.header) cells.push_back(csv_escape(h));
  out << join(cells, ',') << "\n";
  for (const auto& row : o.table) {
    cells.clear();
    for (const auto& cell : row) cells.push_back(csv_escape(cell));
    out << join(cells, ',') << "\n";
  }
  return out.str();
}

std::string render_table(const Outcome& o) {
  std::ostringstream out;
  std::size_t width = 0;
  for (const auto& [key, value] : o.result.items()) {
    if (!value.is_structured()) width = std::max(width, key.size());
  }
  for (const auto& [key, value] : o.result.items()) {
    if (value.is_structured()) continue;
    out << key << std::string(width - key.size() + 2, ' ') << (value.is_string() ? value.get<std::string>() : value.dump())
        << "\n";
  }
  if (o.header.empty()) return out.str();
  std::vector<std::size_t> widths(o.header.size());
  for (std::size_t j = 0; j < o.header.size(); ++j) widths[j] = o.header[j].size();
  for (const auto& row : o.table) {
    for (std::size_t j = 0; j < row.size() && j < widths.size(); ++j) widths[j] = std::max(widths[j], row[j].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t j = 0; j < cells.size(); ++j) {
      out << (j ? "  " : "") << cells[j] << std::string(widths[j] - cells[j].size(), ' ');
    }
    out << "\n";
  };
  out << "\n";
  line(o.header);
  for (const auto& row : o.table) line(row);
  return out.str();
}

template <typename T>
void read_field(const Json& doc, const char* key, T& field) {
  if (doc.contains(key)) field = doc.at(key).get<T>();
}

}  // namespace

Json to_json(const ExperimentConfig& c) {
  Json out{{"command", c.command},
           {"spec", c.spec},
           {"kind", c.kind},
           {"count", c.count},
           {"set", c.set},
           {"x", c.x},
           {"eps", c.eps},
           {"horizons", c.horizons},
           {"depth", c.depth}};
  out["cap"] = c.cap ? Json(*c.cap) : Json(nullptr);
  out.update(Json{{"digit_horizon", c.digit_horizon},
                  {"property", c.property},
                  {"alpha", c.alpha},
                  {"bound", c.bound},
                  {"horizon", c.horizon},
                  {"threshold", c.threshold},
                  {"witness", c.witness},
                  {"m0", c.m0},
                  {"n0", c.n0},
                  {"case", c.bad_case},
                  {"jmax", c.jmax},
                  {"zeta", c.zeta},
                  {"u", c.u},
                  {"rows", c.rows},
                  {"require_valid", c.require_valid},
                  {"suite", c.suite},
                  {"seed", c.seed},
                  {"value", c.value},
                  {"format", c.format},
                  {"threads", c.threads}});
  return out;
}

ExperimentConfig config_from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  static const std::vector<std::string> known = {
      "command", "spec",      "kind",    "count", "set",  "x",       "eps",           "horizons", "depth",
      "cap",     "digit_horizon", "property", "alpha", "bound", "horizon", "threshold",  "witness",  "m0",
      "n0",      "case",      "jmax",    "zeta",  "u",    "rows",    "require_valid", "suite",    "seed",
      "value",   "format",    "threads"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ParseError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    read_field(doc, "command", c.command);
    read_field(doc, "spec", c.spec);
    read_field(doc, "kind", c.kind);
    read_field(doc, "count", c.count);
    read_field(doc, "set", c.set);
    read_field(doc, "x", c.x);
    read_field(doc, "eps", c.eps);
    read_field(doc, "horizons", c.horizons);
    read_field(doc, "depth", c.depth);
    if (doc.contains("cap") && !doc.at("cap").is_null()) c.cap = doc.at("cap").get<std::uint64_t>();
    read_field(doc, "digit_horizon", c.digit_horizon);
    read_field(doc, "property", c.property);
    read_field(doc, "alpha", c.alpha);
    read_field(doc, "bound", c.bound);
    read_field(doc, "horizon", c.horizon);
    read_field(doc, "threshold", c.threshold);
    read_field(doc, "witness", c.witness);
    read_field(doc, "m0", c.m0);
    read_field(doc, "n0", c.n0);
    read_field(doc, "case", c.bad_case);
    read_field(doc, "jmax", c.jmax);
    read_field(doc, "zeta", c.zeta);
    read_field(doc, "u", c.u);
    read_field(doc, "rows", c.rows);
    read_field(doc, "require_valid", c.require_valid);
    read_field(doc, "suite", c.suite);
    read_field(doc, "seed", c.seed);
    read_field(doc, "value", c.value);
    read_field(doc, "format", c.format);
    read_field(doc, "threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad config value: ") + e.what());
  }
  return c;
}

ExperimentConfig config_from_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

Report run(const ExperimentConfig& config) {
  Report report;
  try {
    ExperimentConfig c = config;
    c.cap = resolved_cap(c);
    if (c.format != "json" && c.format != "csv" && c.format != "table") {
      throw ParseError("format must be json, csv or table; got '" + c.format + "'");
    }
    Outcome o;
    if (c.command == "seq") {
      o = cmd_seq(c);
    } else if (c.command == "lift") {
      o = cmd_lift(c);
    } else if (c.command == "scan") {
      o = cmd_scan(c);
    } else if (c.command == "classify") {
      o = cmd_classify(c);
    } else if (c.command == "witness") {
      o = cmd_witness(c);
    } else if (c.command == "factor") {
      o = cmd_factor(c);
    } else if (c.command == "verify") {
      o = cmd_verify(c);
    } else {
      throw ParseError("unknown command '" + c.command + "'");
    }
    if (c.format == "json") {
      const Json doc{{"tool", "circlab"}, {"version", kVersion}, {"config", to_json(c)}, {"result", o.result}};
      report.out = doc.dump(2) + "\n";
    } else if (c.format == "csv") {
      report.out = render_csv(o);
    } else {
      report.out = render_table(o);
    }
    report.exit_code = o.exit_code;
    report.err = o.err;
  } catch (const Error& e) {
    report.exit_code = exit_code_for(e.kind());
    report.out.clear();
    report.err = std::string("error: ") + e.what() + "\n";
  } catch (const std::exception& e) {
    report.exit_code = 1;
    report.out.clear();
    report.err = std::string("error: ") + e.what() + "\n";
  }
  return report;
}

}  // namespace circlab
