// Acceptance run: one PASS/FAIL line per criterion. Each criterion drives run()
// through a serializable config, then checks the report against brute-force
// oracles from oracles.hpp where the report alone would be circular.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "circlab/experiment.hpp"
#include "oracles.hpp"

using circlab::ExperimentConfig;
using circlab::Json;
using circlab::Report;
using oracle::Q;
using oracle::Z;

namespace {

// Floor for criterion 7: certified lower density of E_{1/8} at N = 1000 for
// c_n = 1 under pow 2, measured once with an exact-fraction reference script.
const Q kCoincidenceFloor(383, 500);

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Outcome(std::vector<ExperimentConfig>&)> body;
};

Q rat(const Json& v) {
  Q q(v.get<std::string>());
  q.canonicalize();
  return q;
}

ExperimentConfig base(const std::string& command) {
  ExperimentConfig c;
  c.command = command;
  c.cap = 64;
  return c;
}

Json run_json(std::vector<ExperimentConfig>& log, const ExperimentConfig& c, int* exit_code = nullptr) {
  log.push_back(c);
  const Report r = circlab::run(c);
  if (exit_code) *exit_code = r.exit_code;
  if (r.out.empty()) throw std::runtime_error("no report: " + r.err);
  return Json::parse(r.out)["result"];
}

void require(Outcome& o, bool ok, const std::string& what) {
  if (!ok && o.pass) {
    o.pass = false;
    o.detail = what;
  }
}

Json verify(std::vector<ExperimentConfig>& log, const std::string& suite, Outcome& o) {
  ExperimentConfig c = base("verify");
  c.suite = suite;
  c.threads = 0;
  int code = 0;
  const Json r = run_json(log, c, &code);
  require(o, code == 0 && r["passed"].get<bool>(), suite + " suite: " + r["first_counterexample"].dump());
  return r;
}

// ---- criteria ----

Outcome zeta_sequence(std::vector<ExperimentConfig>& log) {
  Outcome o;
  ExperimentConfig c = base("seq");
  c.count = 7;
  c.format = "csv";
  log.push_back(c);
  const Report r = circlab::run(c);
  require(o, r.out == "1,2,4,6,12,18,24\n", "got '" + r.out + "'");
  const auto d = oracle::derived_upto(oracle::linear1, 24);
  std::string brute;
  for (std::size_t i = 0; i < d.size(); ++i) brute += (i ? "," : "") + d[i].get_str();
  require(o, brute + "\n" == r.out, "sorted-multiples oracle gives " + brute);
  o.detail = o.pass ? "1,2,4,6,12,18,24" : o.detail;
  return o;
}

Outcome lifting_algebra(std::vector<ExperimentConfig>& log) {
  Outcome o;
  const Json r = verify(log, "lift-algebra", o);
  require(o, r["checks"] == 2400 && r["failures"] == 0, "expected 200 pairs x 3 specs x 4 laws");
  // Spot check L against the boundary definition through the CLI path.
  std::mt19937_64 rng(99);
  std::bernoulli_distribution coin(0.5);
  for (int s = 0; s < 20 && o.pass; ++s) {
    std::vector<std::uint64_t> a;
    for (std::uint64_t k = 1; k <= 12; ++k) {
      if (coin(rng)) a.push_back(k);
    }
    if (a.empty()) continue;
    ExperimentConfig c = base("lift");
    std::string set = "fin:{";
    for (std::size_t i = 0; i < a.size(); ++i) set += (i ? "," : "") + std::to_string(a[i]);
    c.set = set + "}";
    const Json lifted = run_json(log, c);
    std::vector<std::uint64_t> got;
    for (const auto& iv : lifted["intervals"]) {
      for (std::uint64_t i = iv[0]; i <= iv[1].get<std::uint64_t>(); ++i) got.push_back(i);
    }
    require(o, got == oracle::lift(a, oracle::linear1), "lift mismatch for " + c.set);
  }
  if (o.pass) o.detail = "2400/2400 identities, 20 direct lifts";
  return o;
}

Outcome tail_bound(std::vector<ExperimentConfig>& log) {
  Outcome o;
  const Json r = verify(log, "tail-bound", o);
  require(o, rat(r["max_ratio"]) <= 1, "max ratio " + r["max_ratio"].get<std::string>());
  if (o.pass) o.detail = "max tail*a_{j-1} ~ " + std::to_string(rat(r["max_ratio"]).get_d());
  return o;
}

Outcome recursion(std::vector<ExperimentConfig>& log) {
  Outcome o;
  const Json r = verify(log, "recursion", o);
  if (o.pass) o.detail = std::to_string(r["checks"].get<std::uint64_t>()) + " containment/width checks";
  return o;
}

Outcome finite_support(std::vector<ExperimentConfig>& log) {
  Outcome o;
  verify(log, "finite-support", o);
  // Direct recount for every x = 1/a_m through scan.
  const std::uint64_t n = 10000;
  for (auto [spec, fn] : {std::pair{"linear:1", oracle::RatioFn(oracle::linear1)},
                          std::pair{"pow:2", oracle::RatioFn(oracle::pow2)}}) {
    const auto a = oracle::terms(fn, 10);
    // d_1..d_N by enumeration.
    Z limit = 1;
    std::vector<Z> d;
    while (d.size() < n) {
      limit *= 4;
      d = oracle::derived_upto(fn, limit);
    }
    d.resize(n);
    for (std::uint64_t m = 1; m <= 10 && o.pass; ++m) {
      const Q x = Q(1) / Q(a[m]);
      std::uint64_t count = 0;
      for (const Z& v : d) count += oracle::norm(Q(v) * x) >= x;
      const std::uint64_t nm = oracle::boundary(fn, m);
      std::uint64_t early_zeros = 0;
      for (std::uint64_t i = 1; i < nm; ++i) early_zeros += oracle::frac(Q(d[i - 1]) * x) == 0;
      for (std::uint64_t i = nm; i <= n; ++i) require(o, oracle::frac(Q(d[i - 1]) * x) == 0, "nonzero tail");
      require(o, count == nm - 1 - early_zeros, "c formula");
      ExperimentConfig c = base("scan");
      c.spec = spec;
      c.x = "rat:" + x.get_str();
      c.eps = x.get_str();
      c.horizons = {n};
      const Json s = run_json(log, c);
      const Q want = oracle::q(Z(static_cast<unsigned long>(count)), Z(static_cast<unsigned long>(n)));
      require(o, rat(s["rows"][0]["lower"]) == want && rat(s["rows"][0]["upper"]) == want,
              std::string(spec) + " m=" + std::to_string(m) + ": scan " + s["rows"][0].dump() + " vs " + want.get_str());
    }
  }
  if (o.pass) o.detail = "20 points exact, zero tails on [n_m, 10^4]";
  return o;
}

Outcome snd_floor(std::vector<ExperimentConfig>& log) {
  Outcome o;
  ExperimentConfig c = base("classify");
  c.spec = "pow:2";
  c.property = "snd";
  c.alpha = "1";
  c.horizon = 31;
  const Json v = run_json(log, c);
  require(o, v["verdict"] == "holds-at-horizon", "criterion verdict " + v["verdict"].dump());
  // b_{n+1} >= b_1 + ... + b_n directly.
  for (std::uint64_t n = 1; n <= 30; ++n) {
    Z sum = 0;
    for (std::uint64_t i = 1; i <= n; ++i) sum += oracle::pow2(i);
    require(o, oracle::pow2(n + 1) >= sum, "direct inequality at n=" + std::to_string(n));
  }
  const Json r = verify(log, "snd-density", o);
  require(o, rat(r["min_density"]) >= Q(9, 20), "min density " + r["min_density"].get<std::string>());
  if (o.pass) o.detail = "min block-end density " + std::to_string(rat(r["min_density"]).get_d());
  return o;
}

Outcome coincidence_floor(std::vector<ExperimentConfig>& log) {
  Outcome o;
  ExperimentConfig c = base("scan");
  c.spec = "pow:2";
  c.x = "periodic:[1]";
  c.eps = "1/8";
  c.horizons = {1000, 10000, 100000};
  c.depth = 32;
  c.threads = 0;
  const Json s = run_json(log, c);
  const Q f = rat(s["rows"][0]["lower"]);
  require(o, f == kCoincidenceFloor, "lower bound at 10^3 is " + f.get_str() + ", frozen floor " +
                                         kCoincidenceFloor.get_str());
  std::ostringstream lows;
  for (const auto& row : s["rows"]) {
    const Q lo = rat(row["lower"]);
    lows << lo.get_d() << " ";
    const std::uint64_t n = row["N"];
    require(o, lo >= kCoincidenceFloor / 2, "lower " + lo.get_str() + " < F/2 at N=" + std::to_string(n));
    require(o, oracle::q(Z(static_cast<unsigned long>(row["undecided"].get<std::uint64_t>())), Z(static_cast<unsigned long>(n))) <= Q(1, 20), "undecided > 5% at N=" + std::to_string(n));
  }
  if (o.pass) o.detail = "F = 383/500, lower bounds " + lows.str();
  return o;
}

Outcome wdli_shrinkage(std::vector<ExperimentConfig>& log) {
  Outcome o;
  Q worst = 0;
  for (unsigned code = 0; code < 8; ++code) {
    ExperimentConfig c = base("witness");
    c.witness = "continuum";
    c.spec = "linear:1";
    c.jmax = 8;
    c.eps = "1/10";
    c.zeta = std::string(1, '0' + ((code >> 2) & 1)) + char('0' + ((code >> 1) & 1)) + char('0' + (code & 1));
    c.horizons = {1000, 10000, 100000};
    c.threads = 0;
    int exit_code = 0;
    const Json w = run_json(log, c, &exit_code);
    require(o, exit_code == 0, "continuum witness exit " + std::to_string(exit_code));
    const Json& rows = w["rows"];
    for (std::size_t j = 1; j < rows.size(); ++j) {
      require(o, rat(rows[j]["upper"]) < rat(rows[j - 1]["upper"]), "zeta " + c.zeta + ": upper not decreasing");
    }
    const Q last = rat(rows.back()["upper"]);
    worst = std::max(worst, last);
    require(o, last <= Q(1, 20), "zeta " + c.zeta + ": upper " + last.get_str() + " at 10^5");
    require(o, w["rows_outside_exceptional"] == 0, "zeta " + c.zeta + ": row with ||d_i x|| >= eps outside B");
  }
  if (o.pass) o.detail = "8 members, worst upper at 10^5 = " + worst.get_str();
  return o;
}

Outcome nonmember_certification(std::vector<ExperimentConfig>& log) {
  Outcome o;
  ExperimentConfig c = base("witness");
  c.witness = "nonmember";
  c.spec = "pow:2";
  c.x = "periodic:[1]";
  c.m0 = 10;
  c.bad_case = "I";
  c.horizon = 100000;
  c.depth = 32;
  c.format = "csv";
  log.push_back(c);
  const Report r = circlab::run(c);
  require(o, r.exit_code == 0, "exit " + std::to_string(r.exit_code) + ": " + r.err);
  // Rows: i,k,r,lo,hi,status,depth
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::vector<std::pair<std::uint64_t, bool>> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    const bool certified = cells[5] == "certified";
    if (certified) {
      require(o, rat(Json(cells[3])) >= Q(1, 10) && rat(Json(cells[4])) <= Q(9, 10), "row " + cells[0] + " outside [1/10, 9/10]");
    }
    rows.emplace_back(std::stoull(cells[0]), certified);
  }
  // Largest block end n_k - 1 <= horizon, and A_1 = {n >= 4} (c_n/b_n = 2^-n < 1/10, n = 1 in supp_q).
  std::uint64_t k = 1;
  while (oracle::boundary(oracle::pow2, k + 1) - 1 <= c.horizon) ++k;
  const std::uint64_t n = oracle::boundary(oracle::pow2, k) - 1;
  const std::uint64_t n3 = oracle::boundary(oracle::pow2, 3);
  const Q lifted = oracle::q(Z(static_cast<unsigned long>(n - n3 + 1)), Z(static_cast<unsigned long>(n)));
  std::uint64_t certified = 0;
  for (const auto& [i, ok] : rows) certified += ok && i <= n;
  const Q frac = oracle::q(Z(static_cast<unsigned long>(certified)), Z(static_cast<unsigned long>(n)));
  const Q need = lifted * Q(9, 1000);
  require(o, frac >= need, "certified fraction " + frac.get_str() + " < " + need.get_str());
  if (o.pass) {
    o.detail = std::to_string(rows.size()) + " rows; fraction " + std::to_string(frac.get_d()) + " >= " +
               std::to_string(need.get_d()) + " at N=" + std::to_string(n);
  }
  return o;
}

Outcome arbault_certification(std::vector<ExperimentConfig>& log) {
  Outcome o;
  ExperimentConfig c = base("witness");
  c.witness = "arbault";
  c.spec = "linear:1";
  c.u = "adjacent:60";
  c.rows = 20;
  int code = 0;
  const Json w = run_json(log, c, &code);
  require(o, code == 0, "exit " + std::to_string(code));
  require(o, w["existence_failures"] == 0, "existence failures " + w["existence_failures"].dump());
  require(o, w["rows"].size() == 20, "rows " + std::to_string(w["rows"].size()));
  // Rebuild x = sum floor(b_n / m_n) / a_n from the printed rule.
  const std::string rule = w["x"];
  const auto a = oracle::terms(oracle::linear1, 80);
  Q x = 0;
  std::string body = rule.substr(rule.find('{') + 1);
  body.pop_back();
  std::stringstream ss(body);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto colon = item.find(':');
    const std::uint64_t n = std::stoull(item.substr(0, colon));
    const Z m(item.substr(colon + 1));
    Z digit = oracle::linear1(n) / m;
    x += Q(digit) / Q(a[n]);
  }
  x.canonicalize();
  for (const auto& row : w["rows"]) {
    require(o, row["status"] == "certified", "row " + row["i"].dump() + " " + row["status"].get<std::string>());
    const std::string enc = row["enclosure"];
    Q lo(enc.substr(0, enc.find(','))), hi(enc.substr(enc.find(',') + 1));
    lo.canonicalize();
    hi.canonicalize();
    require(o, Q(1, 4) <= lo && hi <= Q(7, 8), "enclosure " + enc);
    const Q ux = oracle::frac(Q(Z(row["u"].get<std::string>())) * x);
    require(o, lo <= ux && ux <= hi && Q(1, 4) <= ux && ux <= Q(7, 8), "exact {u x} = " + ux.get_str());
  }
  if (o.pass) o.detail = "20/20 certified, exact values inside";
  return o;
}

Outcome factorization(std::vector<ExperimentConfig>& log) {
  Outcome o;
  verify(log, "factor", o);
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<unsigned long> pick(1, 1000000000);
  for (int s = 0; s < 25; ++s) {
    const unsigned long u = pick(rng);
    ExperimentConfig c = base("factor");
    c.value = std::to_string(u);
    const Json f = run_json(log, c);
    // Trial division by successive ratios.
    std::uint64_t k = 0;
    Z v = static_cast<unsigned long>(u);
    while (v % oracle::linear1(k + 1) == 0) {
      v /= oracle::linear1(k + 1);
      ++k;
    }
    require(o, f["k"] == k && f["v"] == v.get_str(), "factor " + std::to_string(u));
  }
  if (o.pass) o.detail = "1000 suite cases + 25 trial-division cross-checks";
  return o;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  std::vector<Criterion> criteria = {
      {1, "zeta sequence", 1, zeta_sequence},
      {2, "lifting algebra", 5, lifting_algebra},
      {3, "tail bound", 5, tail_bound},
      {4, "recursion identity", 5, recursion},
      {5, "finite-support membership", 30, finite_support},
      {6, "strongly-non-dli density floor", 30, snd_floor},
      {7, "coincidence-regime scan", 300, coincidence_floor},
      {8, "weakly-dli shrinkage", 300, wdli_shrinkage},
      {9, "non-membership certification", 120, nonmember_certification},
      {10, "arbault certification", 60, arbault_certification},
      {11, "factorization", 10, factorization},
  };

  int failures = 0;
  std::vector<ExperimentConfig> all_configs;
  for (const Criterion& c : criteria) {
    std::vector<ExperimentConfig> log;
    const auto start = clock::now();
    Outcome o;
    try {
      o = c.body(log);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(clock::now() - start).count();
    if (secs > c.limit_s) {
      o.pass = false;
      o.detail = "took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit_s) + " s; " + o.detail;
    }
    failures += !o.pass;
    std::printf("%s %2d %-32s %8.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
    all_configs.insert(all_configs.end(), log.begin(), log.end());
  }

  // 12: every config above, serialized and replayed, gives the same bytes.
  const auto start = clock::now();
  std::size_t mismatched = 0;
  std::string first_bad;
  for (const ExperimentConfig& c : all_configs) {
    const std::string text = circlab::to_json(c).dump();
    const Report a = circlab::run(c);
    const Report b = circlab::run(circlab::config_from_text(text));
    if (a.out != b.out || a.exit_code != b.exit_code) {
      ++mismatched;
      if (first_bad.empty()) first_bad = text;
    }
  }
  const double secs = std::chrono::duration<double>(clock::now() - start).count();
  const bool ok = mismatched == 0;
  failures += !ok;
  std::printf("%s %2d %-32s %8.2fs  %s\n", ok ? "PASS" : "FAIL", 12, "replay determinism", secs,
              ok ? (std::to_string(all_configs.size()) + " configs byte-identical").c_str()
                 : ("first mismatch: " + first_bad).c_str());
  return failures == 0 ? 0 : 1;
}
