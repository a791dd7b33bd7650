// circlab command line: each subcommand fills an ExperimentConfig and hands it to run().

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "circlab/experiment.hpp"
#include "circlab/error.hpp"
#include "circlab/parse.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  using circlab::ExperimentConfig;
  CLI::App app{"circlab: exact experiments on statistically convergent sequences of the circle"};
  app.require_subcommand(1);
  app.set_version_flag("--version", circlab::kVersion);
  app.fallthrough();

  ExperimentConfig c;
  std::string horizons_text;
  std::uint64_t cap = 0;
  std::string config_path;
  bool emit_config = false;

  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
  app.add_option("--cap", cap, "Depth cap for enclosure refinement (default: CIRCLAB_DEPTH_CAP or 64)");
  app.add_option("--threads", c.threads, "Worker threads for scans (0 = all cores)");
  app.add_flag("--emit-config", emit_config, "Print the resolved config as JSON instead of running");

  auto* seq = app.add_subcommand("seq", "Print a_k, b_n, d_i or n_k");
  seq->add_option("--spec", c.spec, "Ratio spec")->required();
  seq->add_option("--kind", c.kind, "a, b, d or n")->check(CLI::IsMember({"a", "b", "d", "n"}));
  seq->add_option("--count", c.count, "Number of terms");

  auto* lift = app.add_subcommand("lift", "Lift a set of base indices onto derived indices");
  lift->add_option("--spec", c.spec, "Ratio spec")->required();
  lift->add_option("--set", c.set, "Set expression")->required();
  lift->add_option("--horizon", c.horizon, "Derived-index horizon for infinite sets");

  auto* scan = app.add_subcommand("scan", "Bound the density of {i <= N : ||d_i x|| >= eps}");
  scan->add_option("--spec", c.spec, "Ratio spec")->required();
  scan->add_option("--x", c.x, "Digit rule")->required();
  scan->add_option("--eps", c.eps, "Threshold p/q");
  scan->add_option("--horizons", horizons_text, "Increasing comma list of N");
  scan->add_option("--depth", c.depth, "Initial enclosure depth t");
  scan->add_option("--digit-horizon", c.digit_horizon, "Digits kept for rat: points");

  auto* classify = app.add_subcommand("classify", "Finite-horizon class checks of a ratio spec");
  classify->add_option("--spec", c.spec, "Ratio spec")->required();
  classify->add_option("--property", c.property, "bbounded, snd or wdli")
      ->check(CLI::IsMember({"bbounded", "snd", "wdli"}));
  classify->add_option("--horizon", c.horizon, "Horizon H");
  classify->add_option("--alpha", c.alpha, "alpha for snd");
  classify->add_option("--bound", c.bound, "M for bbounded");
  classify->add_option("--set", c.set, "Index set for bbounded (default all)");
  classify->add_option("--threshold", c.threshold, "Ratio threshold for wdli");

  auto* witness = app.add_subcommand("witness", "Build and certify an explicit witness");
  witness->add_option("--kind", c.witness, "continuum, nonmember or arbault")
      ->check(CLI::IsMember({"continuum", "nonmember", "arbault"}));
  witness->add_option("--spec", c.spec, "Ratio spec");
  witness->add_option("--x", c.x, "Digit rule (nonmember)");
  witness->add_option("--eps", c.eps, "Threshold (continuum)");
  witness->add_option("--horizons", horizons_text, "Scan horizons (continuum)");
  witness->add_option("--horizon", c.horizon, "Derived-index horizon (nonmember)");
  witness->add_option("--depth", c.depth, "Initial enclosure depth t");
  witness->add_option("--jmax", c.jmax, "Witness set size (continuum)");
  witness->add_option("--zeta", c.zeta, "0/1 string selecting the family member (continuum)");
  witness->add_option("--m0", c.m0, "m_0 (nonmember)");
  witness->add_option("--n0", c.n0, "n_0 (nonmember)");
  witness->add_option("--case", c.bad_case, "I or II (nonmember)")->check(CLI::IsMember({"I", "II"}));
  witness->add_option("--bound", c.bound, "Ratio bound for the A_3 split (nonmember)");
  witness->add_option("--u", c.u, "Comma list or adjacent:N (arbault)");
  witness->add_option("--rows", c.rows, "Rows to certify (arbault)");
  bool allow_invalid = false;
  witness->add_flag("--allow-invalid", allow_invalid, "Keep indices with no valid e (arbault)");
  witness->add_option("--digit-horizon", c.digit_horizon, "Digits kept for rat: points");

  auto* factor = app.add_subcommand("factor", "Write u = a_k v with k maximal");
  factor->add_option("--spec", c.spec, "Ratio spec");
  factor->add_option("u", c.value, "Positive integer")->required();

  auto* verify = app.add_subcommand("verify", "Run a property suite");
  verify->add_option("suite", c.suite, "Suite tag")->required()->check(CLI::IsMember(circlab::suite_names()));
  verify->add_option("--seed", c.seed, "Seed for randomized suites");

  auto* replay = app.add_subcommand("replay", "Re-run a serialized config");
  replay->add_option("config", config_path, "Config JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (replay->parsed()) {
      c = circlab::config_from_text(read_file(config_path));
    } else {
      c.command = app.get_subcommands().front()->get_name();
      if (!horizons_text.empty()) c.horizons = circlab::parse_u64_list(horizons_text);
      if (app.count("--cap")) c.cap = cap;
      c.require_valid = !allow_invalid;
    }
  } catch (const circlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return circlab::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (emit_config) {
    std::cout << circlab::to_json(c).dump(2) << "\n";
    return 0;
  }
  const circlab::Report report = circlab::run(c);
  std::cout << report.out;
  std::cerr << report.err;
  return report.exit_code;
}
