#pragma once

// One experiment = one serializable config in, one report out. The CLI is a
// thin shell over run(); replaying a config reproduces its report byte for byte.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace circlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
  std::string command;  // seq lift scan member classify witness verify factor
  std::string spec = "linear:1";
  std::string kind = "d";  // seq: a b d n
  std::uint64_t count = 10;
  std::string set;
  std::string x;
  std::string eps = "1/10";
  std::vector<std::uint64_t> horizons = {1000, 10000, 100000};
  std::uint64_t depth = 32;
  std::optional<std::uint64_t> cap;  // unset: CIRCLAB_DEPTH_CAP or 64
  std::uint64_t digit_horizon = 64;
  std::string property = "wdli";  // bbounded snd wdli
  std::string alpha = "1";
  std::string bound = "2";
  std::uint64_t horizon = 1000;
  std::string threshold = "1/100";
  std::string witness = "continuum";  // continuum nonmember arbault
  std::uint64_t m0 = 10;
  std::uint64_t n0 = 13;
  std::string bad_case = "I";
  std::uint64_t jmax = 8;
  std::string zeta;
  std::string u;  // comma list or adjacent:N (u_n = a_n + a_{n-1})
  std::uint64_t rows = 20;
  bool require_valid = true;
  std::string suite;
  std::uint64_t seed = 20240601;
  std::string value;
  std::string format = "json";  // json csv table
  unsigned threads = 1;
};

Json to_json(const ExperimentConfig& config);
// Unknown keys and wrong types are parse errors.
ExperimentConfig config_from_json(const Json& doc);
ExperimentConfig config_from_text(const std::string& text);

struct Report {
  int exit_code = 0;
  std::string out;
  std::string err;
};

Report run(const ExperimentConfig& config);

// Suite tags accepted by `verify`.
const std::vector<std::string>& suite_names();

// Runs one verify suite; the result carries "passed" and the first counterexample.
Json run_suite(const ExperimentConfig& config);

}  // namespace circlab
