#include <gtest/gtest.h>

#include "circlab/error.hpp"
#include "circlab/experiment.hpp"

using namespace circlab;

namespace {

ExperimentConfig cfg(const std::string& command) {
  ExperimentConfig c;
  c.command = command;
  c.cap = 64;
  return c;
}

}  // namespace

TEST(Run, SeqCsv) {
  ExperimentConfig c = cfg("seq");
  c.count = 7;
  c.format = "csv";
  const Report r = run(c);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "1,2,4,6,12,18,24\n");
}

TEST(Run, SeqKinds) {
  ExperimentConfig c = cfg("seq");
  c.format = "csv";
  c.count = 4;
  c.kind = "a";
  EXPECT_EQ(run(c).out, "1,2,6,24\n");
  c.kind = "b";
  EXPECT_EQ(run(c).out, "2,3,4,5\n");
  c.kind = "n";
  EXPECT_EQ(run(c).out, "1,2,4,7\n");
}

TEST(Run, LiftCsv) {
  ExperimentConfig c = cfg("lift");
  c.set = "fin:{3}";
  c.format = "csv";
  EXPECT_EQ(run(c).out, "[4,6]\n");
}

TEST(Run, ScanBounds) {
  ExperimentConfig c = cfg("scan");
  c.x = "rat:1/6";
  c.horizons = {100};
  const Report r = run(c);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["tool"], "circlab");
  EXPECT_EQ(doc["version"], kVersion);
  EXPECT_EQ(doc["result"]["rows"][0]["lower"], "3/100");
  EXPECT_EQ(doc["result"]["rows"][0]["upper"], "3/100");
  EXPECT_EQ(doc["result"]["membership"]["verdict"], "member");
}

TEST(Run, ExitCodes) {
  ExperimentConfig bad_spec = cfg("seq");
  bad_spec.spec = "nope:1";
  const Report a = run(bad_spec);
  EXPECT_EQ(a.exit_code, 2);
  EXPECT_TRUE(a.out.empty());
  EXPECT_NE(a.err.find("error:"), std::string::npos);

  ExperimentConfig zero = cfg("factor");
  zero.value = "0";
  EXPECT_EQ(run(zero).exit_code, 3);

  ExperimentConfig short_prefix = cfg("scan");
  short_prefix.spec = "const:2";
  short_prefix.x = "rat:1/7";
  short_prefix.digit_horizon = 6;
  short_prefix.horizons = {100};
  EXPECT_EQ(run(short_prefix).exit_code, 4);

  EXPECT_EQ(exit_code_for(ErrorKind::certification), 5);
  EXPECT_EQ(run(cfg("dance")).exit_code, 2);
}

TEST(Run, FinitePointIsNotANonmemberWitness) {
  ExperimentConfig c = cfg("witness");
  c.witness = "nonmember";
  c.spec = "pow:2";
  c.x = "finite:[1,1]";
  EXPECT_EQ(run(c).exit_code, 3);
}

TEST(Run, ClassifyVerdict) {
  ExperimentConfig c = cfg("classify");
  c.spec = "pow:2";
  c.property = "bbounded";
  c.set = "all";
  c.bound = "100";
  c.horizon = 10000;
  const Json doc = Json::parse(run(c).out);
  EXPECT_EQ(doc["result"]["verdict"], "fails-at-witness");
  EXPECT_EQ(doc["result"]["witness"], 7);
}

TEST(Run, TableFormatHasHeader) {
  ExperimentConfig c = cfg("scan");
  c.x = "rat:1/6";
  c.horizons = {10, 100};
  c.format = "table";
  const Report r = run(c);
  EXPECT_NE(r.out.find("N "), std::string::npos);
  EXPECT_NE(r.out.find("3/100"), std::string::npos);
}

TEST(Config, RoundTrip) {
  ExperimentConfig c = cfg("witness");
  c.witness = "arbault";
  c.u = "adjacent:40";
  c.rows = 7;
  c.horizons = {5, 50};
  const ExperimentConfig back = config_from_text(to_json(c).dump());
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Config, UnknownKeyRejected) {
  EXPECT_THROW(config_from_text(R"({"command":"seq","colour":"red"})"), ParseError);
  EXPECT_THROW(config_from_text(R"({"command":"seq","count":"seven"})"), ParseError);
  EXPECT_THROW(config_from_text("{"), ParseError);
}

TEST(Config, ReplayIsByteIdentical) {
  ExperimentConfig c = cfg("scan");
  c.spec = "pow:2";
  c.x = "periodic:[1,0]";
  c.eps = "1/8";
  c.horizons = {100, 1000, 5000};
  const Report first = run(c);
  const Report again = run(config_from_text(to_json(c).dump()));
  EXPECT_EQ(first.out, again.out);
  EXPECT_EQ(first.exit_code, again.exit_code);
}

TEST(Config, ReportEmbedsResolvedCap) {
  ExperimentConfig c = cfg("seq");
  c.cap.reset();
  const Json doc = Json::parse(run(c).out);
  EXPECT_TRUE(doc["config"]["cap"].is_number());
}

TEST(Suites, KnownTags) {
  for (const char* tag : {"lift-algebra", "tail-bound", "recursion", "snd-density", "wdli-shrink", "coincidence",
                          "arbault"}) {
    EXPECT_NE(std::find(suite_names().begin(), suite_names().end(), tag), suite_names().end()) << tag;
  }
  ExperimentConfig c = cfg("verify");
  c.suite = "nonsense";
  EXPECT_EQ(run(c).exit_code, 2);
}

TEST(Suites, QuickSuitesPass) {
  for (const char* tag : {"lift-algebra", "tail-bound", "recursion", "arbault", "factor"}) {
    ExperimentConfig c = cfg("verify");
    c.suite = tag;
    const Report r = run(c);
    EXPECT_EQ(r.exit_code, 0) << tag << ": " << r.err;
  }
}
