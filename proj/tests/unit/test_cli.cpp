#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "obseq/version.hpp"

using obseq::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  const char* dir = std::getenv("OBSEQ_TEST_TMP");
  return std::string(dir ? dir : ".") + "/" + name;
}

}  // namespace

TEST(Cli, EntropyPrintsBareValue) {
  const Result r = invoke({"entropy", "--probs", "0.5,0.5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1.0\n");
}

TEST(Cli, CertifyMarkovPasses) {
  const Result r = invoke({"certify-markov", "--n", "1", "--len", "1000000", "--seed", "42"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("version"), obseq::kVersion);
  EXPECT_EQ(j.at("seed"), 42U);
  EXPECT_EQ(j.at("invocation").size(), 7U);
  for (const auto& [name, cert] : j.at("result").at("certificates").items()) EXPECT_TRUE(cert.at("pass")) << name;
}

TEST(Cli, SameArgumentsSameReport) {
  const std::vector<std::string> args{"mixing", "--a", "0,0,0.5,1", "--lag-max", "3", "--samples", "5000", "--seed", "9"};
  EXPECT_EQ(invoke(args).out, invoke(args).out);
}

TEST(Cli, BernoulliTestRejectsDyadicCoarseGraining) {
  const std::string path = temp_path("cli_dyadic1.json");
  ASSERT_EQ(invoke({"coarse-grain", "--partition", "dyadic:1", "--len", "100000", "--seed", "3", "--out", path}).code,
            0);
  const Result r = invoke({"test-bernoulli", "--in", path});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(nlohmann::json::parse(r.out).at("result").at("rejected"));
  EXPECT_EQ(invoke({"test-markov", "--in", path}).code, 0);
}

TEST(Cli, SymbolFileRoundTrip) {
  const std::string path = temp_path("cli_bern.txt");
  ASSERT_EQ(invoke({"sample", "--bernoulli", "0.5,0.5", "--len", "50000", "--seed", "1", "--format", "csv", "--out", path})
                .code,
            0);
  std::ifstream is(path);
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "alphabet=2");
  EXPECT_EQ(invoke({"test-bernoulli", "--in", path}).code, 0);
  EXPECT_EQ(invoke({"window-equiv", "--in", path, "--against-bernoulli", "0.5,0.5", "--seed", "2"}).code, 0);
  EXPECT_EQ(invoke({"window-equiv", "--in", path, "--against-bernoulli", "0.7,0.3", "--seed", "2"}).code, 2);
}

TEST(Cli, ChainAnalyze) {
  const Result r = invoke({"chain-analyze", "--markov", "0,1;1,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = nlohmann::json::parse(r.out).at("result");
  EXPECT_TRUE(res.at("irreducible"));
  EXPECT_FALSE(res.at("aperiodic"));
  EXPECT_EQ(res.at("periods")[0], 2);
  EXPECT_FALSE(res.at("nontriviality").at("nontrivial"));
}

TEST(Cli, CongruenceFromEpsilon) {
  const Result r = invoke({"congruence", "--epsilon", "0.05"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out).at("result").at("level"), 5);
}

TEST(Cli, ConjugacyAndOrbit) {
  EXPECT_EQ(invoke({"conjugacy", "--points", "100", "--seed", "5"}).code, 0);
  const Result r = invoke({"orbit", "--x", "0.3", "--y", "0.2", "--len", "2", "--format", "csv"});
  EXPECT_EQ(r.out, "x,y\n0.3,0.2\n0.6,0.1\n");
}

TEST(Cli, UsageErrorsNameTheFlag) {
  Result r = invoke({"transition", "--len", "10"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--seed"), std::string::npos);
  r = invoke({"coarse-grain", "--partition", "dyadic:x", "--seed", "1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--partition"), std::string::npos);
  r = invoke({"entropy", "--format", "xml", "--probs", "1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--format"), std::string::npos);
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"nope"}).code, 1);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, VerdictFailureStillWritesReport) {
  const Result r = invoke({"test-markov", "--markov", "0.5,0.5;0.5,0.5", "--len", "100", "--seed", "1"});
  EXPECT_EQ(r.code, 1);  // too short to test
  const Result s = invoke({"test-bernoulli", "--markov", "0.9,0.1;0.1,0.9", "--len", "20000", "--seed", "1"});
  EXPECT_EQ(s.code, 2);
  EXPECT_FALSE(s.out.empty());
}
