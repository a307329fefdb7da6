#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "seqelim/cli.hpp"
#include "seqelim/report.hpp"

using namespace seqelim;

namespace {

ExperimentReport sample_report() {
  ExperimentReport rep;
  rep.setup = "setup1";
  rep.num_arms = 3;
  rep.budget = 30;
  rep.runs = 8;
  rep.root_seed = 5;
  rep.means = {0.7, 0.6, 0.6};
  AlgorithmStats a;
  a.algorithm = parse_algorithm("nseqel:0.75");
  a.completed = 8;
  a.misidentified = 3;
  a.frequency = 3.0 / 8;
  a.ci_half = normal_ci_half(3, 8);
  AlgorithmStats b;
  b.algorithm = parse_algorithm("seqhalv");
  b.completed = 8;
  b.misidentified = 4;
  b.frequency = 0.5;
  b.ci_half = normal_ci_half(4, 8);
  rep.results = {a, b};
  return rep;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<const char*> args) {
  args.insert(args.begin(), "seqelim");
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(args.size()), args.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Report, CsvGolden) {
  std::ostringstream out;
  write_csv(sample_report(), out);
  EXPECT_EQ(out.str(),
            "setup,K,T,runs,alg,params,errors,freq,ci_half,seed\n"
            "setup1,3,30,8,nseqel,p=0.75,0,0.375000,0.335480,5\n"
            "setup1,3,30,8,seqhalv,,0,0.500000,0.346482,5\n");
}

TEST(Report, JsonRoundTrip) {
  const auto rep = sample_report();
  const std::string text = to_json_string(rep);
  const auto back = report_from_json(text);
  EXPECT_EQ(back.setup, rep.setup);
  EXPECT_EQ(back.means, rep.means);
  ASSERT_EQ(back.results.size(), 2u);
  EXPECT_EQ(back.results[0].algorithm, rep.results[0].algorithm);
  EXPECT_EQ(back.results[1].misidentified, 4u);
  EXPECT_EQ(to_json_string(back), text);
  EXPECT_EQ(reports_from_json("[" + text + "," + text + "]").size(), 2u);

  std::string bad = text;
  bad.replace(bad.find("0.375"), 5, "0.374");
  EXPECT_THROW(report_from_json(bad), std::invalid_argument);
  EXPECT_THROW(report_from_json("{"), std::invalid_argument);
  EXPECT_THROW(report_from_json("{}"), std::invalid_argument);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({}).code, cli::kExitConfig);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitConfig);
  EXPECT_EQ(invoke({"run", "--setup", "9", "--k", "40"}).code, cli::kExitConfig);
  EXPECT_EQ(invoke({"run", "--setup", "1", "--k", "50"}).code, cli::kExitConfig);
  EXPECT_EQ(invoke({"run", "--means", "0.5,0.5"}).code, cli::kExitConfig);
  EXPECT_EQ(invoke({"run", "--means", "0.7,0.6", "--alg", "bogus"}).code, cli::kExitConfig);
  EXPECT_EQ(invoke({"run", "--means", "0.7,0.6", "--T", "1"}).code, cli::kExitConfig);
  EXPECT_EQ(invoke({"advise-p", "--k", "40"}).code, cli::kExitConfig);
  EXPECT_EQ(invoke({"oracle", "--setup", "1", "--k", "40", "--alg", "succrej", "--limit", "100"}).code,
            cli::kExitRuntime);
  EXPECT_EQ(invoke({"--help"}).code, cli::kExitOk);
}

TEST(Cli, BoundAndAdvice) {
  const auto b = invoke({"bound", "--setup", "1", "--k", "40"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.out.find("T=3900"), std::string::npos);
  EXPECT_NE(b.out.find("H2 = 4000"), std::string::npos);
  const auto a = invoke({"advise-p", "--k", "40", "--gamma", "0.5"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("(0.29, 1.71)"), std::string::npos);
}

TEST(Cli, RunWritesCsvAndSummaryReadsJson) {
  const auto r = invoke({"run", "--means", "0.7,0.6,0.5", "--T", "60", "--runs", "50", "--alg",
                      "succrej,seqhalv", "--out", "-", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("setup,K,T,runs,alg,params,errors,freq,ci_half,seed\ncustom,3,60,50,succrej,"),
            std::string::npos);

  const auto path = std::filesystem::temp_directory_path() / "seqelim_cli_test.json";
  const std::string p = path.string();
  const auto w = invoke({"bench", "--setup", "geo7", "--runs", "20", "--alg", "nseqel:1.7,seqhalv",
                      "--out", p.c_str()});
  ASSERT_EQ(w.code, 0) << w.err;
  const auto s = invoke({"summary", "--in", p.c_str()});
  EXPECT_EQ(s.code, 0) << s.err;
  EXPECT_NE(s.out.find("nseqel:1.7"), std::string::npos);
  EXPECT_EQ(s.out, w.out);
  std::filesystem::remove(path);
}

TEST(Cli, OracleAndBlock) {
  const auto o = invoke({"oracle", "--means", "0.7,0.6", "--alg", "succrej", "--T", "10"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("P(misidentification)"), std::string::npos);
  const auto b = invoke({"block", "--means", "0.9,0.5,0.3,0.1", "--blocks", "2x2", "--T", "20",
                      "--runs", "100"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.out.find("H(M,p)"), std::string::npos);
  EXPECT_EQ(invoke({"block", "--means", "0.9,0.5,0.3", "--blocks", "2x2"}).code, cli::kExitConfig);
}
