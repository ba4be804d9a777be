#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gencvx/commands.hpp"
#include "gencvx/corpus.hpp"
#include "gencvx/report.hpp"

namespace gencvx {
namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gencvx_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Invocation run(const std::string& args, const std::string& env = "") {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = env + " \"" GENCVX_CLI_PATH "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  fs::path dir_;
};

TEST_F(Cli, AnalyzeFractionalHolds) {
  const fs::path out = dir_ / "r.json";
  const Invocation r = run("analyze --corpus fractional --properties pseudolinear --seed 42 --out " + out.string());
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const Report rep = report_from_json(slurp(out));
  ASSERT_EQ(rep.verdicts.size(), 1u);
  EXPECT_EQ(rep.verdicts[0].verdict, Verdict::holds_at_samples);
  EXPECT_NE(r.err.find("pseudolinear holds-at-samples witnesses=0"), std::string::npos) << r.err;
}

TEST_F(Cli, AnalyzeCubeIsRefutedNearOrigin) {
  const Invocation r = run("analyze --function \"x1^3\" --dim 1 --region \"box(-1..1)\" --properties pseudoconvex");
  EXPECT_EQ(r.code, kExitRefuted) << r.err;
  const Report rep = report_from_json(r.out);
  ASSERT_FALSE(rep.verdicts[0].witnesses.empty());
  EXPECT_LT(std::abs(rep.verdicts[0].witnesses[0].x[0]), 1e-2);
}

TEST_F(Cli, SyntaxErrorLeavesNoReport) {
  const fs::path out = dir_ / "r.json";
  const Invocation r = run("analyze --function \"min(x1\" --out " + out.string());
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("offset 7"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(out));
  EXPECT_FALSE(fs::exists(dir_ / "r.json.tmp"));
}

TEST_F(Cli, BadRegionAndUnknownFlags) {
  EXPECT_EQ(run("analyze --function x1 --dim 1 --region \"box(1..0)\"").code, kExitError);
  EXPECT_EQ(run("analyze --corpus nope").code, kExitError);
  EXPECT_EQ(run("analyze --corpus affine --bogus").code, kExitError);
  EXPECT_EQ(run("").code, kExitError);
}

TEST_F(Cli, BCurveFractional) {
  const Invocation r = run("bcurve --corpus fractional --x 1,0 --y 2,2 --lambda-grid 5");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "lambda,b,lambda_b,strict,weak,degenerate");
  int k = 0;
  while (std::getline(lines, line)) {
    ++k;
    const double l = std::stod(line.substr(0, line.find(',')));
    const std::string rest = line.substr(line.find(',') + 1);
    EXPECT_NEAR(l, k / 6.0, 1e-16);
    EXPECT_NEAR(std::stod(rest.substr(0, rest.find(','))), 2.0 / (1.0 + l), 1e-12);
    EXPECT_TRUE(line.ends_with(",1,1,0")) << line;
  }
  EXPECT_EQ(k, 5);
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
}

TEST_F(Cli, BCurveAffineAndDegenerate) {
  const Invocation a = run("bcurve --corpus affine --x 0,0 --y 0.5,0.25 --lambda-grid 3");
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_NE(a.out.find("0.25,1,0.25,1,1,0\n"), std::string::npos) << a.out;
  const Invocation d = run("bcurve --corpus fractional --x 1,0.5 --y 2,1 --lambda-grid 3");
  ASSERT_EQ(d.code, kExitOk) << d.err;
  EXPECT_NE(d.out.find("0.5,1,0.5,"), std::string::npos) << d.out;
  EXPECT_NE(d.out.find(",1\n"), std::string::npos);
}

TEST_F(Cli, BCurveNeedsEndpointsInDomain) {
  EXPECT_EQ(run("bcurve --corpus fractional --x -1,0 --y 2,2").code, kExitError);
  EXPECT_EQ(run("bcurve --corpus fractional --x 1,0").code, kExitError);
}

TEST_F(Cli, ReportsAreByteIdentical) {
  const std::string args = "analyze --corpus ramp --seed 5 --out ";
  ASSERT_EQ(run(args + (dir_ / "a.json").string()).code, kExitRefuted);
  ASSERT_EQ(run(args + (dir_ / "b.json").string()).code, kExitRefuted);
  std::string a = slurp(dir_ / "a.json");
  std::string b = slurp(dir_ / "b.json");
  // Only the echoed output path differs.
  a.replace(a.find("a.json"), 6, "X.json");
  b.replace(b.find("b.json"), 6, "X.json");
  EXPECT_EQ(a, b);
}

TEST_F(Cli, SeedPrecedence) {
  const fs::path cfg = dir_ / "cfg.json";
  std::ofstream(cfg) << R"({"corpus": "affine", "seed": 11, "samples": 30, "properties": ["quasiconvex"]})";
  const auto seed_of = [&](const Invocation& r) {
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return report_from_json(r.out).config.plan.seed;
  };
  EXPECT_EQ(seed_of(run("analyze --config " + cfg.string())), 11u);
  EXPECT_EQ(seed_of(run("analyze --config " + cfg.string() + " --seed 12")), 12u);
  EXPECT_EQ(seed_of(run("analyze --config " + cfg.string(), "GENCVX_SEED=13")), 11u);
  EXPECT_EQ(seed_of(run("analyze --corpus affine --samples 30 --properties quasiconvex", "GENCVX_SEED=13")), 13u);
  EXPECT_EQ(seed_of(run("analyze --corpus affine --samples 30 --properties quasiconvex", "GENCVX_SEED=")), 42u);
  const Invocation file = run("analyze --config " + cfg.string() + " --samples 40");
  EXPECT_EQ(report_from_json(file.out).config.plan.pair_count, 40u);
}

TEST_F(Cli, SchemeFlags) {
  const Invocation r = run(
      "analyze --corpus piecewise --properties pseudoconvex --samples 30 --clarke-steps 1e-2:1e-5:4 "
      "--clarke-probes 16 --subdiff-radius 1e-5 --subdiff-count 8 --lambda-grid 9 --workers 2");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const RunConfig c = report_from_json(r.out).config;
  EXPECT_EQ(c.plan.clarke.steps.size(), 4u);
  EXPECT_EQ(c.plan.clarke.probes, 16u);
  EXPECT_EQ(c.plan.subdiff_radius, 1e-5);
  EXPECT_EQ(c.plan.subdiff_count, 8u);
  EXPECT_EQ(c.plan.lambda_grid, 9u);
  EXPECT_EQ(run("analyze --corpus affine --clarke-steps 1e-3,1e-2").code, kExitError);
}

TEST_F(Cli, CorpusExitCodes) {
  EXPECT_EQ(run("corpus --seed 42").code, kExitOk);
  const Invocation starved = run("corpus --samples 1");
  EXPECT_EQ(starved.code, kExitInsufficient);
  EXPECT_NE(starved.err.find("insufficient sampling"), std::string::npos);
}

TEST(Corpus, InjectedWrongLabelIsAMismatch) {
  std::vector<CorpusEntry> entries = corpus();
  entries[0].labels[Property::quasiconvex] = false;
  RunConfig config;
  config.plan.pair_count = 40;
  const CorpusReport r = run_corpus(config, entries);
  EXPECT_EQ(r.exit_code, kExitMismatch);
  ASSERT_EQ(r.mismatches.size(), 1u);
  EXPECT_EQ(r.mismatches[0].function, "affine");
  EXPECT_EQ(r.mismatches[0].property, Property::quasiconvex);
}

TEST(Corpus, MismatchOutranksInconclusive) {
  std::vector<CorpusEntry> entries{*find_corpus_entry("cubic")};
  entries[0].labels[Property::pseudoconvex] = true;
  RunConfig config;
  // Unreachable support turns every non-refuted verdict inconclusive.
  config.plan.min_support = 100000;
  const CorpusReport r = run_corpus(config, entries);
  EXPECT_GT(r.inconclusive, 0u);
  ASSERT_EQ(r.mismatches.size(), 1u);
  EXPECT_EQ(r.exit_code, kExitMismatch);
}

}  // namespace
}  // namespace gencvx
