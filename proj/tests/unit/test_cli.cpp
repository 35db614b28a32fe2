#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "finmode/cli.hpp"

using nlohmann::json;
namespace cli = finmode::cli;

namespace {

struct Outcome {
  int code;
  std::string out, err;
  json doc() const { return json::parse(out); }
};

Outcome run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "finmode_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, MakeAbcClassifiesAsBeltramiPlus) {
  const Outcome made = run({"make", "abc", "--A", "1", "--B", "1", "--C", "1"});
  ASSERT_EQ(made.code, cli::kExitOk) << made.err;
  const Outcome cls = run({"classify", "-"}, made.out);
  ASSERT_EQ(cls.code, cli::kExitOk) << cls.err;
  EXPECT_EQ(cls.doc()["family"], "beltrami");
  EXPECT_EQ(cls.doc()["payload"]["sign"], "plus");
  EXPECT_EQ(cls.doc()["payload"]["lambda"], 1.0);
}

TEST(Cli, MakePlanarQOmegaSquared) {
  const Outcome made = run({"make", "planar-q", "--normal", "0,0,1", "--q", "0,1"});
  ASSERT_EQ(made.code, cli::kExitOk) << made.err;
  const json cert = run({"classify", "-"}, made.out).doc();
  EXPECT_EQ(cert["family"], "planar_q");
  ASSERT_EQ(cert["payload"]["q"].size(), 2u);
  EXPECT_NEAR(cert["payload"]["q"][0].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(cert["payload"]["q"][1].get<double>(), 1.0, 1e-12);
}

TEST(Cli, EveryKindRoundTripsForTwentySeeds) {
  const std::vector<std::pair<std::vector<std::string>, std::string>> kinds{
      {{"line", "--direction", "1,2,-1"}, "line"},
      {{"planar-perp", "--normal", "1,1,0"}, "planar_perp"},
      {{"planar-q", "--normal", "1,2,2", "--q", "0.5,-1", "--random-alpha"}, "planar_q"},
      {{"beltrami-random", "--modes", "10"}, "beltrami"},
      {{"beltrami-random", "--sign", "minus"}, "beltrami"},
  };
  for (const auto& [flags, family] : kinds)
    for (int seed = 1; seed <= 20; ++seed) {
      std::vector<std::string> args{"make"};
      args.insert(args.end(), flags.begin(), flags.end());
      args.insert(args.end(), {"--seed", std::to_string(seed)});
      const Outcome made = run(args);
      ASSERT_EQ(made.code, cli::kExitOk) << flags[0] << " " << made.err;
      EXPECT_NE(made.err.find("seed: " + std::to_string(seed)), std::string::npos);
      ASSERT_EQ(run({"validate", "-"}, made.out).code, cli::kExitOk);
      const Outcome cls = run({"classify", "-"}, made.out);
      ASSERT_EQ(cls.code, cli::kExitOk) << cls.err;
      EXPECT_EQ(cls.doc()["family"], family) << flags[0] << " seed " << seed;
    }
}

TEST(Cli, OutputIsByteDeterministic) {
  const std::vector<std::string> args{"make", "beltrami-random", "--seed", "7", "--modes", "10"};
  EXPECT_EQ(run(args).out, run(args).out);
  const Outcome a = run({"classify", fixture("beltrami_random.json")});
  const Outcome b = run({"--threads", "4", "classify", fixture("beltrami_random.json")});
  EXPECT_EQ(a.out, b.out);
  const Outcome s1 = run({"simulate", fixture("perturbed.json"), "--t-end", "0.05", "--dt", "0.01"});
  const Outcome s4 = run({"--threads", "3", "simulate", fixture("perturbed.json"), "--t-end", "0.05", "--dt", "0.01"});
  EXPECT_EQ(s1.out, s4.out);
}

TEST(Cli, DefaultSeedIsPrinted) {
  const Outcome made = run({"make", "beltrami-random"});
  EXPECT_NE(made.err.find("seed: " + std::to_string(cli::kDefaultSeed)), std::string::npos);
}

TEST(Cli, ClassifyNscAbc) {
  const Outcome cls = run({"classify", fixture("abc.json"), "--nu", "1", "--omega", "2"});
  ASSERT_EQ(cls.code, cli::kExitOk) << cls.err;
  const json doc = cls.doc();
  EXPECT_EQ(doc["nu"], 1.0);
  EXPECT_EQ(doc["omega"], 2.0);
  EXPECT_EQ(doc["certificate"]["family"], "beltrami");
}

TEST(Cli, PerturbedFieldIsAVerdictNotAnError) {
  const Outcome cls = run({"classify", fixture("perturbed.json")});
  EXPECT_EQ(cls.code, cli::kExitVerdict);
  EXPECT_EQ(cls.doc()["family"], "non_solution");
  EXPECT_GT(cls.doc()["payload"]["residual"].get<double>(), 0.1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"make", "abc", "--frobnicate", "1"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"make", "sphere"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"make", "planar-q", "--normal", "0,0,1", "--q", "1", "--q0", "1"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"classify", fixture("does_not_exist.json")}).code, cli::kExitUsage);
  EXPECT_EQ(run({"classify", "-"}, "{not json").code, cli::kExitUsage);
  EXPECT_EQ(run({"classify", fixture("tetrahedron.json")}).code, cli::kExitUsage);
  EXPECT_EQ(run({"simulate", fixture("abc.json"), "--dt", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"simulate", fixture("abc.json"), "--truncation", "huge"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "no-such-lemma"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "sip", "--trials", "0"}).code, cli::kExitUsage);
}

TEST(Cli, ValidateReportsViolations) {
  const Outcome ok = run({"validate", fixture("abc.json")});
  EXPECT_EQ(ok.code, cli::kExitOk);
  EXPECT_EQ(ok.doc()["modes"], 6);
  const std::string bad = R"({"real_valued": true, "modes": [
    {"n": [[1,1],[0,1],[0,1]], "re": [1, 0, 0], "im": [0, 0, 0]},
    {"n": [[-1,1],[0,1],[0,1]], "re": [1, 0, 0], "im": [0, 0, 0]}]})";
  const Outcome r = run({"validate", "-"}, bad);
  EXPECT_EQ(r.code, cli::kExitVerdict);
  ASSERT_EQ(r.doc()["violations"].size(), 1u);
  EXPECT_EQ(r.doc()["violations"][0]["kind"], "nonzero_divergence");
}

TEST(Cli, ClassifyRemovesAZeroMode) {
  json doc = json::parse(std::ifstream(fixture("abc.json")));
  doc["zero_mode"] = {0.5, 0.0, 0.0};
  const Outcome cls = run({"classify", "-"}, doc.dump());
  ASSERT_EQ(cls.code, cli::kExitOk) << cls.err;
  EXPECT_EQ(cls.doc()["family"], "beltrami");
  EXPECT_EQ(cls.doc()["removed_zero_mode"], json({0.5, 0.0, 0.0}));
}

TEST(Cli, SimulateWritesTrajectoryAndDiagnostics) {
  const auto jsonl = scratch("abc.jsonl"), csv = scratch("abc.csv");
  const Outcome sim = run({"simulate", fixture("abc.json"), "--t-end", "0.1", "--dt", "0.01", "--jsonl", jsonl.string(),
                       "--csv", csv.string(), "--stride", "5"});
  ASSERT_EQ(sim.code, cli::kExitOk) << sim.err;
  const json report = sim.doc();
  EXPECT_EQ(report["steps"], 10);
  EXPECT_TRUE(report["support_growth"].empty());
  EXPECT_LT(std::abs(report["energy_relative_change"].get<double>()), 1e-12);

  std::ifstream c(csv);
  std::string line;
  std::getline(c, line);
  EXPECT_EQ(line, "t,energy,helicity,realness_drift,active_modes");
  int rows = 0;
  while (std::getline(c, line)) ++rows;
  EXPECT_EQ(rows, 11);

  std::ifstream j(jsonl);
  std::vector<json> snaps;
  while (std::getline(j, line)) snaps.push_back(json::parse(line));
  ASSERT_EQ(snaps.size(), 3u);
  EXPECT_EQ(snaps.front()["t"], 0.0);
  EXPECT_DOUBLE_EQ(snaps.back()["t"].get<double>(), 0.1);
  EXPECT_EQ(snaps.back()["modes"].size(), 6u);
}

TEST(Cli, SimulateViscousDecayRate) {
  const Outcome sim = run({"simulate", fixture("abc.json"), "--t-end", "1", "--dt", "0.001", "--nu", "0.5"});
  ASSERT_EQ(sim.code, cli::kExitOk);
  EXPECT_NEAR(sim.doc()["energy_decay_rate"].get<double>(), 2 * 0.5 * 1.0, 1e-9);
}

TEST(Cli, SimulatePerturbedLeaks) {
  const Outcome sim = run({"simulate", fixture("perturbed.json"), "--t-end", "0.01", "--dt", "0.001"});
  ASSERT_EQ(sim.code, cli::kExitOk);
  EXPECT_FALSE(sim.doc()["support_growth"].empty());
}

TEST(Cli, VerifyCampaigns) {
  for (const std::string lemma : {"two-mode", "rotation-loop", "sip", "beltrami-noninteraction", "gauss-bonnet"}) {
    const Outcome r = run({"verify", lemma, "--trials", "200", "--seed", "11"});
    EXPECT_EQ(r.code, cli::kExitOk) << lemma << r.out;
    EXPECT_EQ(r.doc()["passed"], true);
    EXPECT_EQ(r.doc()["trials"], 200);
  }
}
