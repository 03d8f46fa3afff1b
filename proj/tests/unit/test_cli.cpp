#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "rotrep");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = rotrep::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, RoundTripPasses) {
  const auto r = run({"roundtrip", "--kinds", "gs6,p5,quat", "--n", "3", "--samples", "10000", "--seed", "7"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, RoundTripSo4) {
  const auto r = run({"roundtrip", "--n", "4", "--kinds", "gs", "--samples", "100"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("gs_n4"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"roundtrip", "--kinds", "bogus"}).code, 2);
  EXPECT_EQ(run({"roundtrip"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"probe", "--axis", "w"}).code, 2);
  EXPECT_EQ(run({"gradcheck", "--loss", "l3"}).code, 2);
  EXPECT_EQ(run({"sanity", "--kinds", "gs_n4", "--iterations", "1"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, CheckFailureExitsOne) {
  // a threshold nothing can meet
  EXPECT_EQ(run({"gradcheck", "--kinds", "gs6", "--points", "3", "--threshold", "0"}).code, 1);
}

TEST(Cli, GradcheckPrintsMaxError) {
  const auto r = run({"gradcheck", "--kinds", "gs6,p5"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("max rel. error"), std::string::npos);
}

TEST(Cli, CurvesWritesEighteenFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "rotrep_cli_curves";
  std::filesystem::remove_all(dir);
  EXPECT_EQ(run({"curves", "--out", dir.string(), "--samples", "64"}).code, 0);
  std::size_t count = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) count += e.path().extension() == ".csv";
  EXPECT_EQ(count, 18u);
  EXPECT_TRUE(std::filesystem::exists(dir / "euler_Z.csv"));
}

TEST(Cli, ProbeRuns) {
  const auto r = run({"probe", "--kinds", "gs6,euler", "--axis", "z", "--samples", "1000"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("euler,Z"), std::string::npos);
}

TEST(Cli, SanitySeedIsReproducible) {
  const auto base = std::filesystem::temp_directory_path() / "rotrep_cli_sanity";
  std::filesystem::remove_all(base);
  std::filesystem::create_directories(base);
  const auto cfg = base / "tiny.cfg";
  std::ofstream(cfg) << "schema = 1\nkinds = gs6\niterations = 30\nbatch_size = 8\ntest_set_size = 50\n"
                        "eval_every = 10\nhidden = 8\n";
  const auto a = run({"sanity", "--config", cfg.string(), "--out", (base / "a").string(), "--seed", "5"});
  const auto b = run({"sanity", "--config", cfg.string(), "--out", (base / "b").string(), "--seed", "5"});
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(slurp(base / "a" / "curve_gs6.csv"), slurp(base / "b" / "curve_gs6.csv"));
  EXPECT_NE(slurp(base / "a" / "manifest.json").find("\"seed\": 5"), std::string::npos);
}

TEST(Cli, SeedFallsBackToEnvironment) {
  const auto base = std::filesystem::temp_directory_path() / "rotrep_cli_env";
  std::filesystem::remove_all(base);
  ::setenv("ROTKIT_SEED", "77", 1);
  const auto r = run({"sanity", "--kinds", "gs6", "--iterations", "2", "--out", base.string()});
  ::unsetenv("ROTKIT_SEED");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("seed 77"), std::string::npos);
}
