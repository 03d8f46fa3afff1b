#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "rotrep/csv.hpp"
#include "rotrep/experiments.hpp"
#include "test_util.hpp"

using namespace rotrep;

namespace {

ExperimentConfig tiny(std::uint64_t seed = 3) {
  ExperimentConfig c;
  c.kinds = {RepresentationKind::gram_schmidt(3), RepresentationKind::euler()};
  c.iterations = 40;
  c.batch_size = 8;
  c.test_set_size = 100;
  c.eval_every = 20;
  c.hidden = {16, 16};
  c.seed = seed;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Percentiles, Constant) {
  for (double v : error_percentiles(std::vector<double>(17, 4.5))) EXPECT_EQ(v, 4.5);
}

TEST(Percentiles, NearestRank) {
  std::vector<double> xs(100);
  std::iota(xs.begin(), xs.end(), 1.0);
  const auto p = error_percentiles(xs);
  EXPECT_EQ(p[2], 50.0);
  EXPECT_EQ(p[0], 10.0);
  EXPECT_EQ(p[6], 99.0);
  EXPECT_EQ(p[7], 100.0);
  EXPECT_TRUE(std::is_sorted(p.begin(), p.end()));
}

TEST(Percentiles, Empty) { EXPECT_ROTREP_ERROR(error_percentiles({}), ErrorKind::EmptyInput); }

TEST(Config, Validation) {
  ExperimentConfig c = tiny();
  c.iterations = 0;
  EXPECT_ROTREP_ERROR(c.validate(), ErrorKind::ConfigError);
  c = tiny();
  c.batch_size = 0;
  EXPECT_ROTREP_ERROR(c.validate(), ErrorKind::ConfigError);
  c = tiny();
  c.test_set_size = 0;
  EXPECT_ROTREP_ERROR(c.validate(), ErrorKind::ConfigError);
  c = tiny();
  c.kinds = {RepresentationKind::gram_schmidt(4)};
  EXPECT_ROTREP_ERROR(c.validate(), ErrorKind::ConfigError);
}

TEST(Config, ParseText) {
  const ExperimentConfig c = parse_config(
      "# sanity\nschema = 1\nkinds = gs6, p5,euler\nloss = geodesic\nsampler = haar\ntest_sampler = axis_angle\n"
      "iterations = 500\nbatch_size=32\nlr = 1e-4\nlr_after = 1e-5\nlr_switch = 100\ntest_set_size = 50\n"
      "eval_every = 10\nseed = 99\nmax_angle = 3.0\nleaky_slope = 0.2\nhidden = 32,32\nthreads = 2\n");
  EXPECT_EQ(c.kinds.size(), 3u);
  EXPECT_EQ(c.kinds[1], RepresentationKind::projected(3));
  EXPECT_EQ(c.loss, ad::LossKind::Geodesic);
  EXPECT_EQ(c.sampler, SamplerKind::Haar);
  EXPECT_EQ(c.test_sampler, SamplerKind::AxisAngle);
  EXPECT_EQ(c.iterations, 500u);
  EXPECT_EQ(c.batch_size, 32u);
  EXPECT_EQ(c.schedule.initial, 1e-4);
  EXPECT_EQ(c.schedule.after, 1e-5);
  EXPECT_EQ(c.schedule.switch_iteration, 100u);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.max_angle, 3.0);
  EXPECT_EQ(c.leaky_slope, 0.2);
  EXPECT_EQ(c.hidden, (std::vector<std::size_t>{32, 32}));
  EXPECT_EQ(c.threads, 2u);
}

TEST(Config, Errors) {
  EXPECT_ROTREP_ERROR(parse_config("kinds = gs6\n"), ErrorKind::ConfigError);
  EXPECT_ROTREP_ERROR(parse_config("schema = 2\n"), ErrorKind::ConfigError);
  EXPECT_ROTREP_ERROR(parse_config("schema = 1\nfoo = 3\n"), ErrorKind::ConfigError);
  EXPECT_ROTREP_ERROR(parse_config("schema = 1\niterations = -3\n"), ErrorKind::ConfigError);
  EXPECT_ROTREP_ERROR(parse_config("schema = 1\nkinds = gs6,nope\n"), ErrorKind::ConfigError);
  EXPECT_ROTREP_ERROR(parse_config("schema = 1\njust words\n"), ErrorKind::ConfigError);
  EXPECT_ROTREP_ERROR(load_config("/nonexistent/rotrep.cfg"), ErrorKind::IoError);
}

TEST(Sanity, ReportInvariants) {
  const auto reports = run_sanity_test(tiny());
  ASSERT_EQ(reports.size(), 2u);
  for (const auto& r : reports) {
    EXPECT_EQ(r.curve.size(), 3u);
    EXPECT_EQ(r.curve.front().iteration, 0u);
    EXPECT_EQ(r.curve.back().iteration, 40u);
    EXPECT_TRUE(std::is_sorted(r.percentiles.begin(), r.percentiles.end()));
    EXPECT_GE(r.max_deg, r.mean_deg);
    EXPECT_GE(r.mean_deg, 0.0);
    EXPECT_EQ(r.max_deg, r.percentiles.back());
    EXPECT_EQ(r.curve.back().mean_error_deg, r.mean_deg);
  }
}

TEST(Sanity, DeterministicAndThreadIndependent) {
  ExperimentConfig a = tiny(), b = tiny();
  b.threads = 2;
  const auto ra = run_sanity_test(a);
  const auto rb = run_sanity_test(b);
  for (std::size_t k = 0; k < ra.size(); ++k) {
    ASSERT_EQ(ra[k].curve.size(), rb[k].curve.size());
    for (std::size_t i = 0; i < ra[k].curve.size(); ++i) {
      EXPECT_EQ(ra[k].curve[i].mean_error_deg, rb[k].curve[i].mean_error_deg);
      EXPECT_EQ(ra[k].curve[i].test_loss, rb[k].curve[i].test_loss);
    }
  }
}

TEST(Report, FilesAndExactReread) {
  const ExperimentConfig c = tiny(12345);
  const auto reports = run_sanity_test(c);
  const auto dir = std::filesystem::temp_directory_path() / "rotrep_report_test";
  std::filesystem::remove_all(dir);
  write_report(c, reports, dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "curve_gs6.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "curve_euler.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "percentiles.csv"));

  std::ifstream in(dir / "curve_gs6.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "iteration,mean_error_deg,test_loss,train_loss");
  for (const auto& p : reports[0].curve) {
    ASSERT_TRUE(std::getline(in, line));
    const auto f = csv::split_line(line);
    EXPECT_EQ(csv::parse_double(f[1]), p.mean_error_deg);
    EXPECT_EQ(csv::parse_double(f[2]), p.test_loss);
  }

  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["seed"].get<std::uint64_t>(), 12345u);
  EXPECT_EQ(manifest["config"]["iterations"].get<std::size_t>(), 40u);
  EXPECT_EQ(manifest["runs"].size(), 2u);
  EXPECT_TRUE(manifest["runs"][0].contains("skipped_batches"));

  const auto dir2 = dir / "again";
  write_report(c, run_sanity_test(c), dir2);
  EXPECT_EQ(slurp(dir / "curve_gs6.csv"), slurp(dir2 / "curve_gs6.csv"));
  EXPECT_EQ(slurp(dir / "percentiles.csv"), slurp(dir2 / "percentiles.csv"));
}
