#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rotrep/checks.hpp"
#include "rotrep/csv.hpp"
#include "rotrep/experiments.hpp"
#include "rotrep/gradcheck.hpp"
#include "rotrep/probe.hpp"

namespace rotrep::cli {

namespace {

using csv::format_summary;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<RepresentationKind> parse_kinds(const std::string& list, std::size_t n) {
  std::vector<RepresentationKind> kinds;
  for (const auto& name : split_commas(list)) {
    try {
      RepresentationKind k = parse_kind(name, n);
      (void)k.dimension();
      kinds.push_back(k);
    } catch (const Error& e) {
      throw UsageError(std::string("unknown or invalid kind: ") + e.what());
    }
  }
  if (kinds.empty()) throw UsageError("--kinds must name at least one representation");
  return kinds;
}

// --seed wins, then ROTKIT_SEED, then the fallback
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("ROTKIT_SEED"); env && *env) {
    std::uint64_t v = 0;
    const std::string s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw UsageError("ROTKIT_SEED is not an unsigned integer: " + s);
    return v;
  }
  return fallback;
}

bool seed_from_env() {
  const char* env = std::getenv("ROTKIT_SEED");
  return env && *env;
}

const std::vector<std::string> kCurveKinds = {"raw9", "gs6", "p5", "uquat", "axisangle", "euler"};

int cmd_roundtrip(const std::string& kinds_arg, std::size_t n, std::size_t samples, std::optional<std::uint64_t> seed_flag,
                  std::ostream& out) {
  const auto kinds = parse_kinds(kinds_arg, n);
  const std::uint64_t seed = resolve_seed(seed_flag, 0);
  out << "kind,n,samples,max_error,tolerance,status\n";
  bool ok = true;
  for (const auto& kind : kinds) {
    Rng rng(derive_seed(seed, "roundtrip/" + kind.name()));
    const RoundTripSummary s = roundtrip_suite(kind, samples, rng);
    ok = ok && s.passed();
    out << kind.name() << ',' << kind.n << ',' << samples << ',' << format_summary(s.max_error) << ','
        << format_summary(s.spec.tolerance) << ',' << (s.passed() ? "pass" : "FAIL") << '\n';
  }
  return ok ? kExitOk : kExitCheckFailed;
}

std::vector<Axis> parse_axes(const std::string& arg) {
  if (arg == "all") return {Axis::X, Axis::Y, Axis::Z};
  std::vector<Axis> axes;
  for (const auto& a : split_commas(arg)) {
    if (a.size() != 1) throw UsageError("--axis expects x, y, z or all");
    try {
      axes.push_back(parse_axis(a[0]));
    } catch (const Error&) {
      throw UsageError("--axis expects x, y, z or all");
    }
  }
  if (axes.empty()) throw UsageError("--axis expects x, y, z or all");
  return axes;
}

int cmd_probe(const std::string& kinds_arg, const std::string& axis_arg, std::size_t samples, std::ostream& out) {
  const auto kinds = parse_kinds(kinds_arg, 3);
  const auto axes = parse_axes(axis_arg);
  out << "kind,axis,step,max_jump,max_jump_theta,fitted_lipschitz\n";
  for (const Axis axis : axes) {
    const RotationCurve curve = make_axis_curve(axis, samples);
    for (const auto& kind : kinds) {
      const JumpReport r = jump_statistic(kind, curve);
      out << kind.name() << ',' << axis_label(axis) << ',' << format_summary(r.step) << ','
          << format_summary(r.max_jump) << ',' << format_summary(r.max_jump_theta) << ','
          << format_summary(r.fitted_lipschitz) << '\n';
    }
  }
  return kExitOk;
}

int cmd_curves(const std::string& out_dir, std::size_t samples, std::ostream& out) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + out_dir + ": " + ec.message());
  for (const Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    const RotationCurve curve = make_axis_curve(axis, samples);
    for (const auto& name : kCurveKinds) {
      const RepresentationKind kind = parse_kind(name, 3);
      const auto path = std::filesystem::path(out_dir) / (name + "_" + axis_label(axis) + ".csv");
      export_pca_curves({kind}, {curve}, path);
      out << path.string() << '\n';
    }
  }
  return kExitOk;
}

int cmd_gradcheck(const std::string& kinds_arg, const std::string& loss_arg, std::size_t points,
                  std::optional<std::uint64_t> seed_flag, double threshold, std::ostream& out) {
  const auto kinds = parse_kinds(kinds_arg, 3);
  std::vector<ad::LossKind> losses;
  if (loss_arg == "both") {
    losses = {ad::LossKind::L2, ad::LossKind::Geodesic};
  } else {
    try {
      losses = {ad::parse_loss(loss_arg)};
    } catch (const Error&) {
      throw UsageError("--loss expects l2, geodesic or both");
    }
  }
  const std::uint64_t seed = resolve_seed(seed_flag, 0);
  out << "kind,loss,points,rejected,max_rel_error,status\n";
  bool ok = true;
  double worst = 0.0;
  for (const auto& kind : kinds) {
    for (const auto loss : losses) {
      if (loss == ad::LossKind::Geodesic && kind.n != 3) continue;
      const auto r = ad::gradcheck_decoder(kind, loss, points, seed);
      const bool pass = r.points == points && r.max_rel_error < threshold;
      ok = ok && pass;
      worst = std::max(worst, r.max_rel_error);
      out << kind.name() << ',' << ad::to_string(loss) << ',' << r.points << ',' << r.rejected << ','
          << format_summary(r.max_rel_error) << ',' << (pass ? "pass" : "FAIL") << '\n';
    }
  }
  out << "max rel. error " << format_summary(worst) << " (threshold " << format_summary(threshold) << ")\n";
  return ok ? kExitOk : kExitCheckFailed;
}

struct SanityArgs {
  std::string config;
  std::string out = "sanity_out";
  std::string kinds;
  std::string loss;
  std::string sampler;
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;
  bool save_models = false;
};

const char* kDefaultSanityKinds = "gs6,p5,quat,hquat,axisangle,rodriguez,euler";

int cmd_sanity(const SanityArgs& a, std::ostream& out) {
  ExperimentConfig config;
  try {
    if (!a.config.empty()) config = load_config(a.config);
    if (!a.kinds.empty()) apply_config_key(config, "kinds", a.kinds);
    if (config.kinds.empty()) apply_config_key(config, "kinds", kDefaultSanityKinds);
    if (!a.loss.empty()) apply_config_key(config, "loss", a.loss);
    if (!a.sampler.empty()) apply_config_key(config, "sampler", a.sampler);
    if (a.iterations) config.iterations = *a.iterations;
    if (a.threads) config.threads = *a.threads;
    if (a.seed || seed_from_env()) config.seed = resolve_seed(a.seed, config.seed);
    config.validate();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::IoError) throw;
    throw UsageError(e.what());
  }
  const auto reports = run_sanity_test(config);
  write_report(config, reports, a.out);
  if (a.save_models) {
    for (const auto& r : reports) {
      ad::save_checkpoint(r.model, std::filesystem::path(a.out) / ("model_" + r.kind.name() + ".txt"));
    }
  }
  out << "seed " << config.seed << ", " << config.iterations << " iterations, loss "
      << ad::to_string(config.loss) << ", sampler " << to_string(config.sampler) << '\n';
  out << "kind,mean_deg,max_deg,std_deg,p50,p99,skipped_batches,failed_decodes\n";
  for (const auto& r : reports) {
    out << r.kind.name() << ',' << format_summary(r.mean_deg) << ',' << format_summary(r.max_deg) << ','
        << format_summary(r.std_deg) << ',' << format_summary(r.percentiles[2]) << ','
        << format_summary(r.percentiles[6]) << ',' << r.skipped_batches << ',' << r.failed_decodes << '\n';
  }
  out << "reports written to " << a.out << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"rotrep: rotation representation checks and the autoencoder sanity test", "rotrep"};
  app.require_subcommand(1);

  std::string rt_kinds;
  std::size_t rt_n = 3, rt_samples = 10000;
  std::optional<std::uint64_t> rt_seed;
  auto* rt = app.add_subcommand("roundtrip", "max f(g(x)) error per kind");
  rt->add_option("--kinds", rt_kinds, "comma separated kinds, e.g. gs6,p5,quat")->required();
  rt->add_option("--n", rt_n, "group dimension")->check(CLI::Range(2, 64));
  rt->add_option("--samples", rt_samples)->check(CLI::PositiveNumber);
  rt->add_option("--seed", rt_seed);

  std::string pr_kinds = "gs6,p5,euler,quat,uquat,hquat,axisangle,rodriguez", pr_axis = "all";
  std::size_t pr_samples = 10000;
  auto* pr = app.add_subcommand("probe", "largest jump of each kind along the axis curves");
  pr->add_option("--kinds", pr_kinds);
  pr->add_option("--axis", pr_axis, "x, y, z or all");
  pr->add_option("--samples", pr_samples, "samples per closed curve")->check(CLI::Range(8, 100000000));

  std::string cu_out;
  std::size_t cu_samples = 1000;
  auto* cu = app.add_subcommand("curves", "PCA-projected axis curves, one CSV per (kind, axis)");
  cu->add_option("--out", cu_out, "output directory")->required();
  cu->add_option("--samples", cu_samples)->check(CLI::Range(8, 100000000));

  std::string gc_kinds = "gs6,p5,quat,axisangle", gc_loss = "both";
  std::size_t gc_points = 100;
  double gc_threshold = 1e-4;
  std::optional<std::uint64_t> gc_seed;
  auto* gc = app.add_subcommand("gradcheck", "analytic vs central-difference decoder gradients");
  gc->add_option("--kinds", gc_kinds);
  gc->add_option("--loss", gc_loss, "l2, geodesic or both");
  gc->add_option("--points", gc_points)->check(CLI::PositiveNumber);
  gc->add_option("--threshold", gc_threshold);
  gc->add_option("--seed", gc_seed);

  SanityArgs sa;
  auto* sn = app.add_subcommand("sanity", "train and evaluate the autoencoder per kind");
  sn->add_option("--config", sa.config, "key = value config file")->check(CLI::ExistingFile);
  sn->add_option("--out", sa.out, "report directory");
  sn->add_option("--kinds", sa.kinds);
  sn->add_option("--loss", sa.loss, "l2 or geodesic");
  sn->add_option("--sampler", sa.sampler, "axis_angle or haar");
  sn->add_option("--iterations", sa.iterations);
  sn->add_option("--threads", sa.threads, "max kinds trained at once");
  sn->add_option("--seed", sa.seed);
  sn->add_flag("--save-models", sa.save_models, "write a checkpoint per kind next to the reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*rt) return cmd_roundtrip(rt_kinds, rt_n, rt_samples, rt_seed, out);
    if (*pr) return cmd_probe(pr_kinds, pr_axis, pr_samples, out);
    if (*cu) return cmd_curves(cu_out, cu_samples, out);
    if (*gc) return cmd_gradcheck(gc_kinds, gc_loss, gc_points, gc_seed, gc_threshold, out);
    if (*sn) return cmd_sanity(sa, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace rotrep::cli
