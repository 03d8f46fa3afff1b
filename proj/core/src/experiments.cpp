#include "rotrep/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "rotrep/csv.hpp"
#include "rotrep/error.hpp"

namespace rotrep {

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorKind::ConfigError, std::string(key) + ": expected a non-negative integer, got '" +
                                            std::string(value) + "'");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  try {
    return csv::parse_double(value);
  } catch (const Error&) {
    throw Error(ErrorKind::ConfigError, std::string(key) + ": expected a number, got '" + std::string(value) + "'");
  }
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto piece = trim(value.substr(start, comma == std::string_view::npos ? value.npos : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool is_skippable(ErrorKind kind) {
  return kind == ErrorKind::DegenerateInput || kind == ErrorKind::NearZeroInput || kind == ErrorKind::NearZeroAxis ||
         kind == ErrorKind::ProjectionPole;
}

struct Evaluation {
  double mean_deg = 0.0;
  double test_loss = 0.0;
  std::size_t failed = 0;
  std::vector<double> errors_deg;
};

// decode failures count as 180° and the worst loss for the metric
Evaluation evaluate(const ExperimentConfig& config, const RepresentationKind& kind, const ad::MlpModel& model,
                    const ad::Tensor& inputs, const std::vector<RotationMatrix>& truth) {
  const ad::Tensor out = ad::mlp_predict(model, inputs);
  Evaluation e;
  e.errors_deg.resize(truth.size());
  double loss_sum = 0.0;
  const double margin = ad::kGeodesicClampMargin;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto row = out.row(static_cast<Eigen::Index>(i));
    double angle = std::numbers::pi;
    double loss = config.loss == ad::LossKind::L2 ? 8.0 : std::acos(-1.0 + margin);
    try {
      const RotationMatrix m = decode(kind, std::span<const double>(row.data(), static_cast<std::size_t>(row.size())));
      angle = geodesic_distance(m, truth[i]);
      if (config.loss == ad::LossKind::L2) {
        loss = 0.0;
        const auto a = m.matrix().data();
        const auto b = truth[i].matrix().data();
        for (std::size_t j = 0; j < a.size(); ++j) loss += (a[j] - b[j]) * (a[j] - b[j]);
      } else {
        double c = 0.0;
        const auto a = m.matrix().data();
        const auto b = truth[i].matrix().data();
        for (std::size_t j = 0; j < a.size(); ++j) c += a[j] * b[j];
        loss = std::acos(std::clamp((c - 1.0) / 2.0, -1.0 + margin, 1.0 - margin));
      }
    } catch (const Error& err) {
      if (!is_skippable(err.kind())) throw;
      ++e.failed;
    }
    e.errors_deg[i] = angle * kDeg;
    e.mean_deg += e.errors_deg[i];
    loss_sum += loss;
  }
  e.mean_deg /= static_cast<double>(truth.size());
  e.test_loss = loss_sum / static_cast<double>(truth.size());
  return e;
}

ad::Tensor pack_inputs(const std::vector<RotationMatrix>& rotations) { return ad::pack_rotations(rotations); }

}  // namespace

std::string_view to_string(SamplerKind sampler) { return sampler == SamplerKind::AxisAngle ? "axis_angle" : "haar"; }

SamplerKind parse_sampler(std::string_view name) {
  if (name == "axis_angle") return SamplerKind::AxisAngle;
  if (name == "haar") return SamplerKind::Haar;
  throw Error(ErrorKind::ConfigError, "unknown sampler '" + std::string(name) + "' (expected axis_angle or haar)");
}

void ExperimentConfig::validate() const {
  if (kinds.empty()) throw Error(ErrorKind::ConfigError, "kinds: at least one representation is required");
  for (const auto& k : kinds) {
    if (k.n != 3 || !k.is_rotation_kind()) {
      throw Error(ErrorKind::ConfigError, "kinds: " + k.name() + " is not an SO(3) representation");
    }
  }
  if (iterations == 0) throw Error(ErrorKind::ConfigError, "iterations must be > 0");
  if (batch_size == 0) throw Error(ErrorKind::ConfigError, "batch_size must be > 0");
  if (test_set_size == 0) throw Error(ErrorKind::ConfigError, "test_set_size must be > 0");
  if (eval_every == 0) throw Error(ErrorKind::ConfigError, "eval_every must be > 0");
  if (threads == 0) throw Error(ErrorKind::ConfigError, "threads must be > 0");
  if (!(max_angle > 0.0 && max_angle <= std::numbers::pi)) {
    throw Error(ErrorKind::ConfigError, "max_angle must lie in (0, pi]");
  }
  if (!(schedule.initial > 0.0) || !(schedule.after > 0.0)) throw Error(ErrorKind::ConfigError, "learning rates must be > 0");
  if (!(leaky_slope >= 0.0)) throw Error(ErrorKind::ConfigError, "leaky_slope must be >= 0");
  for (auto w : hidden)
    if (w == 0) throw Error(ErrorKind::ConfigError, "hidden widths must be > 0");
}

void apply_config_key(ExperimentConfig& c, std::string_view key, std::string_view value) {
  if (key == "schema") {
    if (parse_count(key, value) != static_cast<std::size_t>(kConfigSchemaVersion)) {
      throw Error(ErrorKind::ConfigError, "unsupported config schema " + std::string(value));
    }
  } else if (key == "kinds") {
    c.kinds.clear();
    for (const auto& name : split_list(value)) {
      try {
        c.kinds.push_back(parse_kind(name, 3));
      } catch (const Error& e) {
        throw Error(ErrorKind::ConfigError, std::string("kinds: ") + e.what());
      }
    }
  } else if (key == "loss") {
    c.loss = ad::parse_loss(value);
  } else if (key == "sampler") {
    c.sampler = parse_sampler(value);
  } else if (key == "test_sampler") {
    if (value == "same") c.test_sampler.reset();
    else c.test_sampler = parse_sampler(value);
  } else if (key == "iterations") {
    c.iterations = parse_count(key, value);
  } else if (key == "batch_size") {
    c.batch_size = parse_count(key, value);
  } else if (key == "lr") {
    c.schedule.initial = parse_real(key, value);
  } else if (key == "lr_after") {
    c.schedule.after = parse_real(key, value);
  } else if (key == "lr_switch") {
    c.schedule.switch_iteration = parse_count(key, value);
  } else if (key == "test_set_size") {
    c.test_set_size = parse_count(key, value);
  } else if (key == "eval_every") {
    c.eval_every = parse_count(key, value);
  } else if (key == "seed") {
    c.seed = parse_count(key, value);
  } else if (key == "max_angle") {
    c.max_angle = parse_real(key, value);
  } else if (key == "leaky_slope") {
    c.leaky_slope = parse_real(key, value);
  } else if (key == "hidden") {
    c.hidden.clear();
    for (const auto& w : split_list(value)) c.hidden.push_back(parse_count(key, w));
  } else if (key == "threads") {
    c.threads = parse_count(key, value);
  } else {
    throw Error(ErrorKind::ConfigError, "unknown config key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  bool saw_schema = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key == "schema") saw_schema = true;
    try {
      apply_config_key(c, key, value);
    } catch (const Error& e) {
      throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!saw_schema) throw Error(ErrorKind::ConfigError, "config is missing 'schema = 1'");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::array<double, 8> error_percentiles(std::vector<double> errors) {
  if (errors.empty()) throw Error(ErrorKind::EmptyInput, "error_percentiles needs at least one value");
  std::sort(errors.begin(), errors.end());
  std::array<double, 8> out{};
  const std::size_t n = errors.size();
  for (std::size_t i = 0; i < kPercentileGrid.size(); ++i) {
    // integer ceil(p·n/100) so p=50, n=100 lands on rank 50 exactly
    std::size_t rank = (static_cast<std::size_t>(kPercentileGrid[i]) * n + 99) / 100;
    rank = std::clamp<std::size_t>(rank, 1, n);
    out[i] = errors[rank - 1];
  }
  return out;
}

std::vector<RotationMatrix> sample_rotations(SamplerKind sampler, std::size_t count, Rng& rng, double max_angle) {
  std::vector<RotationMatrix> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(sampler == SamplerKind::AxisAngle ? sample_axis_angle(rng, max_angle) : sample_uniform_so3(rng));
  }
  return out;
}

RunReport run_single(const ExperimentConfig& config, const RepresentationKind& kind) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  Rng test_rng(derive_seed(config.seed, "test"));
  const auto test_set =
      sample_rotations(config.test_sampler.value_or(config.sampler), config.test_set_size, test_rng, config.max_angle);
  const ad::Tensor test_inputs = pack_inputs(test_set);

  Rng init_rng(derive_seed(config.seed, "init/" + kind.name()));
  std::vector<std::size_t> widths{9};
  widths.insert(widths.end(), config.hidden.begin(), config.hidden.end());
  widths.push_back(kind.dimension());
  RunReport report;
  report.kind = kind;
  report.model = ad::MlpModel::create(widths, init_rng, config.leaky_slope);
  ad::AdamState adam = ad::AdamState::for_model(report.model, config.schedule);

  // every kind sees the same batches
  Rng train_rng(derive_seed(config.seed, "train"));

  auto record = [&](std::size_t iteration, double train_loss) {
    const Evaluation e = evaluate(config, kind, report.model, test_inputs, test_set);
    report.curve.push_back({iteration, e.mean_deg, e.test_loss, train_loss});
    return e;
  };

  record(0, std::numeric_limits<double>::quiet_NaN());
  double window_loss = 0.0;
  std::size_t window_count = 0;
  for (std::size_t it = 0; it < config.iterations; ++it) {
    const auto batch = sample_rotations(config.sampler, config.batch_size, train_rng, config.max_angle);
    const ad::Tensor x = pack_inputs(batch);
    try {
      ad::Tape tape;
      const ad::Var in = tape.leaf(x);
      const ad::MlpTrace trace = ad::mlp_forward(tape, report.model, in);
      const ad::Var pred = ad::decoder_forward(tape, kind, trace.output);
      const ad::Var loss = ad::loss(tape, config.loss, pred, tape.leaf(x));
      tape.backward(loss);
      std::vector<ad::Tensor> grads;
      grads.reserve(trace.params.size());
      for (const ad::Var p : trace.params) grads.push_back(tape.grad(p));
      ad::adam_step(report.model, grads, adam);
      window_loss += tape.value(loss)(0, 0);
      ++window_count;
    } catch (const Error& e) {
      if (!is_skippable(e.kind())) throw;
      ++report.skipped_batches;
    }
    const std::size_t done = it + 1;
    if (done % config.eval_every == 0 || done == config.iterations) {
      const double mean_train =
          window_count ? window_loss / static_cast<double>(window_count) : std::numeric_limits<double>::quiet_NaN();
      window_loss = 0.0;
      window_count = 0;
      if (done == config.iterations) {
        const Evaluation final_eval = record(done, mean_train);
        report.failed_decodes = final_eval.failed;
        report.mean_deg = final_eval.mean_deg;
        double var = 0.0;
        for (double err : final_eval.errors_deg) var += (err - report.mean_deg) * (err - report.mean_deg);
        report.std_deg = std::sqrt(var / static_cast<double>(final_eval.errors_deg.size()));
        report.percentiles = error_percentiles(final_eval.errors_deg);
        report.max_deg = report.percentiles.back();
      } else {
        record(done, mean_train);
      }
    }
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<RunReport> run_sanity_test(const ExperimentConfig& config) {
  config.validate();
  std::vector<RunReport> reports(config.kinds.size());
  const std::size_t workers = std::min(config.threads, config.kinds.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < config.kinds.size(); ++i) reports[i] = run_single(config, config.kinds[i]);
    return reports;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < config.kinds.size(); i = next++) {
        try {
          reports[i] = run_single(config, config.kinds[i]);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return reports;
}

void write_report(const ExperimentConfig& config, const std::vector<RunReport>& reports,
                  const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + p.string() + " for writing");
    return out;
  };

  for (const auto& r : reports) {
    const auto path = out_dir / ("curve_" + r.kind.name() + ".csv");
    auto out = open(path);
    out << "iteration,mean_error_deg,test_loss,train_loss\n";
    for (const auto& p : r.curve) {
      out << p.iteration << ',' << csv::format_exact(p.mean_error_deg) << ',' << csv::format_exact(p.test_loss) << ','
          << csv::format_exact(p.train_loss) << '\n';
    }
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
  }

  {
    const auto path = out_dir / "percentiles.csv";
    auto out = open(path);
    out << "kind";
    for (int p : kPercentileGrid) out << ",p" << p;
    out << ",mean,max,std\n";
    for (const auto& r : reports) {
      out << r.kind.name();
      for (double v : r.percentiles) out << ',' << csv::format_exact(v);
      out << ',' << csv::format_exact(r.mean_deg) << ',' << csv::format_exact(r.max_deg) << ','
          << csv::format_exact(r.std_deg) << '\n';
    }
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
  }

  nlohmann::ordered_json manifest;
  manifest["schema"] = kConfigSchemaVersion;
  manifest["seed"] = config.seed;
  nlohmann::ordered_json cfg;
  std::vector<std::string> names;
  for (const auto& k : config.kinds) names.push_back(k.name());
  cfg["kinds"] = names;
  cfg["loss"] = std::string(ad::to_string(config.loss));
  cfg["sampler"] = std::string(to_string(config.sampler));
  cfg["test_sampler"] = std::string(to_string(config.test_sampler.value_or(config.sampler)));
  cfg["iterations"] = config.iterations;
  cfg["batch_size"] = config.batch_size;
  cfg["lr"] = config.schedule.initial;
  cfg["lr_after"] = config.schedule.after;
  cfg["lr_switch"] = config.schedule.switch_iteration;
  cfg["test_set_size"] = config.test_set_size;
  cfg["eval_every"] = config.eval_every;
  cfg["max_angle"] = config.max_angle;
  cfg["leaky_slope"] = config.leaky_slope;
  cfg["hidden"] = config.hidden;
  cfg["threads"] = config.threads;
  manifest["config"] = cfg;
  double wall = 0.0;
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    wall += r.wall_seconds;
    runs.push_back({{"kind", r.kind.name()},
                    {"skipped_batches", r.skipped_batches},
                    {"failed_decodes", r.failed_decodes},
                    {"wall_seconds", r.wall_seconds}});
  }
  manifest["runs"] = runs;
  manifest["wall_seconds"] = wall;
  const auto path = out_dir / "manifest.json";
  auto out = open(path);
  out << manifest.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace rotrep
