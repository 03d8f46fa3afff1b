#include "rotrep/mlp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rotrep/csv.hpp"
#include "rotrep/error.hpp"

namespace rotrep::ad {

namespace {

constexpr const char* kCheckpointMagic = "rotrep-mlp-checkpoint";
constexpr int kCheckpointVersion = 1;

void write_tensor(std::ostream& out, const std::string& name, const Tensor& t) {
  out << name << ' ' << t.rows() << ' ' << t.cols() << '\n';
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    for (Eigen::Index c = 0; c < t.cols(); ++c) {
      if (c) out << ' ';
      out << csv::format_exact(t(r, c));
    }
    out << '\n';
  }
}

Tensor read_tensor(std::istream& in, const std::string& expected_name) {
  std::string name;
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> name >> rows >> cols) || name != expected_name || rows <= 0 || cols <= 0) {
    throw Error(ErrorKind::IoError, "checkpoint: expected tensor '" + expected_name + "'");
  }
  Tensor t(rows, cols);
  std::string token;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!(in >> token)) throw Error(ErrorKind::IoError, "checkpoint: truncated tensor '" + name + "'");
      t(r, c) = csv::parse_double(token);
    }
  return t;
}

}  // namespace

MlpModel MlpModel::create(const std::vector<std::size_t>& widths, Rng& rng, double leaky_slope) {
  if (widths.size() < 2) throw Error(ErrorKind::ConfigError, "an MLP needs at least input and output widths");
  MlpModel model;
  model.leaky_slope = leaky_slope;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const auto fan_in = static_cast<Eigen::Index>(widths[l]);
    const auto fan_out = static_cast<Eigen::Index>(widths[l + 1]);
    if (fan_in == 0 || fan_out == 0) throw Error(ErrorKind::ConfigError, "layer widths must be positive");
    const double bound = std::sqrt(1.0 / static_cast<double>(fan_in));
    std::uniform_real_distribution<double> init(-bound, bound);
    DenseLayer layer{Tensor(fan_in, fan_out), Tensor(1, fan_out)};
    for (Eigen::Index i = 0; i < layer.weight.size(); ++i) layer.weight.data()[i] = init(rng);
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias.data()[i] = init(rng);
    model.layers.push_back(std::move(layer));
  }
  return model;
}

MlpModel MlpModel::sanity_encoder(std::size_t output_dim, Rng& rng, double leaky_slope) {
  return create({9, 128, 128, 128, output_dim}, rng, leaky_slope);
}

std::size_t MlpModel::parameter_count() const {
  std::size_t count = 0;
  for (const auto& l : layers) count += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return count;
}

std::vector<const Tensor*> MlpModel::parameters() const {
  std::vector<const Tensor*> out;
  for (const auto& l : layers) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

std::vector<Tensor*> MlpModel::parameters() {
  std::vector<Tensor*> out;
  for (auto& l : layers) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

MlpTrace mlp_forward(Tape& tape, const MlpModel& model, Var input) {
  MlpTrace trace;
  Var h = input;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const Var w = tape.leaf(model.layers[l].weight);
    const Var b = tape.leaf(model.layers[l].bias);
    trace.params.push_back(w);
    trace.params.push_back(b);
    h = tape.add_row(tape.matmul(h, w), b);
    if (l + 1 < model.layers.size()) h = tape.leaky_relu(h, model.leaky_slope);
  }
  trace.output = h;
  return trace;
}

Tensor mlp_predict(const MlpModel& model, const Tensor& input) {
  Tensor h = input;
  const double slope = model.leaky_slope;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    Tensor next = h * model.layers[l].weight;
    next.rowwise() += model.layers[l].bias.row(0);
    if (l + 1 < model.layers.size()) next = next.unaryExpr([slope](double x) { return x >= 0.0 ? x : slope * x; });
    h = std::move(next);
  }
  return h;
}

AdamState AdamState::for_model(const MlpModel& model, LrSchedule schedule) {
  AdamState s;
  s.schedule = schedule;
  for (const Tensor* p : model.parameters()) {
    s.first_moment.push_back(Tensor::Zero(p->rows(), p->cols()));
    s.second_moment.push_back(Tensor::Zero(p->rows(), p->cols()));
  }
  return s;
}

void adam_step(MlpModel& model, const std::vector<Tensor>& grads, AdamState& state) {
  auto params = model.parameters();
  if (grads.size() != params.size() || state.first_moment.size() != params.size()) {
    throw Error(ErrorKind::DimensionMismatch, "adam_step: gradient / moment count does not match the model");
  }
  const double lr = state.schedule.at(state.step);
  const double t = static_cast<double>(state.step + 1);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& p = *params[i];
    const Tensor& g = grads[i];
    if (g.rows() != p.rows() || g.cols() != p.cols()) {
      throw Error(ErrorKind::DimensionMismatch, "adam_step: gradient shape does not match parameter");
    }
    Tensor& m = state.first_moment[i];
    Tensor& v = state.second_moment[i];
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
    const double eps = state.epsilon;
    p.array() -= lr * (m.array() / correction1) / ((v.array() / correction2).sqrt() + eps);
  }
  ++state.step;
}

void save_checkpoint(const MlpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out << kCheckpointMagic << " v" << kCheckpointVersion << '\n';
  out << "leaky_slope " << csv::format_exact(model.leaky_slope) << '\n';
  out << "layers " << model.layers.size() << '\n';
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    write_tensor(out, "layer" + std::to_string(l) + ".weight", model.layers[l].weight);
    write_tensor(out, "layer" + std::to_string(l) + ".bias", model.layers[l].bias);
  }
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

MlpModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::string magic, version, key, slope;
  if (!(in >> magic >> version) || magic != kCheckpointMagic) {
    throw Error(ErrorKind::IoError, path.string() + " is not a rotrep checkpoint");
  }
  if (version != "v" + std::to_string(kCheckpointVersion)) {
    throw Error(ErrorKind::IoError, "unsupported checkpoint version " + version);
  }
  MlpModel model;
  std::size_t layer_count = 0;
  if (!(in >> key >> slope) || key != "leaky_slope") throw Error(ErrorKind::IoError, "checkpoint: missing leaky_slope");
  model.leaky_slope = csv::parse_double(slope);
  if (!(in >> key >> layer_count) || key != "layers") throw Error(ErrorKind::IoError, "checkpoint: missing layers");
  for (std::size_t l = 0; l < layer_count; ++l) {
    DenseLayer layer;
    layer.weight = read_tensor(in, "layer" + std::to_string(l) + ".weight");
    layer.bias = read_tensor(in, "layer" + std::to_string(l) + ".bias");
    if (layer.bias.rows() != 1 || layer.bias.cols() != layer.weight.cols()) {
      throw Error(ErrorKind::IoError, "checkpoint: bias shape mismatch in layer " + std::to_string(l));
    }
    if (l > 0 && layer.weight.rows() != model.layers.back().weight.cols()) {
      throw Error(ErrorKind::IoError, "checkpoint: layer widths do not chain at layer " + std::to_string(l));
    }
    model.layers.push_back(std::move(layer));
  }
  return model;
}

}  // namespace rotrep::ad
