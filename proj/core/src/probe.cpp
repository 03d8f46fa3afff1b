#include "rotrep/probe.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "rotrep/csv.hpp"
#include "rotrep/error.hpp"
#include "rotrep/pca.hpp"

namespace rotrep {

char axis_label(Axis axis) {
  switch (axis) {
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    case Axis::Z: return 'Z';
  }
  return '?';
}

Axis parse_axis(char label) {
  switch (label) {
    case 'X': case 'x': return Axis::X;
    case 'Y': case 'y': return Axis::Y;
    case 'Z': case 'z': return Axis::Z;
    default: break;
  }
  throw Error(ErrorKind::InvalidKind, std::string("unknown axis '") + label + "'");
}

RotationCurve make_axis_curve(Axis axis, std::size_t n_samples) {
  if (n_samples < 8) throw Error(ErrorKind::DegenerateInput, "an axis curve needs at least 8 samples");
  RotationCurve curve;
  curve.axis = axis;
  curve.step = 2.0 * std::numbers::pi / static_cast<double>(n_samples);
  curve.samples.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double theta = curve.step * static_cast<double>(i);
    switch (axis) {
      case Axis::X: curve.samples.push_back({theta, rot_x(theta)}); break;
      case Axis::Y: curve.samples.push_back({theta, rot_y(theta)}); break;
      case Axis::Z: curve.samples.push_back({theta, rot_z(theta)}); break;
    }
  }
  return curve;
}

JumpReport jump_statistic(const RepresentationKind& kind, const RotationCurve& curve) {
  const auto& samples = curve.samples;
  if (samples.size() < 2) throw Error(ErrorKind::EmptyInput, "curve has fewer than two samples");

  std::vector<std::vector<double>> codes;
  codes.reserve(samples.size());
  for (const auto& s : samples) codes.push_back(encode(kind, s.rotation).data);

  JumpReport report;
  report.kind = kind;
  report.axis = curve.axis;
  report.step = curve.step;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    const auto& a = codes[i];
    const auto& b = codes[(i + 1) % codes.size()];
    double d2 = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) d2 += (b[j] - a[j]) * (b[j] - a[j]);
    const double d = std::sqrt(d2);
    if (d > report.max_jump) {
      report.max_jump = d;
      report.max_jump_theta = samples[i].theta;
    }
  }
  report.fitted_lipschitz = report.max_jump / curve.step;
  return report;
}

std::vector<PcaCurveRow> pca_curves(const std::vector<RepresentationKind>& kinds,
                                    const std::vector<RotationCurve>& curves) {
  std::vector<PcaCurveRow> rows;
  for (const auto& kind : kinds) {
    const std::string name = kind.name();
    for (const auto& curve : curves) {
      std::vector<Vector> points;
      points.reserve(curve.samples.size());
      for (const auto& s : curve.samples) points.push_back(encode(kind, s.rotation).data);
      const auto projected = pca_top2(points);
      for (std::size_t i = 0; i < projected.size(); ++i) {
        rows.push_back({name, axis_label(curve.axis), curve.samples[i].theta, projected[i][0], projected[i][1]});
      }
    }
  }
  return rows;
}

void export_pca_curves(const std::vector<RepresentationKind>& kinds, const std::vector<RotationCurve>& curves,
                       const std::filesystem::path& out_path) {
  const auto rows = pca_curves(kinds, curves);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + out_path.string() + " for writing");
  out << "representation,axis,theta,pc1,pc2\n";
  for (const auto& r : rows) {
    out << r.representation << ',' << r.axis << ',' << csv::format_exact(r.theta) << ','
        << csv::format_exact(r.pc1) << ',' << csv::format_exact(r.pc2) << '\n';
  }
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + out_path.string());
}

std::vector<PcaCurveRow> read_pca_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "representation,axis,theta,pc1,pc2") {
    throw Error(ErrorKind::IoError, "unexpected header in " + path.string());
  }
  std::vector<PcaCurveRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv::split_line(line);
    if (f.size() != 5 || f[1].size() != 1) throw Error(ErrorKind::IoError, "malformed row: " + line);
    rows.push_back({f[0], f[1][0], csv::parse_double(f[2]), csv::parse_double(f[3]), csv::parse_double(f[4])});
  }
  return rows;
}

}  // namespace rotrep
