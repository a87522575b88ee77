#include "stereowave/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stereowave {

namespace {

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("atomic_write: short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string points_csv(const std::vector<SpherePoint>& points) {
  std::string out = "x,y,z\n";
  for (const auto& p : points) {
    append_double(out, p.x());
    out += ',';
    append_double(out, p.y());
    out += ',';
    append_double(out, p.z());
    out += '\n';
  }
  return out;
}

std::vector<SpherePoint> parse_points_csv(const std::string& text) {
  std::vector<SpherePoint> pts;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x, y, z;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &z) != 3) {
      throw std::runtime_error("parse_points_csv: bad row: " + line);
    }
    pts.push_back(SpherePoint::normalized(Eigen::Vector3d(x, y, z)));
  }
  return pts;
}

std::string values_csv(const std::vector<SpherePoint>& points, const Eigen::VectorXd& values) {
  if (static_cast<Eigen::Index>(points.size()) != values.size()) {
    throw std::invalid_argument("values_csv: size mismatch");
  }
  std::string out = "x,y,z,value\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    append_double(out, points[i].x());
    out += ',';
    append_double(out, points[i].y());
    out += ',';
    append_double(out, points[i].z());
    out += ',';
    append_double(out, values[static_cast<Eigen::Index>(i)]);
    out += '\n';
  }
  return out;
}

std::pair<std::vector<SpherePoint>, Eigen::VectorXd> parse_values_csv(const std::string& text) {
  std::vector<SpherePoint> pts;
  std::vector<double> vals;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x, y, z, v;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &y, &z, &v) != 4) {
      throw std::runtime_error("parse_values_csv: bad row: " + line);
    }
    pts.push_back(SpherePoint::normalized(Eigen::Vector3d(x, y, z)));
    vals.push_back(v);
  }
  Eigen::VectorXd out(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) out[static_cast<Eigen::Index>(i)] = vals[i];
  return {std::move(pts), std::move(out)};
}

std::string coefficients_csv(const BlockList& blocks) {
  std::string out = "hemisphere,e,j,k1,k2,value\n";
  for (const auto& b : blocks) {
    const char* h = b.hemisphere == Hemisphere::Minus ? "-" : "+";
    for (int k1 = b.range.kmin; k1 <= b.range.kmax; ++k1) {
      for (int k2 = b.range.kmin; k2 <= b.range.kmax; ++k2) {
        const double v = b.values[b.range.index(k1, k2)];
        if (v == 0.0) continue;
        out += h;
        out += ',';
        out += std::to_string(b.e);
        out += ',';
        out += std::to_string(b.j);
        out += ',';
        out += std::to_string(k1);
        out += ',';
        out += std::to_string(k2);
        out += ',';
        append_double(out, v);
        out += '\n';
      }
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_file: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace stereowave
