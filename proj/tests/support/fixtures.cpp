#include "fixtures.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "adbench/csv.hpp"

namespace adbench::testing {

PointSet gaussian_points(std::size_t n, std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  PointSet out(dim);
  out.reserve(n);
  std::vector<double> row(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : row) v = normal(rng);
    out.push_back(row);
  }
  return out;
}

OutlierFixture cluster_with_outlier(std::uint64_t seed, std::size_t n, std::size_t dim, double distance) {
  Rng rng(seed);
  OutlierFixture f;
  f.points = gaussian_points(n, dim, rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> dir(dim);
  double norm = 0.0;
  while (norm < 1e-6) {
    norm = 0.0;
    for (auto& v : dir) {
      v = normal(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
  }
  for (auto& v : dir) v = v / norm * distance;
  f.points.push_back(dir);
  f.outlier = n;
  return f;
}

void write_synthetic_csv(const std::string& path, const SyntheticTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  Rng rng(table.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  csv::Record header;
  for (std::size_t j = 0; j < table.informative; ++j) header.push_back("f" + std::to_string(j));
  for (std::size_t j = 0; j < table.noise; ++j) header.push_back("noise" + std::to_string(j));
  header.push_back("label");
  csv::write_record(out, header);

  auto emit = [&](const std::string& label, bool attack, std::size_t type) {
    csv::Record r;
    for (std::size_t j = 0; j < table.informative; ++j) {
      double v = unit(rng);
      if (attack) {
        // The first column's side encodes the attack type so distinct types
        // occupy distinct regions.
        const bool up = j == 0 ? type % 2 == 0 : unit(rng) < 0.5;
        const double past = 1.0 + 1.5 * unit(rng);
        v = up ? 1.0 + past : -past;
      } else if (table.resolution > 0.0) {
        v = std::round(v / table.resolution) * table.resolution;
      }
      r.push_back(format_double(v));
    }
    for (std::size_t j = 0; j < table.noise; ++j) r.push_back(format_double(unit(rng)));
    r.push_back(label);
    csv::write_record(out, r);
  };
  for (std::size_t i = 0; i < table.normals; ++i) emit("normal", false, 0);
  for (std::size_t t = 0; t < table.attacks.size(); ++t) {
    for (std::size_t i = 0; i < table.attacks[t].second; ++i) emit(table.attacks[t].first, true, t);
  }
}

std::filesystem::path scratch_dir(const std::string& tag) {
  static std::size_t counter = 0;
  std::random_device rd;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("adbench-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_loader_file(const std::string& path, const LoaderSpec& spec) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_loader_spec(out, spec);
}

void write_campaign_file(const std::string& path, const std::vector<std::string>& loader_files,
                         const std::vector<std::string>& extra_lines) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& l : extra_lines) out << l << '\n';
  for (const auto& f : loader_files) out << "loader = " << f << '\n';
}

}  // namespace adbench::testing
