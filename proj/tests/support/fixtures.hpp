#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "adbench/core.hpp"
#include "adbench/ingest.hpp"

namespace adbench::testing {

PointSet gaussian_points(std::size_t n, std::size_t dim, Rng& rng);

/// A standard normal cluster plus one point at `distance` from the origin in a
/// random direction. The outlier is stored last.
struct OutlierFixture {
  PointSet points;
  std::size_t outlier = 0;
};

OutlierFixture cluster_with_outlier(std::uint64_t seed, std::size_t n = 200, std::size_t dim = 2,
                                    double distance = 10.0);

/// Labeled CSV generator. Normal rows are uniform in the unit box on the
/// informative columns; attack rows sit well outside the box on every
/// informative column (at least 3.5 sigma past the edge, over 10 sigma from
/// the centre). Noise columns are uniform for every row.
struct SyntheticTable {
  std::size_t normals = 1000;
  std::vector<std::pair<std::string, std::size_t>> attacks;  // label -> count
  std::size_t informative = 4;
  std::size_t noise = 2;
  std::uint64_t seed = 1;
  double resolution = 0.0;  // > 0 rounds normal informative values to this step
};

void write_synthetic_csv(const std::string& path, const SyntheticTable& table);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& tag);

void write_loader_file(const std::string& path, const LoaderSpec& spec);

/// Writes a campaign file naming the given loader files.
void write_campaign_file(const std::string& path, const std::vector<std::string>& loader_files,
                         const std::vector<std::string>& extra_lines);

}  // namespace adbench::testing
