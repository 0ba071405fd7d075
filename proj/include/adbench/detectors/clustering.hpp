#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "adbench/kernel.hpp"

namespace adbench {

struct LloydResult {
  PointSet centroids;
  std::vector<std::size_t> assignment;
  std::vector<double> sse_history;  // SSE of the assignment made at each iteration
  std::size_t iterations = 0;
};

inline constexpr std::size_t kLloydMaxIterations = 100;
inline constexpr double kLloydTolerance = 1e-6;

/// Lloyd iterations from the given centroids. An emptied cluster keeps its
/// previous centroid.
LloydResult lloyd(const PointSet& train, PointSet initial, std::size_t max_iterations = kLloydMaxIterations);

/// Index of the nearest centroid (ties to the lower index) and its distance.
std::pair<std::size_t, double> nearest_centroid(const PointSet& centroids, std::span<const double> x);

/// Scores by Euclidean distance to the nearest centroid. Used by K-Means and
/// G-Means.
class CentroidScorer : public Scorer {
 public:
  CentroidScorer(PointSet centroids, const PointSet& train);

  double score(std::span<const double> x) const override;

  const PointSet& centroids() const { return centroids_; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  const std::vector<double>& mean_distances() const { return mean_distance_; }

  const std::vector<double>& sse_history() const { return sse_history_; }
  void set_sse_history(std::vector<double> history) { sse_history_ = std::move(history); }

 private:
  PointSet centroids_;
  std::vector<std::size_t> counts_;
  std::vector<double> mean_distance_;
  std::vector<double> sse_history_;
};

std::unique_ptr<CentroidScorer> train_kmeans(const PointSet& train, std::size_t k, std::uint64_t seed);

struct GMeansOptions {
  double critical_value = 1.8692;  // Anderson-Darling, alpha = 1e-4
  std::size_t max_k = 64;
  std::size_t min_cluster = 8;  // neither tested below this size nor split into children smaller than it
};

std::unique_ptr<CentroidScorer> train_gmeans(const PointSet& train, std::uint64_t seed, const GMeansOptions& options = {});

/// Anderson-Darling statistic with the small-sample correction, for a sample
/// standardized to zero mean and unit variance.
double anderson_darling(std::vector<double> standardized);

class DbscanScorer : public Scorer {
 public:
  DbscanScorer(const PointSet& train, double eps, std::size_t min_pts);

  double score(std::span<const double> x) const override;

  const PointSet& core_points() const { return core_; }
  double eps() const { return eps_; }

 private:
  PointSet core_;
  double eps_;
};

std::unique_ptr<DbscanScorer> train_dbscan(const PointSet& train, double eps, std::size_t min_pts);

/// Resolves an eps grid value: numbers pass through, "pNN" is the NN-th
/// percentile of a seeded sample of at most 1000 pairwise distances.
double resolve_eps(const ParamValue& value, const PointSet& train, std::uint64_t seed);

class LdcofScorer : public Scorer {
 public:
  LdcofScorer(PointSet centroids, const PointSet& train, double large_mass);

  double score(std::span<const double> x) const override;

  const PointSet& centroids() const { return centroids_; }
  const std::vector<bool>& large() const { return large_; }
  const std::vector<double>& divisors() const { return divisor_; }

 private:
  PointSet centroids_;
  std::vector<bool> large_;
  std::vector<double> divisor_;
};

inline constexpr double kLdcofLargeMass = 0.9;

std::unique_ptr<LdcofScorer> train_ldcof(const PointSet& train, std::size_t k, std::uint64_t seed);

}  // namespace adbench
