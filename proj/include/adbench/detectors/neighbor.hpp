#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "adbench/kernel.hpp"

namespace adbench {

class KnnScorer : public Scorer {
 public:
  KnnScorer(const PointSet& train, std::size_t k);
  double score(std::span<const double> x) const override;

 private:
  NeighborIndex index_;
  std::size_t k_;
};

/// In-degree based outlier score over the kNN graph: 1 / (indegree + 1).
class OdinScorer : public Scorer {
 public:
  OdinScorer(const PointSet& train, std::size_t k);
  double score(std::span<const double> x) const override;

  std::size_t indegree_of_query(std::span<const double> x) const;
  const std::vector<std::size_t>& indegrees() const { return indegree_; }
  const std::vector<double>& k_distances() const { return kdist_; }

 private:
  NeighborIndex index_;
  std::size_t k_;
  std::vector<double> kdist_;
  std::vector<std::size_t> indegree_;
};

class LofScorer : public Scorer {
 public:
  LofScorer(const PointSet& train, std::size_t k);
  double score(std::span<const double> x) const override;

  const std::vector<double>& k_distances() const { return kdist_; }
  const std::vector<double>& densities() const { return lrd_; }

 private:
  double density_of(const std::vector<Neighbor>& neighbors) const;

  NeighborIndex index_;
  std::size_t k_;
  std::vector<double> kdist_;
  std::vector<double> lrd_;
};

inline constexpr double kMinReachability = 1e-10;

class CofScorer : public Scorer {
 public:
  CofScorer(const PointSet& train, std::size_t k);
  double score(std::span<const double> x) const override;

  const std::vector<double>& chaining_distances() const { return acd_; }

 private:
  NeighborIndex index_;
  std::size_t k_;
  std::vector<double> acd_;
};

/// Average chaining distance of a point given its ordered neighborhood (ids
/// into `points` with distances from the point), following the set-based
/// nearest path.
double average_chaining_distance(const PointSet& points, const std::vector<Neighbor>& neighbors);

enum class ObserverAggregate { Median, Mean };

class SdoScorer : public Scorer {
 public:
  struct Options {
    std::size_t observers = 100;
    std::size_t x = 5;
    double idle_fraction = 0.1;
    ObserverAggregate aggregate = ObserverAggregate::Median;
  };

  SdoScorer(const PointSet& train, const Options& options, std::uint64_t seed);
  double score(std::span<const double> x) const override;

  const PointSet& active_observers() const { return active_; }
  /// Votes per sampled observer, in sampling order.
  const std::vector<std::size_t>& votes() const { return votes_; }
  const std::vector<std::size_t>& sampled() const { return sampled_; }

 private:
  Options options_;
  PointSet active_;
  std::vector<std::size_t> sampled_;
  std::vector<std::size_t> votes_;
};

/// Angle-based outlier factor. With k = 0 every stored pair is used (ABOD);
/// otherwise only pairs among the k nearest stored points (FastABOD).
class AbodScorer : public Scorer {
 public:
  AbodScorer(const PointSet& train, std::size_t k);
  double score(std::span<const double> x) const override;

  /// Weighted angle variance (ABOF); the emitted score is its negation.
  double abof(std::span<const double> x) const;
  /// Number of pairs visited by the last-level loop for query x.
  std::size_t pair_count(std::span<const double> x) const;

 private:
  std::vector<std::size_t> candidates(std::span<const double> x) const;

  NeighborIndex index_;
  std::size_t k_;
};

std::unique_ptr<KnnScorer> train_knn(const PointSet& train, std::size_t k);
std::unique_ptr<OdinScorer> train_odin(const PointSet& train, std::size_t k);
std::unique_ptr<LofScorer> train_lof(const PointSet& train, std::size_t k);
std::unique_ptr<CofScorer> train_cof(const PointSet& train, std::size_t k);
std::unique_ptr<SdoScorer> train_sdo(const PointSet& train, const SdoScorer::Options& options, std::uint64_t seed);
std::unique_ptr<AbodScorer> train_abod(const PointSet& train);
std::unique_ptr<AbodScorer> train_fastabod(const PointSet& train, std::size_t k);

}  // namespace adbench
