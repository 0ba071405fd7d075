#pragma once

#include <memory>
#include <vector>

#include "adbench/kernel.hpp"

namespace adbench {

class HbosScorer : public Scorer {
 public:
  struct Histogram {
    double low = 0.0;
    double high = 0.0;
    double width = 0.0;  // 0 for a constant feature (single bin)
    std::vector<double> heights;
  };

  HbosScorer(const PointSet& train, std::size_t bins);

  double score(std::span<const double> x) const override;
  /// Contribution of one feature to the score.
  double feature_score(std::size_t feature, double value) const;

  const std::vector<Histogram>& histograms() const { return histograms_; }
  double floor_height() const { return floor_; }

 private:
  std::vector<Histogram> histograms_;
  double floor_ = 0.0;
};

std::unique_ptr<HbosScorer> train_hbos(const PointSet& train, std::size_t bins);

/// Bin-count grid value: an integer or "sqrt" (round of the square root of n).
std::size_t resolve_bins(const ParamValue& value, std::size_t n);

enum class AffinityKernel { Gaussian, StudentT };

/// Affinity-based outlier probabilities. SOS uses a Gaussian kernel over every
/// stored point; ISOS restricts each point's affinities to its k nearest
/// neighbors. Per-point precisions are tuned by bisection to hit the target
/// perplexity.
class AffinityScorer : public Scorer {
 public:
  struct Options {
    AffinityKernel kernel = AffinityKernel::Gaussian;
    std::size_t neighbors = 0;  // 0 means every other stored point
    double perplexity = 10.0;
  };

  AffinityScorer(const PointSet& train, const Options& options);

  double score(std::span<const double> x) const override;

  /// Binding probability b_ij of stored point i onto stored point j.
  double binding(std::size_t i, std::size_t j) const;
  double precision(std::size_t i) const { return beta_[i]; }
  /// Perplexity actually used for point i after clamping to what is reachable.
  double target_perplexity(std::size_t i) const { return target_[i]; }
  std::size_t size() const { return index_.size(); }

 private:
  double log_affinity(std::size_t i, double d2) const;
  bool in_neighborhood(std::size_t i, std::size_t j) const;

  NeighborIndex index_;
  Options options_;
  std::vector<double> beta_;
  std::vector<double> shift_;    // per-point offset keeping Gaussian exponents bounded
  std::vector<double> log_sum_;  // log of the affinity mass over the neighborhood
  std::vector<double> target_;
  std::vector<std::vector<std::size_t>> neighborhood_;  // sorted ids; empty when unrestricted
  bool degenerate_ = false;
};

inline constexpr double kAffinityEntropyTolerance = 1e-12;
inline constexpr int kAffinityMaxIterations = 200;

std::unique_ptr<AffinityScorer> train_sos(const PointSet& train, double perplexity);
std::unique_ptr<AffinityScorer> train_isos(const PointSet& train, std::size_t k, double phi,
                                           AffinityKernel kernel = AffinityKernel::StudentT);

}  // namespace adbench
