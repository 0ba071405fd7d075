#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "adbench/kernel.hpp"

namespace adbench {

enum class SvmKernel { Linear, Rbf };

/// One-class SVM, nu formulation, solved with SMO using second-order working
/// set selection.
class SvmScorer : public Scorer {
 public:
  struct Options {
    SvmKernel kernel = SvmKernel::Rbf;
    double nu = 0.1;
    double gamma = 0.0;  // 0 selects 1 / feature count
    double tolerance = 1e-3;
    std::size_t max_iterations = 100000;
    std::size_t cache_rows = 256;
  };

  SvmScorer(const PointSet& train, const Options& options);

  double score(std::span<const double> x) const override;
  /// Signed distance to the boundary: positive inside, negative outside.
  double decision(std::span<const double> x) const;

  double rho() const { return rho_; }
  double gamma() const { return gamma_; }
  double scale() const { return scale_; }
  bool converged() const { return converged_; }
  std::size_t iterations() const { return iterations_; }
  const std::vector<double>& alphas() const { return alpha_; }
  const std::vector<double>& train_decisions() const { return train_decision_; }
  std::size_t support_vector_count() const { return sv_.size(); }

 private:
  double kernel(std::span<const double> a, std::span<const double> b) const;

  Options options_;
  double gamma_ = 0.0;
  double rho_ = 0.0;
  double scale_ = 1.0;
  bool converged_ = false;
  std::size_t iterations_ = 0;
  std::vector<double> alpha_;
  std::vector<double> train_decision_;
  PointSet sv_;
  std::vector<double> sv_coef_;
};

std::unique_ptr<SvmScorer> train_ocsvm(const PointSet& train, const SvmScorer::Options& options);
SvmKernel parse_svm_kernel(std::string_view name);

/// Average path length of an unsuccessful BST search over n points.
double iforest_c(double n);

class IForestScorer : public Scorer {
 public:
  struct Node {
    std::size_t feature = 0;
    double split = 0.0;
    std::int32_t left = -1;  // -1 marks a leaf
    std::int32_t right = -1;
    std::size_t size = 0;    // leaf population
  };

  IForestScorer(const PointSet& train, std::size_t trees, std::size_t samples, std::uint64_t seed);

  double score(std::span<const double> x) const override;
  double mean_path_length(std::span<const double> x) const;

  std::size_t subsample() const { return psi_; }
  std::size_t height_limit() const { return limit_; }
  /// Maximum node depth over every tree.
  std::size_t max_depth() const;
  std::size_t tree_count() const { return trees_.size(); }

 private:
  double path_length(const std::vector<Node>& tree, std::span<const double> x) const;

  std::vector<std::vector<Node>> trees_;
  std::size_t psi_ = 0;
  std::size_t limit_ = 0;
  double norm_ = 1.0;
};

/// Score as a function of mean path length for a given subsample size.
double iforest_score(double mean_path, std::size_t psi);

class SomScorer : public Scorer {
 public:
  struct Options {
    std::size_t side = 5;
    double base_a = 0.6;
    double min_a = 0.1;
    double decay = 0.9;
    std::size_t epochs = 20;
  };

  SomScorer(const PointSet& train, const Options& options, std::uint64_t seed);

  double score(std::span<const double> x) const override;
  std::size_t best_matching_unit(std::span<const double> x) const;

  const PointSet& weights() const { return weights_; }
  /// Mean train quantization error before training and after each epoch.
  const std::vector<double>& quantization_history() const { return history_; }

 private:
  Options options_;
  PointSet weights_;
  std::vector<double> history_;
};

std::unique_ptr<IForestScorer> train_iforest(const PointSet& train, std::size_t trees, std::size_t samples,
                                             std::uint64_t seed);
std::unique_ptr<SomScorer> train_som(const PointSet& train, const SomScorer::Options& options, std::uint64_t seed);

}  // namespace adbench
