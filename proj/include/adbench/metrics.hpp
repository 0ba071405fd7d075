#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace adbench {

/// Binary confusion matrix; the positive class is "anomalous".
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct FScore {
  double beta = 1.0;
  double value = 0.0;
};

struct MetricReport {
  double tnr = 0.0;
  double fpr = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  std::vector<FScore> fscores;  // one per requested beta
  double accuracy = 0.0;
  double mcc = 0.0;
  double auc = 0.0;  // NaN when not computable
};

ConfusionMatrix confusion(const std::vector<bool>& predictions, const std::vector<bool>& labels);

/// Ratio-with-zero-denominator-is-zero throughout.
double fscore(double precision, double recall, double beta);
double mcc(const ConfusionMatrix& cm);

/// All threshold metrics; `auc` is left as NaN.
MetricReport metric_suite(const ConfusionMatrix& cm, std::span<const double> betas = {});

/// Mann-Whitney AUC with ties counted as one half. Throws std::invalid_argument
/// unless both classes are present.
double auc(std::span<const double> scores, const std::vector<bool>& labels);

}  // namespace adbench
