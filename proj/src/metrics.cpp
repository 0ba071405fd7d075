#include "adbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace adbench {

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

ConfusionMatrix confusion(const std::vector<bool>& predictions, const std::vector<bool>& labels) {
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument("confusion: " + std::to_string(predictions.size()) + " predictions for " +
                                std::to_string(labels.size()) + " labels");
  }
  if (labels.empty()) throw std::invalid_argument("confusion: no points");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) {
      predictions[i] ? ++cm.tp : ++cm.fn;
    } else {
      predictions[i] ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

double fscore(double precision, double recall, double beta) {
  const double b2 = beta * beta;
  return ratio((1.0 + b2) * precision * recall, b2 * precision + recall);
}

double mcc(const ConfusionMatrix& cm) {
  const auto tp = static_cast<long double>(cm.tp);
  const auto tn = static_cast<long double>(cm.tn);
  const auto fp = static_cast<long double>(cm.fp);
  const auto fn = static_cast<long double>(cm.fn);
  const long double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (den == 0.0L) return 0.0;
  const long double value = (tp * tn - fp * fn) / std::sqrt(den);
  return std::clamp(static_cast<double>(value), -1.0, 1.0);
}

MetricReport metric_suite(const ConfusionMatrix& cm, std::span<const double> betas) {
  if (cm.total() == 0) throw std::invalid_argument("metric_suite: empty confusion matrix");
  const auto tp = static_cast<double>(cm.tp);
  const auto tn = static_cast<double>(cm.tn);
  const auto fp = static_cast<double>(cm.fp);
  const auto fn = static_cast<double>(cm.fn);
  MetricReport r;
  r.precision = ratio(tp, tp + fp);
  r.recall = ratio(tp, tp + fn);
  r.tnr = ratio(tn, tn + fp);
  r.fpr = (tn + fp) == 0.0 ? 0.0 : 1.0 - r.tnr;
  r.accuracy = (tp + tn) / static_cast<double>(cm.total());
  r.f1 = fscore(r.precision, r.recall, 1.0);
  r.f2 = fscore(r.precision, r.recall, 2.0);
  for (double b : betas) r.fscores.push_back({b, fscore(r.precision, r.recall, b)});
  r.mcc = mcc(cm);
  r.auc = std::numeric_limits<double>::quiet_NaN();
  return r;
}

double auc(std::span<const double> scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("auc: scores and labels differ in length");
  const auto n_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("auc: both classes are required");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of midranks of the positives.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) {
      if (labels[order[t]]) rank_sum += midrank;
    }
    i = j + 1;
  }
  const double np = static_cast<double>(n_pos);
  const double u = rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

}  // namespace adbench
