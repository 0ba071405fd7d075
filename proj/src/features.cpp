#include "adbench/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adbench {

namespace {

double entropy2(double a, double b) {
  const double n = a + b;
  if (n <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : {a, b}) {
    if (c > 0.0) {
      const double p = c / n;
      h -= p * std::log2(p);
    }
  }
  return h;
}

}  // namespace

double label_entropy(const std::vector<bool>& anomalous) {
  const auto pos = static_cast<double>(std::count(anomalous.begin(), anomalous.end(), true));
  return entropy2(pos, static_cast<double>(anomalous.size()) - pos);
}

double info_gain(std::span<const double> feature, const std::vector<bool>& anomalous, std::size_t bins) {
  if (feature.empty()) throw std::invalid_argument("info_gain: empty input");
  if (feature.size() != anomalous.size()) throw std::invalid_argument("info_gain: feature and labels differ in length");
  if (bins < 1) throw std::invalid_argument("info_gain: need at least one bin");
  const auto [lo_it, hi_it] = std::minmax_element(feature.begin(), feature.end());
  const double lo = *lo_it;
  const double width = *hi_it - lo;

  std::vector<double> pos(bins, 0.0), neg(bins, 0.0);
  for (std::size_t i = 0; i < feature.size(); ++i) {
    std::size_t b = 0;
    if (width > 0.0) {
      b = static_cast<std::size_t>(std::floor((feature[i] - lo) / width * static_cast<double>(bins)));
      b = std::min(b, bins - 1);
    }
    (anomalous[i] ? pos : neg)[b] += 1.0;
  }
  const double n = static_cast<double>(feature.size());
  double conditional = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const double nb = pos[b] + neg[b];
    if (nb > 0.0) conditional += nb / n * entropy2(pos[b], neg[b]);
  }
  const double gain = label_entropy(anomalous) - conditional;
  return std::max(0.0, gain);
}

double info_gain(std::span<const double> feature, const std::vector<Label>& labels, std::size_t bins) {
  std::vector<bool> flags;
  flags.reserve(labels.size());
  for (const auto& l : labels) flags.push_back(l.is_attack());
  return info_gain(feature, flags, bins);
}

std::vector<std::size_t> FeatureSelection::positions() const {
  std::vector<std::size_t> out;
  for (const auto& c : chosen) out.push_back(c.position);
  return out;
}

std::vector<std::string> FeatureSelection::names() const {
  std::vector<std::string> out;
  for (const auto& c : chosen) out.push_back(c.feature.name);
  return out;
}

FeatureSelection select_top_n(const DataTable& labeled, std::size_t n) {
  if (n < 1) throw std::invalid_argument("select_top_n: n must be positive");
  if (!labeled.labels()) throw std::invalid_argument("select_top_n: table must be labeled");
  if (labeled.empty()) throw std::invalid_argument("select_top_n: empty table");
  const auto flags = labeled.anomaly_flags();

  std::vector<FeatureScore> scored;
  const auto& desc = labeled.descriptors();
  for (std::size_t j = 0; j < desc.size(); ++j) {
    if (desc[j].kind != FeatureKind::OrdinalNumeric) continue;
    const auto column = labeled.numeric_column(j);
    scored.push_back({desc[j], j, info_gain(column, flags)});
  }
  std::stable_sort(scored.begin(), scored.end(), [](const FeatureScore& a, const FeatureScore& b) {
    if (a.infogain != b.infogain) return a.infogain > b.infogain;
    return a.feature.column_index < b.feature.column_index;
  });

  FeatureSelection out;
  if (scored.size() < n) {
    out.warnings.push_back("only " + std::to_string(scored.size()) + " ordinal features available, " +
                           std::to_string(n) + " requested");
  }
  scored.resize(std::min(n, scored.size()));
  out.chosen = std::move(scored);
  if (!out.chosen.empty()) {
    double sum = 0.0;
    for (const auto& c : out.chosen) sum += c.infogain;
    out.avg_infogain = sum / static_cast<double>(out.chosen.size());
  }
  return out;
}

NormalizationMap fit_normalizer(const PointSet& train) {
  if (train.empty()) throw std::invalid_argument("fit_normalizer: no rows");
  std::vector<NormalizationMap::Range> ranges(train.dim());
  for (std::size_t j = 0; j < train.dim(); ++j) ranges[j] = {train[0][j], train[0][j]};
  for (std::size_t i = 1; i < train.size(); ++i) {
    const auto row = train[i];
    for (std::size_t j = 0; j < row.size(); ++j) {
      ranges[j].min = std::min(ranges[j].min, row[j]);
      ranges[j].max = std::max(ranges[j].max, row[j]);
    }
  }
  return NormalizationMap(std::move(ranges));
}

std::vector<double> apply_normalizer(const NormalizationMap& map, std::span<const double> row) {
  if (row.size() != map.size()) throw std::invalid_argument("apply_normalizer: row arity does not match");
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    const auto& r = map.ranges()[j];
    const double span = r.max - r.min;
    out[j] = span > 0.0 ? std::clamp((row[j] - r.min) / span, kNormalizedLow, kNormalizedHigh) : 0.0;
  }
  return out;
}

PointSet apply_normalizer(const NormalizationMap& map, const PointSet& rows) {
  PointSet out(map.size());
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.push_back(apply_normalizer(map, rows[i]));
  return out;
}

}  // namespace adbench
