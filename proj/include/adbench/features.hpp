#pragma once

#include <span>
#include <string>
#include <vector>

#include "adbench/ingest.hpp"

namespace adbench {

inline constexpr std::size_t kInfoGainBins = 10;
inline constexpr std::size_t kDefaultSelectedFeatures = 3;

/// Shannon entropy (bits) of a binary label vector.
double label_entropy(const std::vector<bool>& anomalous);

/// H(label) - H(label | feature) in bits, with the feature discretized into
/// `bins` equal-width bins over its observed range.
double info_gain(std::span<const double> feature, const std::vector<bool>& anomalous,
                 std::size_t bins = kInfoGainBins);
double info_gain(std::span<const double> feature, const std::vector<Label>& labels,
                 std::size_t bins = kInfoGainBins);

struct FeatureScore {
  FeatureDescriptor feature;
  std::size_t position = 0;  // index into the table's descriptors
  double infogain = 0.0;
};

struct FeatureSelection {
  std::vector<FeatureScore> chosen;
  double avg_infogain = 0.0;
  std::vector<std::string> warnings;

  std::vector<std::size_t> positions() const;
  std::vector<std::string> names() const;
};

/// Ranks ordinal features of a labeled table by information gain (descending,
/// ties by column index) and keeps the best `n`.
FeatureSelection select_top_n(const DataTable& labeled, std::size_t n = kDefaultSelectedFeatures);

class NormalizationMap {
 public:
  struct Range {
    double min = 0.0;
    double max = 0.0;
  };

  NormalizationMap() = default;
  explicit NormalizationMap(std::vector<Range> ranges) : ranges_(std::move(ranges)) {}

  const std::vector<Range>& ranges() const { return ranges_; }
  std::size_t size() const { return ranges_.size(); }

 private:
  std::vector<Range> ranges_;
};

inline constexpr double kNormalizedLow = -1.0;
inline constexpr double kNormalizedHigh = 2.0;

NormalizationMap fit_normalizer(const PointSet& train);
std::vector<double> apply_normalizer(const NormalizationMap& map, std::span<const double> row);
PointSet apply_normalizer(const NormalizationMap& map, const PointSet& rows);

}  // namespace adbench
