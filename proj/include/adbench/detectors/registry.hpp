#pragma once

#include <cstdint>
#include <memory>

#include "adbench/detectors/boundary.hpp"
#include "adbench/detectors/clustering.hpp"
#include "adbench/detectors/neighbor.hpp"
#include "adbench/detectors/statistical.hpp"
#include "adbench/kernel.hpp"

namespace adbench {

/// ABOD is cubic in the train size, so its train set is subsampled to this.
inline constexpr std::size_t kAbodTrainCap = 2000;

struct FittedModel {
  Algorithm algorithm = Algorithm::Knn;
  ParamSet params;
  std::shared_ptr<const Scorer> scorer;
};

/// Fits one detector. Missing parameters fall back to the first value of the
/// algorithm's default grid. Throws FitError when the parameters do not suit
/// the data and ConfigError for malformed parameter values.
FittedModel fit_detector(Algorithm algorithm, const ParamSet& params, const PointSet& train, std::uint64_t seed);

}  // namespace adbench
