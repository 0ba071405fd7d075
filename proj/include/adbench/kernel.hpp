#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "adbench/core.hpp"

namespace adbench {

enum class Algorithm {
  KMeans,
  GMeans,
  Dbscan,
  Ldcof,
  Hbos,
  Sos,
  Isos,
  OneClassSvm,
  IsolationForest,
  Som,
  Abod,
  FastAbod,
  Knn,
  Odin,
  Lof,
  Cof,
  Sdo,
};

inline constexpr std::size_t kAlgorithmCount = 17;

const std::array<Algorithm, kAlgorithmCount>& all_algorithms();
std::string_view algorithm_name(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);

// ---------------------------------------------------------------------------
// Parameters

using ParamValue = std::variant<std::int64_t, double, std::string>;

std::string format_param(const ParamValue& value);

/// Ordered parameter assignment, e.g. {kernel=RBF, nu=0.02}.
class ParamSet {
 public:
  ParamSet() = default;
  ParamSet(std::initializer_list<std::pair<std::string, ParamValue>> items) : items_(items) {}

  void set(const std::string& name, ParamValue value);
  bool has(std::string_view name) const;
  const ParamValue& at(std::string_view name) const;

  std::int64_t get_int(std::string_view name) const;
  double get_double(std::string_view name) const;
  std::string get_string(std::string_view name) const;
  std::int64_t get_int_or(std::string_view name, std::int64_t fallback) const;
  double get_double_or(std::string_view name, double fallback) const;
  std::string get_string_or(std::string_view name, std::string fallback) const;

  bool empty() const { return items_.empty(); }
  const std::vector<std::pair<std::string, ParamValue>>& items() const { return items_; }
  /// "k=5 kernel=RBF"; empty assignments render as "-".
  std::string to_string() const;

  friend bool operator==(const ParamSet&, const ParamSet&) = default;

 private:
  std::vector<std::pair<std::string, ParamValue>> items_;
};

/// Cartesian grid over named axes; enumeration order is row-major with the
/// last axis varying fastest.
class ParamGrid {
 public:
  void add_axis(std::string name, std::vector<ParamValue> values);
  const std::vector<std::pair<std::string, std::vector<ParamValue>>>& axes() const { return axes_; }
  bool empty() const { return axes_.empty(); }
  std::vector<ParamSet> assignments() const;

 private:
  std::vector<std::pair<std::string, std::vector<ParamValue>>> axes_;
};

inline const std::vector<std::int64_t> kNeighborGrid = {1, 2, 3, 5, 10, 20, 50, 100};

ParamGrid default_param_grid(Algorithm algorithm);

// ---------------------------------------------------------------------------
// Scorer contract

/// A fitted detector. Higher scores mean more anomalous; scores are finite for
/// finite inputs. Implementations are immutable after fitting and safe to
/// share across threads.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual double score(std::span<const double> x) const = 0;

  std::vector<double> score_all(const PointSet& points) const;
  const std::vector<std::string>& warnings() const { return warnings_; }

 protected:
  void warn(std::string message) { warnings_.push_back(std::move(message)); }

 private:
  std::vector<std::string> warnings_;
};

// ---------------------------------------------------------------------------
// Neighbor machinery

struct Neighbor {
  std::size_t id = 0;
  double distance = 0.0;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Exact brute-force Euclidean neighbor search. Ties are broken by insertion
/// index. A query equal to a stored point excludes that point (its lowest
/// indexed exact copy) from its own neighborhood.
class NeighborIndex {
 public:
  NeighborIndex() = default;
  explicit NeighborIndex(PointSet points) : points_(std::move(points)) {}

  const PointSet& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  /// Index of the stored copy treated as the query itself, if any.
  std::optional<std::size_t> self_of(std::span<const double> x) const;

  /// k nearest stored points, nondecreasing distance; throws FitError when
  /// fewer than k candidates are available.
  std::vector<Neighbor> query(std::span<const double> x, std::size_t k, bool exclude_self = true) const;
  /// Neighbors of stored point i (never i itself).
  std::vector<Neighbor> query_stored(std::size_t i, std::size_t k) const;
  /// Every stored point other than `skip`, in nondecreasing distance order.
  std::vector<Neighbor> ranked(std::span<const double> x, std::optional<std::size_t> skip) const;

 private:
  std::vector<Neighbor> select(std::span<const double> x, std::size_t k, std::optional<std::size_t> skip) const;

  PointSet points_;
};

std::vector<Neighbor> knn_query(const NeighborIndex& index, std::span<const double> x, std::size_t k);

// ---------------------------------------------------------------------------
// Decision functions

enum class DecisionKind { Iqr, Conf };

/// Boolean rule over scores: anomalous iff score > threshold. Log-scale rules
/// compute their statistics on sign(s)·log1p(|s|) and map the threshold back,
/// which keeps them usable on scores with a long one-sided tail.
struct DecisionFunction {
  DecisionKind kind = DecisionKind::Iqr;
  double parameter = 1.5;  // w for IQR, z for CONF
  bool log_scale = false;
  double threshold = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double mean = 0.0;
  double std = 0.0;

  std::string to_string() const;  // e.g. "IQR(1.5)", "LOG-CONF(2)"
};

struct DecisionCandidate {
  DecisionKind kind;
  double parameter;
  bool log_scale = false;
};

/// IQR(0.5, 1, 1.5, 2, 3) then CONF(1, 2, 3), then the same eight on the log
/// scale; ties keep the earliest.
const std::vector<DecisionCandidate>& decision_candidates();

struct ScoreStatistics {
  double q1 = 0.0;
  double q3 = 0.0;
  double mean = 0.0;
  double std = 0.0;
};

double to_log_scale(double score);
double from_log_scale(double value);

ScoreStatistics score_statistics(std::span<const double> scores);
/// Both scales of the same sample; log-scale candidates use `log`.
struct DecisionStatistics {
  ScoreStatistics linear;
  ScoreStatistics log;
};
DecisionStatistics decision_statistics(std::span<const double> scores);
DecisionFunction make_decision_function(DecisionCandidate candidate, const DecisionStatistics& stats);

inline constexpr std::size_t kMinDecisionScores = 10;

/// Picks the candidate maximizing MCC on the tuning scores. Requires at least
/// ten train scores and both classes in the tuning labels.
DecisionFunction learn_decision_function(std::span<const double> train_scores,
                                         std::span<const double> tuning_scores,
                                         const std::vector<bool>& tuning_labels);

inline bool classify(const DecisionFunction& df, double score) { return score > df.threshold; }
std::vector<bool> classify_all(const DecisionFunction& df, std::span<const double> scores);

}  // namespace adbench
