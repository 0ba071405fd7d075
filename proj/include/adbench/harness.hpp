#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adbench/detectors/registry.hpp"
#include "adbench/features.hpp"
#include "adbench/ingest.hpp"
#include "adbench/kernel.hpp"
#include "adbench/metrics.hpp"

namespace adbench {

struct ExperimentTriple {
  std::string loader;
  std::string algorithm;
  std::string params;            // "k=5 kernel=RBF", "-" when parameterless
  std::string decision_function; // "IQR(1.5)"; empty on error
  ConfusionMatrix cm;
  MetricReport metrics;
  double ms = 0.0;
  std::uint64_t seed = 0;
  std::string error;  // empty on success
  std::string dataset;
  std::string attack;  // empty in unknowns mode
  LoaderMode mode = LoaderMode::SingleAttack;

  bool ok() const { return error.empty(); }
  double mcc() const { return metrics.mcc; }
};

struct CampaignConfig {
  std::uint64_t seed = 0;
  std::size_t parallel = 1;
  std::size_t folds = 10;
  std::size_t features = kDefaultSelectedFeatures;
  double timeout_minutes = 30.0;
  bool timing = true;  // false writes 0 ms so repeated runs are byte-identical
  std::vector<Algorithm> algorithms;
  std::vector<LoaderSpec> loaders;
  std::string taxonomy;  // optional CSV merged into the standard taxonomy
};

/// Plain `key = value` file. Keys: seed, parallel, folds, features,
/// timeout_minutes, timing, algorithms (comma list or "all"), loader (a loader
/// file; repeatable), loader_dir (every *.loader file, sorted), taxonomy.
CampaignConfig parse_campaign_config(std::istream& in, const std::string& base_dir);
CampaignConfig read_campaign_config(const std::string& path);
/// Throws ConfigError for an unusable plan.
void validate_campaign(const CampaignConfig& config);

/// Loader files (*.loader) directly inside `dir`, sorted by file name.
std::vector<std::string> loader_files(const std::string& dir);

// ---------------------------------------------------------------------------

struct Partition {
  std::vector<std::size_t> fit;
  std::vector<std::size_t> held;
};

/// Seeded shuffle then `folds` near-equal held parts; the first n % folds
/// parts are one row larger.
std::vector<Partition> kfold_partitions(std::size_t rows, std::size_t folds, std::uint64_t seed);
std::vector<Partition> kfold_partitions(const DataTable& train, std::size_t folds, std::uint64_t seed);

/// A loader after feature selection and normalization, ready for detectors.
struct PreparedLoader {
  LoaderSpec spec;
  PointSet train;
  PointSet tuning;
  std::vector<bool> tuning_labels;
  PointSet validation;
  std::vector<bool> validation_labels;
  FeatureSelection selection;
  std::vector<std::string> warnings;
  std::string error;  // loader rejected; every experiment on it becomes an error row
};

PreparedLoader prepare_loader(const LoaderSpec& spec, std::size_t features);
/// Same pipeline from an already materialized split.
PreparedLoader prepare_bundle(const LoaderSpec& spec, const SplitBundle& bundle, std::size_t features);

struct TuneResult {
  FittedModel model;
  DecisionFunction decision;
  double tuning_mcc = 0.0;
  std::size_t assignments_tried = 0;
  std::size_t assignments_failed = 0;
  std::vector<std::string> warnings;
};

class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

/// Grid search: every assignment is fitted on each fold's fit part; decision
/// candidates use statistics of the held-part scores and are judged by MCC on
/// the tuning partition. The best fold-averaged (assignment, candidate) pair
/// wins (ties to the first enumerated) and is refitted on the full train.
/// Parameterless algorithms are fitted once on the full train.
TuneResult tune_and_fit(Algorithm algorithm, const PointSet& train, const PointSet& tuning,
                        const std::vector<bool>& tuning_labels, const ParamGrid& grid, std::size_t folds,
                        std::uint64_t seed, Deadline deadline = std::nullopt);

std::uint64_t experiment_seed(std::uint64_t master, const std::string& loader, Algorithm algorithm);

ExperimentTriple run_experiment(Algorithm algorithm, const PreparedLoader& loader, const CampaignConfig& config);

struct LoaderSummary {
  std::string loader;
  std::vector<std::string> features;
  double avg_infogain = 0.0;
  std::string error;
};

struct CampaignResult {
  std::vector<ExperimentTriple> rows;  // ordered by (loader, algorithm)
  std::vector<LoaderSummary> loaders;
  std::vector<std::string> warnings;
  double total_ms = 0.0;

  std::size_t error_rows() const;
};

/// Runs every (loader, algorithm) pair on `config.parallel` threads.
CampaignResult run_campaign(const CampaignConfig& config, std::ostream* log = nullptr);

// ---------------------------------------------------------------------------

std::string loader_mode_name(LoaderMode mode);
const std::vector<std::string>& triple_columns();
void write_triples(std::ostream& out, const std::vector<ExperimentTriple>& rows);
void write_triples_file(const std::string& path, const std::vector<ExperimentTriple>& rows);
std::vector<ExperimentTriple> read_triples(std::istream& in);
std::vector<ExperimentTriple> read_triples_file(const std::string& path);
void write_loader_summaries(std::ostream& out, const std::vector<LoaderSummary>& rows);

/// Materializes each loader in `dir` and prints a one-line summary per file.
/// Returns the number of loaders that failed.
std::size_t validate_loader_dir(const std::string& dir, std::ostream& out);

}  // namespace adbench
