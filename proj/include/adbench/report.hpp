#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adbench/harness.hpp"
#include "adbench/taxonomy.hpp"

namespace adbench {

/// Algorithm families. An algorithm may belong to several; "starred" views
/// use every member, exclusive views only single-family members.
class FamilyRegistry {
 public:
  static FamilyRegistry standard();

  void add(const std::string& algorithm, std::vector<std::string> families);

  /// Family names in display order.
  const std::vector<std::string>& families() const { return families_; }
  /// Empty for an unknown algorithm.
  const std::vector<std::string>& families_of(const std::string& algorithm) const;
  std::vector<std::string> members(const std::string& family, bool starred) const;

 private:
  std::vector<std::string> families_;
  std::map<std::string, std::vector<std::string>> membership_;  // canonical algorithm name
  std::vector<std::string> order_;                              // registration order
};

/// Canonical display name ("IFOREST"); unknown names pass through unchanged.
std::string canonical_algorithm(const std::string& name);

struct AlgoSummary {
  std::string algorithm;
  std::size_t loaders = 0;
  double avg_mcc = 0.0;
  double std_mcc = 0.0;
  double avg_f1 = 0.0;
  double avg_acc = 0.0;
  std::size_t best_count = 0;
};

/// Error rows are ignored everywhere below. Rows come out in algorithm
/// enumeration order, unknown names last and sorted.
std::vector<AlgoSummary> algo_summary(const std::vector<ExperimentTriple>& triples);

struct RankTable {
  /// loader -> algorithm -> rank in [0, 16]
  std::map<std::string, std::map<std::string, double>> ranks;
  /// algorithm -> average rank over the loaders it appears in
  std::map<std::string, double> average;
};

/// Per loader: 16 * (m - 1 - #strictly better) / (m - 1) over the m algorithms
/// present, so ties share the top rank of their span. A lone algorithm gets 16.
RankTable rank_mcc(const std::vector<ExperimentTriple>& triples);

struct FamilyRow {
  std::string family;
  bool starred = false;
  std::vector<std::string> members;  // present in the triples
  std::size_t rows = 0;
  double avg_mcc = 0.0;
  double avg_rank = 0.0;
};

/// Families without any member among the triples are omitted.
std::vector<FamilyRow> family_rollup(const std::vector<ExperimentTriple>& triples, const FamilyRegistry& registry,
                                     bool starred);

struct MetricStat {
  double avg = 0.0;
  double std = 0.0;
};

struct DatasetRow {
  std::string dataset;
  std::size_t loaders = 0;
  std::size_t rows = 0;
  MetricStat precision;
  MetricStat recall;
  MetricStat f1;
  MetricStat accuracy;
  MetricStat mcc;
  MetricStat auc;  // over rows with a defined AUC
  double avg_best_mcc = 0.0;
};

std::vector<DatasetRow> dataset_rollup(const std::vector<ExperimentTriple>& triples);

struct CategoryRow {
  std::string name;
  std::size_t loaders = 0;
  std::size_t rows = 0;
  MetricStat mcc;
  MetricStat f1;
  MetricStat accuracy;
  double avg_best_mcc = 0.0;
};

inline constexpr const char* kUnmappedCategory = "unmapped";

struct CategoryRollup {
  std::vector<CategoryRow> categories;  // taxonomy order, then "unmapped"
  std::vector<CategoryRow> attacks;     // finer subgroups, sorted by name
  std::vector<std::string> warnings;
};

CategoryRollup category_rollup(const std::vector<ExperimentTriple>& triples, const AttackTaxonomy& taxonomy);

struct ModeBlock {
  std::size_t rows = 0;
  double avg_f1 = 0.0;
  double avg_acc = 0.0;
  double avg_mcc = 0.0;
};

struct UnknownsRow {
  std::string dataset;
  std::optional<ModeBlock> single_attack;
  std::optional<ModeBlock> unknowns;
  /// Best algorithm(s) by unknowns MCC, joined with ", "; parameters joined with " | ".
  std::string best_algorithm;
  std::string best_params;
  double best_f1 = 0.0;  // of the first listed best row
  double best_acc = 0.0;
  double best_mcc = 0.0;
};

std::vector<UnknownsRow> unknowns_comparison(const std::vector<ExperimentTriple>& single_attack,
                                             const std::vector<ExperimentTriple>& unknowns);

struct ReportFiles {
  std::vector<std::string> written;
  std::vector<std::string> warnings;
};

/// Writes every rollup as CSV plus SVG bar charts into `out_dir`. Triples are
/// split by mode: single-attack rows feed the per-algorithm, rank, family,
/// dataset and category views; unknowns rows feed the comparison.
ReportFiles emit_reports(const std::vector<ExperimentTriple>& triples, const AttackTaxonomy& taxonomy,
                         const FamilyRegistry& registry, const std::string& out_dir);

}  // namespace adbench
