#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "adbench/core.hpp"

namespace adbench {

enum class FeatureKind { OrdinalNumeric, CategoricalNumeric, Textual };

std::string_view feature_kind_name(FeatureKind kind);

struct FeatureDescriptor {
  std::string name;
  FeatureKind kind = FeatureKind::OrdinalNumeric;
  std::size_t column_index = 0;  // position in the source header

  bool is_numeric() const { return kind != FeatureKind::Textual; }
  friend bool operator==(const FeatureDescriptor&, const FeatureDescriptor&) = default;
};

struct Label {
  enum class Tag { Normal, Attack };

  Tag tag = Tag::Normal;
  std::string attack;  // empty iff Normal

  static Label normal() { return {}; }
  static Label attack_named(std::string name);
  bool is_attack() const { return tag == Tag::Attack; }
  friend bool operator==(const Label&, const Label&) = default;
};

using Cell = std::variant<double, std::string>;

/// Identity of a row: the file it came from and its 1-based line there.
struct RowId {
  std::string source;
  std::size_t line = 0;
  friend auto operator<=>(const RowId&, const RowId&) = default;
};

/// Immutable tabular dataset. Rows hold one cell per descriptor: a double
/// for numeric kinds, text for textual ones.
class DataTable {
 public:
  DataTable() = default;
  DataTable(std::vector<FeatureDescriptor> descriptors, std::vector<std::vector<Cell>> rows,
            std::optional<std::vector<Label>> labels, std::vector<RowId> ids,
            std::size_t dropped_rows = 0);

  const std::vector<FeatureDescriptor>& descriptors() const { return descriptors_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  const std::optional<std::vector<Label>>& labels() const { return labels_; }
  const std::vector<RowId>& ids() const { return ids_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  /// Rows discarded during parsing because a numeric cell was missing.
  std::size_t dropped_rows() const { return dropped_rows_; }

  std::optional<std::size_t> find_feature(std::string_view name) const;
  std::vector<double> numeric_column(std::size_t feature) const;
  /// True for rows labeled as any attack.
  std::vector<bool> anomaly_flags() const;
  PointSet points(std::span<const std::size_t> features) const;

  DataTable select(std::span<const std::size_t> rows) const;
  DataTable without_labels() const;

 private:
  std::vector<FeatureDescriptor> descriptors_;
  std::vector<std::vector<Cell>> rows_;
  std::optional<std::vector<Label>> labels_;
  std::vector<RowId> ids_;
  std::size_t dropped_rows_ = 0;
};

/// Stacks tables sharing a header. Columns numeric in one part but textual in
/// another become textual.
DataTable concat(const std::vector<DataTable>& parts);

/// Parses a headered CSV file. Columns in `categorical` that parse as numbers
/// become categorical-numeric; columns with any non-numeric, non-empty cell
/// are textual. Rows with an empty numeric cell are dropped and counted.
DataTable parse_csv(const std::string& path, const std::string& label_column,
                    const std::string& normal_tag, const std::set<std::string>& categorical);
DataTable parse_csv_stream(std::istream& in, const std::string& source_name,
                           const std::string& label_column, const std::string& normal_tag,
                           const std::set<std::string>& categorical);

enum class LoaderMode { SingleAttack, Unknowns };

struct LoaderSpec {
  std::string name;
  std::string dataset_tag;
  LoaderMode mode = LoaderMode::SingleAttack;
  std::string target_attack;
  std::vector<std::string> train_sources;
  std::vector<std::string> validation_sources;
  std::string label_column = "label";
  std::string normal_tag = "normal";
  std::set<std::string> categorical_columns;
  std::size_t train_cap = 10000;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDefaultTrainCap = 10000;
inline constexpr std::size_t kMinPolicyTrainCap = 1000;
inline constexpr double kTuningFraction = 0.10;

/// Hard errors throw ConfigError; soft policy notes are returned.
std::vector<std::string> validate_loader_spec(const LoaderSpec& spec);

/// `key = value` loader file; relative sources resolve against the file's directory.
LoaderSpec read_loader_spec(const std::string& path);
LoaderSpec parse_loader_spec(std::istream& in, const std::string& base_dir);
void write_loader_spec(std::ostream& out, const LoaderSpec& spec);

struct SplitBundle {
  DataTable train;       // labels stripped
  DataTable tuning;      // labeled
  DataTable validation;  // labeled
  std::vector<std::string> warnings;
};

/// Builds the train/tuning/validation split for one loader. Rows that appear
/// in both source tables are assigned to exactly one side by a seeded hash.
SplitBundle materialize_split(const LoaderSpec& spec, const DataTable& train_table,
                              const DataTable& validation_table);

/// Parses every source named by the spec and materializes its split.
SplitBundle materialize(const LoaderSpec& spec);

/// Builds a mixed-attack loader over all attack files of one dataset. The
/// returned spec copies label/normal/categorical/cap settings from `base`.
LoaderSpec build_unknowns_loader(const std::string& dataset_tag,
                                 const std::vector<std::string>& attack_sources,
                                 const std::string& normal_source, std::uint64_t seed,
                                 const LoaderSpec& base = {});

}  // namespace adbench
