#include "adbench/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "adbench/csv.hpp"

namespace adbench {

namespace {

std::optional<double> parse_number(std::string_view text) {
  std::string t = trim(text);
  std::string_view v = t;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  if (v.empty()) return std::nullopt;
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) return std::nullopt;
  return out;
}

bool is_missing(std::string_view text) { return trim(text).empty(); }

bool same_attack(std::string_view a, std::string_view b) { return to_lower(trim(a)) == to_lower(trim(b)); }

}  // namespace

std::string_view feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::OrdinalNumeric: return "ordinal-numeric";
    case FeatureKind::CategoricalNumeric: return "categorical-numeric";
    case FeatureKind::Textual: return "textual";
  }
  return "?";
}

Label Label::attack_named(std::string name) {
  if (name.empty()) throw std::invalid_argument("attack label needs a name");
  return {Tag::Attack, std::move(name)};
}

DataTable::DataTable(std::vector<FeatureDescriptor> descriptors, std::vector<std::vector<Cell>> rows,
                     std::optional<std::vector<Label>> labels, std::vector<RowId> ids,
                     std::size_t dropped_rows)
    : descriptors_(std::move(descriptors)),
      rows_(std::move(rows)),
      labels_(std::move(labels)),
      ids_(std::move(ids)),
      dropped_rows_(dropped_rows) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() != descriptors_.size()) {
      throw std::invalid_argument("DataTable: row " + std::to_string(i) + " has " +
                                  std::to_string(rows_[i].size()) + " cells, expected " +
                                  std::to_string(descriptors_.size()));
    }
  }
  if (labels_ && labels_->size() != rows_.size()) {
    throw std::invalid_argument("DataTable: label count differs from row count");
  }
  if (ids_.size() != rows_.size()) throw std::invalid_argument("DataTable: row id count differs from row count");
  std::set<std::size_t> columns;
  for (const auto& d : descriptors_) {
    if (!columns.insert(d.column_index).second) {
      throw std::invalid_argument("DataTable: duplicate column index " + std::to_string(d.column_index));
    }
  }
}

std::optional<std::size_t> DataTable::find_feature(std::string_view name) const {
  for (std::size_t i = 0; i < descriptors_.size(); ++i) {
    if (descriptors_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<double> DataTable::numeric_column(std::size_t feature) const {
  if (!descriptors_.at(feature).is_numeric()) {
    throw std::invalid_argument("feature '" + descriptors_[feature].name + "' is textual");
  }
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(std::get<double>(r[feature]));
  return out;
}

std::vector<bool> DataTable::anomaly_flags() const {
  if (!labels_) throw std::logic_error("DataTable has no labels");
  std::vector<bool> out;
  out.reserve(labels_->size());
  for (const auto& l : *labels_) out.push_back(l.is_attack());
  return out;
}

PointSet DataTable::points(std::span<const std::size_t> features) const {
  PointSet out(features.size());
  out.reserve(rows_.size());
  std::vector<double> buf(features.size());
  for (const auto& r : rows_) {
    for (std::size_t j = 0; j < features.size(); ++j) buf[j] = std::get<double>(r[features[j]]);
    out.push_back(buf);
  }
  return out;
}

DataTable DataTable::select(std::span<const std::size_t> rows) const {
  std::vector<std::vector<Cell>> out_rows;
  std::vector<RowId> out_ids;
  std::optional<std::vector<Label>> out_labels;
  if (labels_) out_labels.emplace();
  out_rows.reserve(rows.size());
  out_ids.reserve(rows.size());
  for (std::size_t i : rows) {
    out_rows.push_back(rows_.at(i));
    out_ids.push_back(ids_[i]);
    if (labels_) out_labels->push_back((*labels_)[i]);
  }
  return DataTable(descriptors_, std::move(out_rows), std::move(out_labels), std::move(out_ids));
}

DataTable DataTable::without_labels() const {
  return DataTable(descriptors_, rows_, std::nullopt, ids_, dropped_rows_);
}

DataTable concat(const std::vector<DataTable>& parts) {
  if (parts.empty()) return {};
  auto descriptors = parts.front().descriptors();
  for (const auto& p : parts) {
    const auto& d = p.descriptors();
    if (d.size() != descriptors.size()) throw ParseError("cannot concatenate tables with different headers");
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (d[j].name != descriptors[j].name) {
        throw ParseError("cannot concatenate tables: column '" + d[j].name + "' vs '" + descriptors[j].name + "'");
      }
      if (d[j].kind == FeatureKind::Textual) descriptors[j].kind = FeatureKind::Textual;
    }
  }
  const bool labeled = std::all_of(parts.begin(), parts.end(), [](const auto& p) { return p.labels().has_value(); });
  std::vector<std::vector<Cell>> rows;
  std::vector<RowId> ids;
  std::optional<std::vector<Label>> labels;
  if (labeled) labels.emplace();
  std::size_t dropped = 0;
  for (const auto& p : parts) {
    dropped += p.dropped_rows();
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto row = p.rows()[i];
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (descriptors[j].kind == FeatureKind::Textual && std::holds_alternative<double>(row[j])) {
          row[j] = format_double(std::get<double>(row[j]));
        }
      }
      rows.push_back(std::move(row));
      ids.push_back(p.ids()[i]);
      if (labeled) labels->push_back((*p.labels())[i]);
    }
  }
  return DataTable(std::move(descriptors), std::move(rows), std::move(labels), std::move(ids), dropped);
}

DataTable parse_csv_stream(std::istream& in, const std::string& source_name, const std::string& label_column,
                           const std::string& normal_tag, const std::set<std::string>& categorical) {
  csv::Reader reader(in);
  csv::Record header;
  if (!reader.next(header)) throw ParseError(source_name + ": empty file, header row required");
  for (auto& h : header) h = trim(h);
  std::optional<std::size_t> label_idx;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == label_column) label_idx = j;
  }
  if (!label_idx) throw ParseError(source_name + ": label column '" + label_column + "' not found in header");

  std::vector<csv::Record> raw;
  std::vector<std::size_t> lines;
  csv::Record rec;
  while (reader.next(rec)) {
    if (rec.size() != header.size()) {
      throw ParseError(source_name + ": line " + std::to_string(reader.line()) + " has " + std::to_string(rec.size()) +
                       " fields, header has " + std::to_string(header.size()));
    }
    raw.push_back(rec);
    lines.push_back(reader.line());
  }

  // Infer kinds from every non-missing cell of each column.
  std::vector<FeatureDescriptor> descriptors;
  std::vector<std::size_t> source_col;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j == *label_idx) continue;
    bool numeric = true;
    for (const auto& r : raw) {
      if (!is_missing(r[j]) && !parse_number(r[j])) {
        numeric = false;
        break;
      }
    }
    FeatureKind kind = FeatureKind::Textual;
    if (numeric) kind = categorical.count(header[j]) ? FeatureKind::CategoricalNumeric : FeatureKind::OrdinalNumeric;
    descriptors.push_back({header[j], kind, j});
    source_col.push_back(j);
  }

  std::vector<std::vector<Cell>> rows;
  std::vector<Label> labels;
  std::vector<RowId> ids;
  rows.reserve(raw.size());
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& r = raw[i];
    const std::string label_text = trim(r[*label_idx]);
    bool missing = label_text.empty();
    std::vector<Cell> cells;
    cells.reserve(descriptors.size());
    for (std::size_t f = 0; f < descriptors.size() && !missing; ++f) {
      const std::string& text = r[source_col[f]];
      if (descriptors[f].is_numeric()) {
        auto v = parse_number(text);
        if (!v) {
          missing = true;
          break;
        }
        cells.emplace_back(*v);
      } else {
        cells.emplace_back(trim(text));
      }
    }
    if (missing) {
      ++dropped;
      continue;
    }
    rows.push_back(std::move(cells));
    labels.push_back(label_text == normal_tag ? Label::normal() : Label::attack_named(label_text));
    ids.push_back({source_name, lines[i]});
  }
  return DataTable(std::move(descriptors), std::move(rows), std::move(labels), std::move(ids), dropped);
}

DataTable parse_csv(const std::string& path, const std::string& label_column, const std::string& normal_tag,
                    const std::set<std::string>& categorical) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open CSV file '" + path + "'");
  return parse_csv_stream(in, path, label_column, normal_tag, categorical);
}

std::vector<std::string> validate_loader_spec(const LoaderSpec& spec) {
  std::vector<std::string> notes;
  auto fail = [&](const std::string& what) { throw ConfigError("loader '" + spec.name + "': " + what); };
  if (spec.name.empty()) throw ConfigError("loader without a name");
  if (spec.dataset_tag.empty()) fail("dataset-tag is required");
  if (spec.mode == LoaderMode::SingleAttack && spec.target_attack.empty()) {
    fail("single-attack mode requires target-attack");
  }
  if (spec.train_sources.empty()) fail("train-source is required");
  if (spec.validation_sources.empty()) fail("validation-source is required");
  if (spec.label_column.empty()) fail("label-column is required");
  if (spec.normal_tag.empty()) fail("normal-tag is required");
  if (spec.train_cap < 1) fail("train-cap must be positive");
  if (spec.train_cap < kMinPolicyTrainCap || spec.train_cap > kDefaultTrainCap) {
    notes.push_back("loader '" + spec.name + "': train-cap " + std::to_string(spec.train_cap) +
                    " outside the default policy range [1000, 10000]");
  }
  return notes;
}

LoaderSpec parse_loader_spec(std::istream& in, const std::string& base_dir) {
  LoaderSpec spec;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
    return path.lexically_normal().string();
  };
  auto parse_uint = [&](const std::string& key, const std::string& v) -> std::uint64_t {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw ConfigError("line " + std::to_string(lineno) + ": '" + key + "' expects a nonnegative integer, got '" + v + "'");
    }
    return out;
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    if (key == "name") {
      spec.name = value;
    } else if (key == "dataset-tag") {
      spec.dataset_tag = value;
    } else if (key == "mode") {
      if (value == "single-attack") spec.mode = LoaderMode::SingleAttack;
      else if (value == "unknowns") spec.mode = LoaderMode::Unknowns;
      else throw ConfigError("line " + std::to_string(lineno) + ": mode must be single-attack or unknowns");
    } else if (key == "target-attack") {
      spec.target_attack = value;
    } else if (key == "train-source" || key == "validation-source") {
      auto& dst = key == "train-source" ? spec.train_sources : spec.validation_sources;
      for (const auto& p : split(value, ',')) {
        if (!p.empty()) dst.push_back(resolve(p));
      }
    } else if (key == "label-column") {
      spec.label_column = value;
    } else if (key == "normal-tag") {
      spec.normal_tag = value;
    } else if (key == "categorical-columns") {
      for (const auto& c : split(value, ',')) {
        if (!c.empty()) spec.categorical_columns.insert(c);
      }
    } else if (key == "train-cap") {
      spec.train_cap = parse_uint(key, value);
    } else if (key == "seed") {
      spec.seed = parse_uint(key, value);
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown loader key '" + key + "'");
    }
  }
  validate_loader_spec(spec);
  return spec;
}

LoaderSpec read_loader_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open loader file '" + path + "'");
  try {
    return parse_loader_spec(in, std::filesystem::path(path).parent_path().string());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_loader_spec(std::ostream& out, const LoaderSpec& spec) {
  auto join = [](const auto& items) {
    std::string s;
    for (const auto& i : items) {
      if (!s.empty()) s += ", ";
      s += i;
    }
    return s;
  };
  out << "name = " << spec.name << '\n'
      << "dataset-tag = " << spec.dataset_tag << '\n'
      << "mode = " << (spec.mode == LoaderMode::SingleAttack ? "single-attack" : "unknowns") << '\n';
  if (!spec.target_attack.empty()) out << "target-attack = " << spec.target_attack << '\n';
  out << "train-source = " << join(spec.train_sources) << '\n'
      << "validation-source = " << join(spec.validation_sources) << '\n'
      << "label-column = " << spec.label_column << '\n'
      << "normal-tag = " << spec.normal_tag << '\n';
  if (!spec.categorical_columns.empty()) out << "categorical-columns = " << join(spec.categorical_columns) << '\n';
  out << "train-cap = " << spec.train_cap << '\n' << "seed = " << spec.seed << '\n';
}

namespace {

bool goes_to_validation(const RowId& id, std::uint64_t seed) {
  return (derive_seed(seed, id.source, std::to_string(id.line)) & 1U) == 1U;
}

bool has_both_classes(const DataTable& t) {
  const auto flags = t.anomaly_flags();
  const auto attacks = std::count(flags.begin(), flags.end(), true);
  return attacks > 0 && attacks < static_cast<std::ptrdiff_t>(flags.size());
}

}  // namespace

SplitBundle materialize_split(const LoaderSpec& spec, const DataTable& train_table, const DataTable& validation_table) {
  SplitBundle bundle;
  bundle.warnings = validate_loader_spec(spec);
  if (!train_table.labels() || !validation_table.labels()) {
    throw LoaderError("loader '" + spec.name + "': source tables must be labeled");
  }
  const bool single = spec.mode == LoaderMode::SingleAttack;
  auto keep = [&](const Label& l) { return !single || !l.is_attack() || same_attack(l.attack, spec.target_attack); };

  const std::set<RowId> train_ids(train_table.ids().begin(), train_table.ids().end());
  const std::set<RowId> val_ids(validation_table.ids().begin(), validation_table.ids().end());

  std::vector<std::size_t> pool;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < train_table.size(); ++i) {
    const auto& id = train_table.ids()[i];
    if (!keep((*train_table.labels())[i])) {
      ++skipped;
      continue;
    }
    if (val_ids.count(id) && goes_to_validation(id, spec.seed)) continue;
    pool.push_back(i);
  }
  std::vector<std::size_t> val_rows;
  for (std::size_t i = 0; i < validation_table.size(); ++i) {
    const auto& id = validation_table.ids()[i];
    if (!keep((*validation_table.labels())[i])) {
      ++skipped;
      continue;
    }
    if (train_ids.count(id) && !goes_to_validation(id, spec.seed)) continue;
    val_rows.push_back(i);
  }
  if (skipped > 0) {
    bundle.warnings.push_back("loader '" + spec.name + "': skipped " + std::to_string(skipped) +
                              " rows of attacks other than '" + spec.target_attack + "'");
  }
  const std::size_t dropped = train_table.dropped_rows() + (&train_table == &validation_table ? 0 : validation_table.dropped_rows());
  if (dropped > 0) {
    bundle.warnings.push_back("loader '" + spec.name + "': " + std::to_string(dropped) +
                              " rows dropped for missing numeric cells");
  }

  auto is_target = [&](const Label& l) { return l.is_attack() && (!single || same_attack(l.attack, spec.target_attack)); };
  std::vector<std::size_t> val_attack, val_normal;
  for (std::size_t i : val_rows) {
    ((is_target((*validation_table.labels())[i])) ? val_attack : val_normal).push_back(i);
  }
  if (val_attack.empty()) {
    throw LoaderError("loader '" + spec.name + "': validation set contains no " +
                      (single ? "rows of attack '" + spec.target_attack + "'" : std::string("anomalous rows")));
  }

  Rng rng(mix64(spec.seed));
  std::shuffle(pool.begin(), pool.end(), rng);
  const auto n_tune = static_cast<std::size_t>(std::llround(kTuningFraction * static_cast<double>(pool.size())));
  std::vector<std::size_t> tune_rows(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_tune));
  std::vector<std::size_t> train_rows(pool.begin() + static_cast<std::ptrdiff_t>(n_tune), pool.end());
  if (train_rows.size() > spec.train_cap) {
    bundle.warnings.push_back("loader '" + spec.name + "': training rows capped from " +
                              std::to_string(train_rows.size()) + " to " + std::to_string(spec.train_cap));
    train_rows.resize(spec.train_cap);
  }
  if (train_rows.empty()) throw LoaderError("loader '" + spec.name + "': no training rows left after filtering");

  DataTable tuning = train_table.select(tune_rows);
  DataTable validation;
  if (!has_both_classes(tuning)) {
    // The training source alone cannot provide a two-class tuning partition:
    // hold out a stratified tenth of the validation rows instead.
    Rng vr(mix64(spec.seed ^ 0x5eedf00dULL));
    std::shuffle(val_attack.begin(), val_attack.end(), vr);
    std::shuffle(val_normal.begin(), val_normal.end(), vr);
    auto tenth = [](std::size_t n) { return static_cast<std::size_t>(std::ceil(kTuningFraction * static_cast<double>(n))); };
    const std::size_t move_attack = std::min(tenth(val_attack.size()), val_attack.size() - 1);
    const std::size_t move_normal = std::min(tenth(val_normal.size()), val_normal.size());
    std::vector<std::size_t> moved(val_attack.begin(), val_attack.begin() + static_cast<std::ptrdiff_t>(move_attack));
    moved.insert(moved.end(), val_normal.begin(), val_normal.begin() + static_cast<std::ptrdiff_t>(move_normal));
    std::sort(moved.begin(), moved.end());
    std::vector<std::size_t> kept;
    std::set_difference(val_rows.begin(), val_rows.end(), moved.begin(), moved.end(), std::back_inserter(kept));
    tuning = concat({tuning, validation_table.select(moved)});
    validation = validation_table.select(kept);
    bundle.warnings.push_back("loader '" + spec.name + "': training source lacks a class; tuning rows (" +
                              std::to_string(moved.size()) + ") held out from the validation source");
    if (!has_both_classes(tuning)) {
      throw LoaderError("loader '" + spec.name + "': cannot build a tuning partition with both normal and attack rows");
    }
  } else {
    validation = validation_table.select(val_rows);
  }

  bundle.train = train_table.select(train_rows).without_labels();
  bundle.tuning = std::move(tuning);
  bundle.validation = std::move(validation);
  return bundle;
}

SplitBundle materialize(const LoaderSpec& spec) {
  auto load = [&](const std::vector<std::string>& sources) {
    std::vector<DataTable> parts;
    for (const auto& s : sources) parts.push_back(parse_csv(s, spec.label_column, spec.normal_tag, spec.categorical_columns));
    return concat(parts);
  };
  const DataTable train = load(spec.train_sources);
  if (spec.validation_sources == spec.train_sources) return materialize_split(spec, train, train);
  const DataTable validation = load(spec.validation_sources);
  return materialize_split(spec, train, validation);
}

LoaderSpec build_unknowns_loader(const std::string& dataset_tag, const std::vector<std::string>& attack_sources,
                                 const std::string& normal_source, std::uint64_t seed, const LoaderSpec& base) {
  if (attack_sources.empty()) throw ConfigError("unknowns loader for '" + dataset_tag + "' needs at least one attack source");
  LoaderSpec spec = base;
  spec.name = dataset_tag + "-unknowns";
  spec.dataset_tag = dataset_tag;
  spec.mode = LoaderMode::Unknowns;
  spec.target_attack.clear();
  spec.train_sources.clear();
  if (!normal_source.empty()) spec.train_sources.push_back(normal_source);
  spec.train_sources.insert(spec.train_sources.end(), attack_sources.begin(), attack_sources.end());
  spec.validation_sources = spec.train_sources;
  spec.seed = seed;
  return spec;
}

}  // namespace adbench
