#include "adbench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "adbench/csv.hpp"

namespace fs = std::filesystem;

namespace adbench {

namespace {

using Clock = std::chrono::steady_clock;

std::size_t parse_count(const std::string& key, const std::string& value, std::size_t minimum) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("campaign: '" + key + "' expects an integer, got '" + value + "'");
  }
  if (pos != value.size() || v < static_cast<long long>(minimum)) {
    throw ConfigError("campaign: '" + key + "' must be an integer >= " + std::to_string(minimum) + ", got '" +
                      value + "'");
  }
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
  const auto v = to_lower(value);
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ConfigError("campaign: '" + key + "' expects true or false, got '" + value + "'");
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p.lexically_normal().string();
  return (fs::path(base_dir) / p).lexically_normal().string();
}

void check_deadline(const Deadline& deadline) {
  if (deadline && Clock::now() > *deadline) throw TimeoutError("timeout: experiment exceeded its time budget");
}

/// Runs fn(i) for i in [0, n) on `width` threads; exceptions must be handled
/// inside fn.
void parallel_for(std::size_t n, std::size_t width, const std::function<void(std::size_t)>& fn) {
  width = std::max<std::size_t>(1, std::min(width, n));
  if (width == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(width);
  for (std::size_t w = 0; w < width; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

double parse_real(const std::string& text) {
  if (text.empty()) return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw ParseError("bad number '" + text + "'");
    return v;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad number '" + text + "'");
  } catch (const std::out_of_range&) {
    throw ParseError("number out of range '" + text + "'");
  }
}

std::uint64_t parse_u64(const std::string& text) {
  if (text.empty()) return 0;
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(text, &pos);
    if (pos != text.size()) throw ParseError("bad integer '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad integer '" + text + "'");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

std::vector<std::string> loader_files(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw ConfigError("not a directory: " + dir);
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".loader") out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

CampaignConfig parse_campaign_config(std::istream& in, const std::string& base_dir) {
  CampaignConfig config;
  bool algorithms_set = false;
  std::set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("campaign line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = to_lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    const bool repeatable = key == "loader" || key == "loader_dir";
    if (!repeatable && !seen.insert(key).second) {
      throw ConfigError("campaign line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    if (key == "seed") {
      try {
        std::size_t pos = 0;
        config.seed = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw ConfigError("campaign: seed must be an unsigned integer, got '" + value + "'");
      }
    } else if (key == "parallel") {
      config.parallel = parse_count(key, value, 1);
    } else if (key == "folds") {
      config.folds = parse_count(key, value, 2);
    } else if (key == "features") {
      config.features = parse_count(key, value, 1);
    } else if (key == "timeout_minutes") {
      double v = 0.0;
      try {
        v = std::stod(value);
      } catch (const std::exception&) {
        v = -1.0;
      }
      if (!(v > 0.0)) throw ConfigError("campaign: timeout_minutes must be positive, got '" + value + "'");
      config.timeout_minutes = v;
    } else if (key == "timing") {
      config.timing = parse_bool(key, value);
    } else if (key == "algorithms") {
      algorithms_set = true;
      if (to_lower(value) == "all") {
        config.algorithms.assign(all_algorithms().begin(), all_algorithms().end());
        continue;
      }
      for (const auto& item : split(value, ',')) {
        const auto name = trim(item);
        if (name.empty()) continue;
        const auto alg = parse_algorithm(name);
        if (!alg) throw ConfigError("campaign: unknown algorithm '" + name + "'");
        if (std::find(config.algorithms.begin(), config.algorithms.end(), *alg) != config.algorithms.end()) {
          throw ConfigError("campaign: algorithm '" + name + "' listed twice");
        }
        config.algorithms.push_back(*alg);
      }
    } else if (key == "loader") {
      config.loaders.push_back(read_loader_spec(resolve(base_dir, value)));
    } else if (key == "loader_dir") {
      for (const auto& file : loader_files(resolve(base_dir, value))) config.loaders.push_back(read_loader_spec(file));
    } else if (key == "taxonomy") {
      config.taxonomy = resolve(base_dir, value);
    } else {
      throw ConfigError("campaign line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (!algorithms_set) config.algorithms.assign(all_algorithms().begin(), all_algorithms().end());
  return config;
}

CampaignConfig read_campaign_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open campaign file: " + path);
  return parse_campaign_config(in, fs::path(path).parent_path().string());
}

void validate_campaign(const CampaignConfig& config) {
  if (config.algorithms.empty()) throw ConfigError("campaign: no algorithms selected");
  if (config.loaders.empty()) throw ConfigError("campaign: no loaders declared");
  if (config.folds < 2) throw ConfigError("campaign: folds must be at least 2");
  if (config.parallel < 1) throw ConfigError("campaign: parallel must be at least 1");
  std::set<std::string> names;
  for (const auto& l : config.loaders) {
    if (!names.insert(l.name).second) throw ConfigError("campaign: duplicate loader name '" + l.name + "'");
  }
}

// ---------------------------------------------------------------------------
// Folds and loader preparation

std::vector<Partition> kfold_partitions(std::size_t rows, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw ConfigError("kfold: need at least two folds");
  if (folds > rows) {
    throw FitError("kfold: " + std::to_string(folds) + " folds requested for " + std::to_string(rows) + " rows");
  }
  Rng rng(seed);
  const auto order = sample_without_replacement(rows, rows, rng);
  const std::size_t base = rows / folds;
  const std::size_t extra = rows % folds;
  std::vector<Partition> parts(folds);
  std::size_t start = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t len = base + (f < extra ? 1 : 0);
    auto& p = parts[f];
    p.held.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                  order.begin() + static_cast<std::ptrdiff_t>(start + len));
    std::sort(p.held.begin(), p.held.end());
    p.fit.reserve(rows - len);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i < start || i >= start + len) p.fit.push_back(order[i]);
    }
    std::sort(p.fit.begin(), p.fit.end());
    start += len;
  }
  return parts;
}

std::vector<Partition> kfold_partitions(const DataTable& train, std::size_t folds, std::uint64_t seed) {
  return kfold_partitions(train.size(), folds, seed);
}

PreparedLoader prepare_bundle(const LoaderSpec& spec, const SplitBundle& bundle, std::size_t features) {
  PreparedLoader p;
  p.spec = spec;
  p.warnings = bundle.warnings;
  try {
    p.selection = select_top_n(bundle.tuning, features);
    p.warnings.insert(p.warnings.end(), p.selection.warnings.begin(), p.selection.warnings.end());
    if (p.selection.chosen.empty()) throw LoaderError("loader '" + spec.name + "': no ordinal features to select");
    const auto names = p.selection.names();
    auto positions_in = [&](const DataTable& t, const char* part) {
      std::vector<std::size_t> pos;
      for (const auto& n : names) {
        const auto at = t.find_feature(n);
        if (!at || !t.descriptors()[*at].is_numeric()) {
          throw LoaderError("loader '" + spec.name + "': feature '" + n + "' is not numeric in the " + part +
                            " partition");
        }
        pos.push_back(*at);
      }
      return pos;
    };
    const PointSet train_raw = bundle.train.points(positions_in(bundle.train, "train"));
    const auto norm = fit_normalizer(train_raw);
    p.train = apply_normalizer(norm, train_raw);
    p.tuning = apply_normalizer(norm, bundle.tuning.points(positions_in(bundle.tuning, "tuning")));
    p.validation = apply_normalizer(norm, bundle.validation.points(positions_in(bundle.validation, "validation")));
    p.tuning_labels = bundle.tuning.anomaly_flags();
    p.validation_labels = bundle.validation.anomaly_flags();
  } catch (const std::exception& e) {
    p.error = e.what();
  }
  return p;
}

PreparedLoader prepare_loader(const LoaderSpec& spec, std::size_t features) {
  try {
    return prepare_bundle(spec, materialize(spec), features);
  } catch (const std::exception& e) {
    PreparedLoader p;
    p.spec = spec;
    p.error = e.what();
    return p;
  }
}

// ---------------------------------------------------------------------------
// Tuning

namespace {

constexpr std::size_t kParameterlessStatRows = 2000;

std::vector<double> candidate_mccs(const DecisionStatistics& stats, std::span<const double> tuning_scores,
                                   const std::vector<bool>& labels) {
  std::vector<double> out;
  for (const auto& c : decision_candidates()) {
    out.push_back(mcc(confusion(classify_all(make_decision_function(c, stats), tuning_scores), labels)));
  }
  return out;
}

}  // namespace

TuneResult tune_and_fit(Algorithm algorithm, const PointSet& train, const PointSet& tuning,
                        const std::vector<bool>& tuning_labels, const ParamGrid& grid, std::size_t folds,
                        std::uint64_t seed, Deadline deadline) {
  TuneResult result;
  const auto& cands = decision_candidates();
  if (tuning.size() != tuning_labels.size()) throw std::invalid_argument("tune_and_fit: tuning labels mismatch");

  if (grid.empty()) {
    check_deadline(deadline);
    result.model = fit_detector(algorithm, {}, train, seed);
    result.assignments_tried = 1;
    check_deadline(deadline);
    PointSet sample = train;
    if (train.size() > kParameterlessStatRows) {
      Rng rng(mix64(seed ^ 0x51a7U));
      auto idx = sample_without_replacement(train.size(), kParameterlessStatRows, rng);
      std::sort(idx.begin(), idx.end());
      sample = train.subset(idx);
    }
    const auto stats = decision_statistics(result.model.scorer->score_all(sample));
    check_deadline(deadline);
    const auto mccs = candidate_mccs(stats, result.model.scorer->score_all(tuning), tuning_labels);
    const auto best = static_cast<std::size_t>(std::max_element(mccs.begin(), mccs.end()) - mccs.begin());
    result.decision = make_decision_function(cands[best], stats);
    result.tuning_mcc = mccs[best];
    result.warnings = result.model.scorer->warnings();
    return result;
  }

  const auto assignments = grid.assignments();
  const auto parts = kfold_partitions(train.size(), folds, seed);
  std::vector<PointSet> fit_sets;
  std::vector<PointSet> held_sets;
  for (const auto& p : parts) {
    fit_sets.push_back(train.subset(p.fit));
    held_sets.push_back(train.subset(p.held));
  }

  double best_mcc = -std::numeric_limits<double>::infinity();
  std::size_t best_assignment = assignments.size();
  std::size_t best_candidate = 0;
  std::vector<double> best_oof;
  std::string last_error;

  for (std::size_t a = 0; a < assignments.size(); ++a) {
    const auto& params = assignments[a];
    ++result.assignments_tried;
    std::vector<double> sums(cands.size(), 0.0);
    std::vector<double> oof;
    bool ok = true;
    for (std::size_t f = 0; f < parts.size() && ok; ++f) {
      check_deadline(deadline);
      try {
        const auto model =
            fit_detector(algorithm, params, fit_sets[f], derive_seed(seed, params.to_string(), std::to_string(f)));
        const auto held = model.scorer->score_all(held_sets[f]);
        oof.insert(oof.end(), held.begin(), held.end());
        const auto mccs = candidate_mccs(decision_statistics(held), model.scorer->score_all(tuning), tuning_labels);
        for (std::size_t c = 0; c < cands.size(); ++c) sums[c] += mccs[c];
      } catch (const FitError& e) {
        ok = false;
        last_error = e.what();
      }
    }
    if (!ok) {
      ++result.assignments_failed;
      continue;
    }
    for (std::size_t c = 0; c < cands.size(); ++c) {
      const double m = sums[c] / static_cast<double>(parts.size());
      if (m > best_mcc) {
        best_mcc = m;
        best_assignment = a;
        best_candidate = c;
        best_oof = oof;
      }
    }
  }
  if (best_assignment == assignments.size()) {
    throw FitError("every parameter assignment failed; last error: " + last_error);
  }
  if (result.assignments_failed > 0) {
    result.warnings.push_back(std::to_string(result.assignments_failed) + " of " +
                              std::to_string(assignments.size()) + " parameter assignments failed to fit");
  }
  check_deadline(deadline);
  const auto& winner = assignments[best_assignment];
  result.model = fit_detector(algorithm, winner, train, derive_seed(seed, winner.to_string(), "final"));
  result.decision = make_decision_function(cands[best_candidate], decision_statistics(best_oof));
  result.tuning_mcc = best_mcc;
  const auto& w = result.model.scorer->warnings();
  result.warnings.insert(result.warnings.end(), w.begin(), w.end());
  return result;
}

std::uint64_t experiment_seed(std::uint64_t master, const std::string& loader, Algorithm algorithm) {
  return derive_seed(master, loader, algorithm_name(algorithm));
}

ExperimentTriple run_experiment(Algorithm algorithm, const PreparedLoader& loader, const CampaignConfig& config) {
  const auto start = Clock::now();
  ExperimentTriple row;
  row.loader = loader.spec.name;
  row.algorithm = std::string(algorithm_name(algorithm));
  row.dataset = loader.spec.dataset_tag;
  row.attack = loader.spec.mode == LoaderMode::SingleAttack ? loader.spec.target_attack : std::string();
  row.mode = loader.spec.mode;
  row.seed = experiment_seed(config.seed, loader.spec.name, algorithm);
  row.params = "-";
  row.metrics.auc = std::numeric_limits<double>::quiet_NaN();

  if (!loader.error.empty()) {
    row.error = "loader: " + loader.error;
  } else {
    try {
      const Deadline deadline =
          start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(config.timeout_minutes * 60.0));
      const auto tuned = tune_and_fit(algorithm, loader.train, loader.tuning, loader.tuning_labels,
                                      default_param_grid(algorithm), config.folds, row.seed, deadline);
      row.params = tuned.model.params.to_string();
      check_deadline(deadline);
      const auto scores = tuned.model.scorer->score_all(loader.validation);
      row.decision_function = tuned.decision.to_string();
      row.cm = confusion(classify_all(tuned.decision, scores), loader.validation_labels);
      row.metrics = metric_suite(row.cm);
      try {
        row.metrics.auc = auc(scores, loader.validation_labels);
      } catch (const std::invalid_argument&) {
        row.metrics.auc = std::numeric_limits<double>::quiet_NaN();
      }
    } catch (const std::exception& e) {
      row.error = e.what();
      row.decision_function.clear();
      row.cm = {};
    }
  }
  if (!row.error.empty()) {
    // Keep the message on one CSV-friendly line.
    std::replace(row.error.begin(), row.error.end(), '\n', ' ');
  }
  if (config.timing) {
    row.ms = std::max(std::chrono::duration<double, std::milli>(Clock::now() - start).count(), 1e-3);
  }
  return row;
}

std::size_t CampaignResult::error_rows() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.ok(); }));
}

CampaignResult run_campaign(const CampaignConfig& config, std::ostream* log) {
  validate_campaign(config);
  const auto start = Clock::now();
  std::mutex log_mutex;
  auto note = [&](const std::string& line) {
    if (!log) return;
    std::lock_guard lock(log_mutex);
    *log << line << '\n';
  };

  const std::size_t n_loaders = config.loaders.size();
  std::vector<PreparedLoader> prepared(n_loaders);
  parallel_for(n_loaders, config.parallel, [&](std::size_t i) {
    prepared[i] = prepare_loader(config.loaders[i], config.features);
    note("prepared " + config.loaders[i].name +
         (prepared[i].error.empty() ? " (" + std::to_string(prepared[i].train.size()) + " train rows)"
                                    : ": " + prepared[i].error));
  });

  CampaignResult result;
  for (const auto& p : prepared) {
    for (const auto& w : p.warnings) result.warnings.push_back(w);
    LoaderSummary s;
    s.loader = p.spec.name;
    s.features = p.selection.names();
    s.avg_infogain = p.selection.avg_infogain;
    s.error = p.error;
    result.loaders.push_back(std::move(s));
  }

  const std::size_t n_alg = config.algorithms.size();
  result.rows.resize(n_loaders * n_alg);
  std::atomic<std::size_t> done{0};
  parallel_for(result.rows.size(), config.parallel, [&](std::size_t t) {
    const auto& loader = prepared[t / n_alg];
    const Algorithm alg = config.algorithms[t % n_alg];
    result.rows[t] = run_experiment(alg, loader, config);
    const auto& r = result.rows[t];
    note("[" + std::to_string(++done) + "/" + std::to_string(result.rows.size()) + "] " + r.loader + " " +
         r.algorithm + (r.ok() ? " mcc=" + format_double(r.metrics.mcc) : " error: " + r.error));
  });
  result.total_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return result;
}

// ---------------------------------------------------------------------------
// Triples CSV

std::string loader_mode_name(LoaderMode mode) {
  return mode == LoaderMode::SingleAttack ? "single-attack" : "unknowns";
}

const std::vector<std::string>& triple_columns() {
  static const std::vector<std::string> cols = {
      "loader", "algorithm", "params", "decision-function", "tp", "tn", "fp",   "fn",    "tnr",     "fpr", "p",
      "r",      "f1",        "f2",     "acc",               "mcc", "auc", "ms", "seed", "error", "dataset", "attack",
      "mode"};
  return cols;
}

void write_triples(std::ostream& out, const std::vector<ExperimentTriple>& rows) {
  csv::write_record(out, triple_columns());
  for (const auto& t : rows) {
    csv::Record r = {t.loader, t.algorithm, t.params, t.decision_function};
    if (t.ok()) {
      for (auto v : {t.cm.tp, t.cm.tn, t.cm.fp, t.cm.fn}) r.push_back(std::to_string(v));
      const auto& m = t.metrics;
      for (double v : {m.tnr, m.fpr, m.precision, m.recall, m.f1, m.f2, m.accuracy, m.mcc, m.auc}) {
        r.push_back(format_double(v));
      }
    } else {
      r.insert(r.end(), 13, std::string());
    }
    r.push_back(format_double(t.ms));
    r.push_back(std::to_string(t.seed));
    r.push_back(t.error);
    r.push_back(t.dataset);
    r.push_back(t.attack);
    r.push_back(loader_mode_name(t.mode));
    csv::write_record(out, r);
  }
}

void write_triples_file(const std::string& path, const std::vector<ExperimentTriple>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_triples(out, rows);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ExperimentTriple> read_triples(std::istream& in) {
  csv::Reader reader(in);
  csv::Record header;
  if (!reader.next(header)) throw ParseError("triples: empty input");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[trim(header[i])] = i;
  for (std::size_t i = 0; i < 20; ++i) {
    if (!col.count(triple_columns()[i])) throw ParseError("triples: missing column '" + triple_columns()[i] + "'");
  }
  std::vector<ExperimentTriple> rows;
  csv::Record rec;
  while (reader.next(rec)) {
    if (rec.size() != header.size()) {
      throw ParseError("triples line " + std::to_string(reader.line()) + ": expected " +
                       std::to_string(header.size()) + " fields, got " + std::to_string(rec.size()));
    }
    auto get = [&](const std::string& name) -> std::string {
      const auto it = col.find(name);
      return it == col.end() ? std::string() : rec[it->second];
    };
    try {
      ExperimentTriple t;
      t.loader = get("loader");
      t.algorithm = get("algorithm");
      t.params = get("params");
      t.decision_function = get("decision-function");
      t.error = get("error");
      t.cm.tp = parse_u64(get("tp"));
      t.cm.tn = parse_u64(get("tn"));
      t.cm.fp = parse_u64(get("fp"));
      t.cm.fn = parse_u64(get("fn"));
      auto& m = t.metrics;
      m.tnr = parse_real(get("tnr"));
      m.fpr = parse_real(get("fpr"));
      m.precision = parse_real(get("p"));
      m.recall = parse_real(get("r"));
      m.f1 = parse_real(get("f1"));
      m.f2 = parse_real(get("f2"));
      m.accuracy = parse_real(get("acc"));
      m.mcc = parse_real(get("mcc"));
      m.auc = parse_real(get("auc"));
      t.ms = get("ms").empty() ? 0.0 : parse_real(get("ms"));
      t.seed = parse_u64(get("seed"));
      t.dataset = col.count("dataset") ? get("dataset") : t.loader;
      t.attack = get("attack");
      const auto mode = get("mode");
      t.mode = mode == "unknowns" ? LoaderMode::Unknowns : LoaderMode::SingleAttack;
      if (t.ok() && std::isnan(m.mcc)) throw ParseError("missing mcc on a successful row");
      rows.push_back(std::move(t));
    } catch (const ParseError& e) {
      throw ParseError("triples line " + std::to_string(reader.line()) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<ExperimentTriple> read_triples_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open triples file: " + path);
  return read_triples(in);
}

void write_loader_summaries(std::ostream& out, const std::vector<LoaderSummary>& rows) {
  csv::write_record(out, {"loader", "features", "avg_infogain", "error"});
  for (const auto& r : rows) {
    std::string names;
    for (const auto& f : r.features) names += (names.empty() ? "" : ";") + f;
    csv::write_record(out, {r.loader, names, r.error.empty() ? format_double(r.avg_infogain) : "", r.error});
  }
}

std::size_t validate_loader_dir(const std::string& dir, std::ostream& out) {
  const auto files = loader_files(dir);
  if (files.empty()) {
    out << "no *.loader files in " << dir << '\n';
    return 1;
  }
  std::size_t failures = 0;
  for (const auto& file : files) {
    try {
      const auto spec = read_loader_spec(file);
      const auto bundle = materialize(spec);
      auto count_attacks = [](const DataTable& t) {
        const auto f = t.anomaly_flags();
        return static_cast<std::size_t>(std::count(f.begin(), f.end(), true));
      };
      out << "ok   " << spec.name << ": train " << bundle.train.size() << ", tuning " << bundle.tuning.size() << " ("
          << count_attacks(bundle.tuning) << " attack), validation " << bundle.validation.size() << " ("
          << count_attacks(bundle.validation) << " attack)\n";
      for (const auto& w : bundle.warnings) out << "     warning: " << w << '\n';
    } catch (const std::exception& e) {
      ++failures;
      out << "FAIL " << fs::path(file).filename().string() << ": " << e.what() << '\n';
    }
  }
  return failures;
}

}  // namespace adbench
