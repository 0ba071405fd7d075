#include "adbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "adbench/csv.hpp"
#include "adbench/svg.hpp"

namespace fs = std::filesystem;

namespace adbench {

namespace {

/// Insertion-ordered grouping: key -> row indices.
class Groups {
 public:
  void add(const std::string& key, std::size_t row) {
    auto [it, fresh] = index_.emplace(key, keys_.size());
    if (fresh) {
      keys_.push_back(key);
      rows_.emplace_back();
    }
    rows_[it->second].push_back(row);
  }
  const std::vector<std::string>& keys() const { return keys_; }
  const std::vector<std::size_t>& rows(const std::string& key) const { return rows_[index_.at(key)]; }
  bool has(const std::string& key) const { return index_.count(key) != 0; }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<std::string> keys_;
  std::vector<std::vector<std::size_t>> rows_;
};

std::vector<ExperimentTriple> usable(const std::vector<ExperimentTriple>& triples) {
  std::vector<ExperimentTriple> out;
  for (const auto& t : triples) {
    if (!t.ok()) continue;
    out.push_back(t);
    out.back().algorithm = canonical_algorithm(t.algorithm);
  }
  return out;
}

std::size_t algorithm_order(const std::string& name) {
  const auto alg = parse_algorithm(name);
  return alg ? static_cast<std::size_t>(*alg) : kAlgorithmCount;
}

bool algorithm_less(const std::string& a, const std::string& b) {
  const auto oa = algorithm_order(a);
  const auto ob = algorithm_order(b);
  return oa != ob ? oa < ob : a < b;
}

/// Best MCC per loader.
std::map<std::string, double> loader_best(const std::vector<ExperimentTriple>& rows) {
  std::map<std::string, double> best;
  for (const auto& t : rows) {
    auto [it, fresh] = best.emplace(t.loader, t.mcc());
    if (!fresh) it->second = std::max(it->second, t.mcc());
  }
  return best;
}

MetricStat stat_of(const std::vector<double>& values) { return {mean(values), stddev(values)}; }

template <typename F>
std::vector<double> collect(const std::vector<ExperimentTriple>& rows, const std::vector<std::size_t>& idx, F f) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(f(rows[i]));
  return out;
}

/// Mean of the per-loader maxima over the loaders touched by `idx`.
double avg_best(const std::vector<ExperimentTriple>& rows, const std::vector<std::size_t>& idx) {
  Groups loaders;
  for (auto i : idx) loaders.add(rows[i].loader, i);
  std::vector<double> maxima;
  for (const auto& l : loaders.keys()) {
    double m = -std::numeric_limits<double>::infinity();
    for (auto i : loaders.rows(l)) m = std::max(m, rows[i].mcc());
    maxima.push_back(m);
  }
  return mean(maxima);
}

std::size_t distinct_loaders(const std::vector<ExperimentTriple>& rows, const std::vector<std::size_t>& idx) {
  std::set<std::string> s;
  for (auto i : idx) s.insert(rows[i].loader);
  return s.size();
}

void write_file(const fs::path& path, const std::string& content, ReportFiles& files) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  out.close();
  if (!out) throw std::runtime_error("write failed: " + path.string());
  files.written.push_back(path.string());
}

std::string csv_text(const std::vector<csv::Record>& records) {
  std::ostringstream out;
  for (const auto& r : records) csv::write_record(out, r);
  return out.str();
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

// ---------------------------------------------------------------------------

std::string canonical_algorithm(const std::string& name) {
  const auto alg = parse_algorithm(name);
  return alg ? std::string(algorithm_name(*alg)) : name;
}

FamilyRegistry FamilyRegistry::standard() {
  FamilyRegistry r;
  r.families_ = {"clustering", "statistical", "classification", "neural", "neighbor", "density", "angle"};
  r.add("KMEANS", {"clustering"});
  r.add("GMEANS", {"clustering"});
  r.add("DBSCAN", {"clustering", "density"});
  r.add("LDCOF", {"clustering", "density"});
  r.add("HBOS", {"statistical"});
  r.add("SOS", {"statistical"});
  r.add("ISOS", {"statistical", "neighbor"});
  r.add("SVM", {"classification"});
  r.add("IFOREST", {"classification"});
  r.add("SOM", {"neural"});
  r.add("ABOD", {"angle"});
  r.add("FASTABOD", {"angle", "neighbor"});
  r.add("KNN", {"neighbor"});
  r.add("ODIN", {"neighbor"});
  r.add("LOF", {"neighbor", "density"});
  r.add("COF", {"neighbor", "density"});
  r.add("SDO", {"density"});
  return r;
}

void FamilyRegistry::add(const std::string& algorithm, std::vector<std::string> families) {
  const auto name = canonical_algorithm(algorithm);
  for (const auto& f : families) {
    if (std::find(families_.begin(), families_.end(), f) == families_.end()) families_.push_back(f);
  }
  if (!membership_.count(name)) order_.push_back(name);
  membership_[name] = std::move(families);
}

const std::vector<std::string>& FamilyRegistry::families_of(const std::string& algorithm) const {
  static const std::vector<std::string> none;
  const auto it = membership_.find(canonical_algorithm(algorithm));
  return it == membership_.end() ? none : it->second;
}

std::vector<std::string> FamilyRegistry::members(const std::string& family, bool starred) const {
  std::vector<std::string> out;
  for (const auto& name : order_) {
    const auto& fs = membership_.at(name);
    const bool in = std::find(fs.begin(), fs.end(), family) != fs.end();
    if (in && (starred || fs.size() == 1)) out.push_back(name);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<AlgoSummary> algo_summary(const std::vector<ExperimentTriple>& triples) {
  const auto rows = usable(triples);
  const auto best = loader_best(rows);
  Groups by_alg;
  for (std::size_t i = 0; i < rows.size(); ++i) by_alg.add(rows[i].algorithm, i);
  auto names = by_alg.keys();
  std::sort(names.begin(), names.end(), algorithm_less);
  std::vector<AlgoSummary> out;
  for (const auto& name : names) {
    const auto& idx = by_alg.rows(name);
    AlgoSummary s;
    s.algorithm = name;
    s.loaders = distinct_loaders(rows, idx);
    const auto m = collect(rows, idx, [](const auto& t) { return t.mcc(); });
    s.avg_mcc = mean(m);
    s.std_mcc = stddev(m);
    s.avg_f1 = mean(collect(rows, idx, [](const auto& t) { return t.metrics.f1; }));
    s.avg_acc = mean(collect(rows, idx, [](const auto& t) { return t.metrics.accuracy; }));
    for (auto i : idx) s.best_count += rows[i].mcc() == best.at(rows[i].loader) ? 1 : 0;
    out.push_back(std::move(s));
  }
  return out;
}

RankTable rank_mcc(const std::vector<ExperimentTriple>& triples) {
  const auto rows = usable(triples);
  Groups by_loader;
  for (std::size_t i = 0; i < rows.size(); ++i) by_loader.add(rows[i].loader, i);
  RankTable table;
  std::map<std::string, std::vector<double>> per_alg;
  for (const auto& loader : by_loader.keys()) {
    std::map<std::string, double> mccs;
    std::vector<std::string> order;
    for (auto i : by_loader.rows(loader)) {
      if (mccs.emplace(rows[i].algorithm, rows[i].mcc()).second) order.push_back(rows[i].algorithm);
    }
    const std::size_t m = mccs.size();
    auto& ranks = table.ranks[loader];
    for (const auto& alg : order) {
      std::size_t better = 0;
      for (const auto& [other, v] : mccs) better += v > mccs.at(alg) ? 1 : 0;
      const double r = m == 1 ? 16.0 : 16.0 * static_cast<double>(m - 1 - better) / static_cast<double>(m - 1);
      ranks[alg] = r;
      per_alg[alg].push_back(r);
    }
  }
  for (const auto& [alg, values] : per_alg) table.average[alg] = mean(values);
  return table;
}

std::vector<FamilyRow> family_rollup(const std::vector<ExperimentTriple>& triples, const FamilyRegistry& registry,
                                     bool starred) {
  const auto rows = usable(triples);
  const auto ranks = rank_mcc(triples);
  std::vector<FamilyRow> out;
  for (const auto& family : registry.families()) {
    const auto members = registry.members(family, starred);
    FamilyRow row;
    row.family = family;
    row.starred = starred;
    std::vector<double> mccs;
    std::vector<double> rks;
    for (const auto& t : rows) {
      if (std::find(members.begin(), members.end(), t.algorithm) == members.end()) continue;
      mccs.push_back(t.mcc());
      rks.push_back(ranks.ranks.at(t.loader).at(t.algorithm));
    }
    if (mccs.empty()) continue;
    for (const auto& m : members) {
      if (std::any_of(rows.begin(), rows.end(), [&](const auto& t) { return t.algorithm == m; })) {
        row.members.push_back(m);
      }
    }
    row.rows = mccs.size();
    row.avg_mcc = mean(mccs);
    row.avg_rank = mean(rks);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<DatasetRow> dataset_rollup(const std::vector<ExperimentTriple>& triples) {
  const auto rows = usable(triples);
  std::map<std::string, std::vector<std::size_t>> by_dataset;
  for (std::size_t i = 0; i < rows.size(); ++i) by_dataset[rows[i].dataset].push_back(i);
  std::vector<DatasetRow> out;
  for (const auto& [dataset, idx] : by_dataset) {
    DatasetRow d;
    d.dataset = dataset;
    d.loaders = distinct_loaders(rows, idx);
    d.rows = idx.size();
    d.precision = stat_of(collect(rows, idx, [](const auto& t) { return t.metrics.precision; }));
    d.recall = stat_of(collect(rows, idx, [](const auto& t) { return t.metrics.recall; }));
    d.f1 = stat_of(collect(rows, idx, [](const auto& t) { return t.metrics.f1; }));
    d.accuracy = stat_of(collect(rows, idx, [](const auto& t) { return t.metrics.accuracy; }));
    d.mcc = stat_of(collect(rows, idx, [](const auto& t) { return t.mcc(); }));
    std::vector<double> aucs;
    for (auto i : idx) {
      if (!std::isnan(rows[i].metrics.auc)) aucs.push_back(rows[i].metrics.auc);
    }
    d.auc = aucs.empty() ? MetricStat{std::nan(""), std::nan("")} : stat_of(aucs);
    d.avg_best_mcc = avg_best(rows, idx);
    out.push_back(std::move(d));
  }
  return out;
}

CategoryRollup category_rollup(const std::vector<ExperimentTriple>& triples, const AttackTaxonomy& taxonomy) {
  const auto rows = usable(triples);
  CategoryRollup result;
  std::map<std::string, std::vector<std::size_t>> by_cat;
  std::map<std::string, std::vector<std::size_t>> by_attack;
  std::set<std::string> warned;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& t = rows[i];
    if (taxonomy.contains(t.dataset, t.attack)) {
      by_cat[taxonomy.lookup(t.dataset, t.attack)].push_back(i);
      by_attack[taxonomy.subgroup(t.dataset, t.attack)].push_back(i);
    } else {
      by_cat[kUnmappedCategory].push_back(i);
      by_attack[kUnmappedCategory].push_back(i);
      if (warned.insert(t.loader).second) {
        result.warnings.push_back("loader '" + t.loader + "': attack '" + t.attack + "' of dataset '" + t.dataset +
                                  "' has no category; counted as unmapped");
      }
    }
  }
  const auto make = [&](const std::string& name, const std::vector<std::size_t>& idx) {
    CategoryRow c;
    c.name = name;
    c.loaders = distinct_loaders(rows, idx);
    c.rows = idx.size();
    c.mcc = stat_of(collect(rows, idx, [](const auto& t) { return t.mcc(); }));
    c.f1 = stat_of(collect(rows, idx, [](const auto& t) { return t.metrics.f1; }));
    c.accuracy = stat_of(collect(rows, idx, [](const auto& t) { return t.metrics.accuracy; }));
    c.avg_best_mcc = avg_best(rows, idx);
    return c;
  };
  for (const auto& cat : taxonomy.categories()) {
    const auto it = by_cat.find(cat.name);
    if (it != by_cat.end()) result.categories.push_back(make(cat.name, it->second));
  }
  for (const auto& [name, idx] : by_cat) {
    const bool listed = std::any_of(result.categories.begin(), result.categories.end(),
                                    [&](const auto& c) { return c.name == name; });
    if (!listed && name != kUnmappedCategory) result.categories.push_back(make(name, idx));
  }
  if (by_cat.count(kUnmappedCategory)) result.categories.push_back(make(kUnmappedCategory, by_cat[kUnmappedCategory]));
  for (const auto& [name, idx] : by_attack) {
    if (name != kUnmappedCategory) result.attacks.push_back(make(name, idx));
  }
  if (by_attack.count(kUnmappedCategory)) {
    result.attacks.push_back(make(kUnmappedCategory, by_attack[kUnmappedCategory]));
  }
  return result;
}

std::vector<UnknownsRow> unknowns_comparison(const std::vector<ExperimentTriple>& single_attack,
                                             const std::vector<ExperimentTriple>& unknowns) {
  const auto single = usable(single_attack);
  const auto unk = usable(unknowns);
  std::map<std::string, std::vector<std::size_t>> s_by;
  std::map<std::string, std::vector<std::size_t>> u_by;
  for (std::size_t i = 0; i < single.size(); ++i) s_by[single[i].dataset].push_back(i);
  for (std::size_t i = 0; i < unk.size(); ++i) u_by[unk[i].dataset].push_back(i);
  std::set<std::string> datasets;
  for (const auto& [d, _] : s_by) datasets.insert(d);
  for (const auto& [d, _] : u_by) datasets.insert(d);

  const auto block = [](const std::vector<ExperimentTriple>& rows, const std::vector<std::size_t>& idx) {
    ModeBlock b;
    b.rows = idx.size();
    b.avg_f1 = mean(collect(rows, idx, [](const auto& t) { return t.metrics.f1; }));
    b.avg_acc = mean(collect(rows, idx, [](const auto& t) { return t.metrics.accuracy; }));
    b.avg_mcc = mean(collect(rows, idx, [](const auto& t) { return t.mcc(); }));
    return b;
  };

  std::vector<UnknownsRow> out;
  for (const auto& d : datasets) {
    UnknownsRow r;
    r.dataset = d;
    if (s_by.count(d)) r.single_attack = block(single, s_by[d]);
    if (u_by.count(d)) {
      const auto& idx = u_by[d];
      r.unknowns = block(unk, idx);
      double best = -std::numeric_limits<double>::infinity();
      for (auto i : idx) best = std::max(best, unk[i].mcc());
      std::vector<std::string> names;
      std::vector<std::string> params;
      for (auto i : idx) {
        if (unk[i].mcc() != best) continue;
        if (names.empty()) {
          r.best_f1 = unk[i].metrics.f1;
          r.best_acc = unk[i].metrics.accuracy;
        }
        names.push_back(unk[i].algorithm);
        params.push_back(unk[i].params);
      }
      r.best_mcc = best;
      for (std::size_t k = 0; k < names.size(); ++k) {
        r.best_algorithm += (k ? ", " : "") + names[k];
        r.best_params += (k ? " | " : "") + params[k];
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------

ReportFiles emit_reports(const std::vector<ExperimentTriple>& triples, const AttackTaxonomy& taxonomy,
                         const FamilyRegistry& registry, const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir + ": " + ec.message());
  const fs::path dir(out_dir);
  ReportFiles files;

  std::vector<ExperimentTriple> single;
  std::vector<ExperimentTriple> unknowns;
  for (const auto& t : triples) (t.mode == LoaderMode::Unknowns ? unknowns : single).push_back(t);

  const auto summary = algo_summary(single);
  const auto ranks = rank_mcc(single);
  {
    std::vector<csv::Record> recs = {
        {"algorithm", "loaders", "avg_mcc", "std_mcc", "avg_f1", "avg_acc", "best_mcc_count", "avg_rank_mcc"}};
    for (const auto& s : summary) {
      recs.push_back({s.algorithm, std::to_string(s.loaders), fmt(s.avg_mcc), fmt(s.std_mcc), fmt(s.avg_f1),
                      fmt(s.avg_acc), std::to_string(s.best_count), fmt(ranks.average.at(s.algorithm))});
    }
    write_file(dir / "algorithms.csv", csv_text(recs), files);
  }
  {
    std::vector<csv::Record> recs = {{"loader", "algorithm", "rank_mcc"}};
    for (const auto& [loader, per] : ranks.ranks) {
      std::vector<std::string> algs;
      for (const auto& [a, _] : per) algs.push_back(a);
      std::sort(algs.begin(), algs.end(), algorithm_less);
      for (const auto& a : algs) recs.push_back({loader, a, fmt(per.at(a))});
    }
    write_file(dir / "ranks.csv", csv_text(recs), files);
  }
  std::vector<FamilyRow> families;
  for (bool starred : {false, true}) {
    for (auto& f : family_rollup(single, registry, starred)) families.push_back(std::move(f));
  }
  {
    std::vector<csv::Record> recs = {{"family", "starred", "members", "rows", "avg_mcc", "avg_rank_mcc"}};
    for (const auto& f : families) {
      std::string members;
      for (const auto& m : f.members) members += (members.empty() ? "" : ";") + m;
      recs.push_back({f.family, f.starred ? "yes" : "no", members, std::to_string(f.rows), fmt(f.avg_mcc),
                      fmt(f.avg_rank)});
    }
    write_file(dir / "families.csv", csv_text(recs), files);
  }
  {
    std::vector<csv::Record> recs = {{"dataset", "loaders", "rows", "avg_p", "std_p", "avg_r", "std_r", "avg_f1",
                                      "std_f1", "avg_acc", "std_acc", "avg_mcc", "std_mcc", "avg_auc", "std_auc",
                                      "avg_best_mcc"}};
    for (const auto& d : dataset_rollup(single)) {
      recs.push_back({d.dataset, std::to_string(d.loaders), std::to_string(d.rows), fmt(d.precision.avg),
                      fmt(d.precision.std), fmt(d.recall.avg), fmt(d.recall.std), fmt(d.f1.avg), fmt(d.f1.std),
                      fmt(d.accuracy.avg), fmt(d.accuracy.std), fmt(d.mcc.avg), fmt(d.mcc.std), fmt(d.auc.avg),
                      fmt(d.auc.std), fmt(d.avg_best_mcc)});
    }
    write_file(dir / "datasets.csv", csv_text(recs), files);
  }
  const auto cats = category_rollup(single, taxonomy);
  files.warnings = cats.warnings;
  const auto cat_csv = [&](const std::vector<CategoryRow>& rows, const char* first) {
    std::vector<csv::Record> recs = {{first, "loaders", "rows", "avg_mcc", "std_mcc", "avg_f1", "std_f1", "avg_acc",
                                      "std_acc", "avg_best_mcc"}};
    for (const auto& c : rows) {
      recs.push_back({c.name, std::to_string(c.loaders), std::to_string(c.rows), fmt(c.mcc.avg), fmt(c.mcc.std),
                      fmt(c.f1.avg), fmt(c.f1.std), fmt(c.accuracy.avg), fmt(c.accuracy.std), fmt(c.avg_best_mcc)});
    }
    return csv_text(recs);
  };
  write_file(dir / "categories.csv", cat_csv(cats.categories, "category"), files);
  write_file(dir / "attacks.csv", cat_csv(cats.attacks, "attack"), files);
  {
    std::vector<csv::Record> recs = {{"dataset", "single_rows", "single_f1", "single_acc", "single_mcc",
                                      "unknowns_rows", "unknowns_f1", "unknowns_acc", "unknowns_mcc",
                                      "best_algorithm", "best_params", "best_f1", "best_acc", "best_mcc"}};
    for (const auto& u : unknowns_comparison(single, unknowns)) {
      csv::Record r = {u.dataset};
      for (const auto& b : {u.single_attack, u.unknowns}) {
        if (b) {
          for (auto v : {std::to_string(b->rows), fmt(b->avg_f1), fmt(b->avg_acc), fmt(b->avg_mcc)}) r.push_back(v);
        } else {
          r.insert(r.end(), 4, std::string());
        }
      }
      if (u.unknowns) {
        for (auto v : {u.best_algorithm, u.best_params, fmt(u.best_f1), fmt(u.best_acc), fmt(u.best_mcc)}) {
          r.push_back(v);
        }
      } else {
        r.insert(r.end(), 5, std::string());
      }
      recs.push_back(std::move(r));
    }
    write_file(dir / "unknowns.csv", csv_text(recs), files);
  }

  if (summary.empty()) return files;

  std::vector<svg::Bar> bars;
  auto sorted = summary;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.avg_mcc > b.avg_mcc; });
  for (const auto& s : sorted) bars.push_back({s.algorithm, s.avg_mcc, s.std_mcc, {}});
  write_file(dir / "algorithms.svg", svg::bar_chart(bars, {"Average MCC per algorithm", "MCC", -1.0, 1.0}), files);

  bars.clear();
  for (const auto& f : families) {
    bars.push_back({f.family + (f.starred ? "*" : ""), f.avg_mcc, 0.0, f.starred ? "with overlaps" : "exclusive"});
  }
  write_file(dir / "families.svg", svg::bar_chart(bars, {"Average MCC per family", "MCC", -1.0, 1.0}), files);

  const auto cat_chart = [&](const std::vector<CategoryRow>& rows, const std::string& title, const char* name) {
    std::vector<svg::Bar> b;
    for (const auto& c : rows) b.push_back({c.name, c.mcc.avg, c.mcc.std, {}});
    write_file(dir / name, svg::bar_chart(b, {title, "MCC", -1.0, 1.0}), files);
  };
  cat_chart(cats.categories, "Average MCC per attack category", "categories.svg");
  cat_chart(cats.attacks, "Average MCC per attack group", "attacks.svg");
  return files;
}

}  // namespace adbench
