#include "adbench/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adbench/metrics.hpp"

namespace adbench {

namespace {

struct AlgorithmInfo {
  Algorithm id;
  std::string_view name;
};

constexpr std::array<AlgorithmInfo, kAlgorithmCount> kAlgorithms = {{
    {Algorithm::KMeans, "KMEANS"},
    {Algorithm::GMeans, "GMEANS"},
    {Algorithm::Dbscan, "DBSCAN"},
    {Algorithm::Ldcof, "LDCOF"},
    {Algorithm::Hbos, "HBOS"},
    {Algorithm::Sos, "SOS"},
    {Algorithm::Isos, "ISOS"},
    {Algorithm::OneClassSvm, "SVM"},
    {Algorithm::IsolationForest, "IFOREST"},
    {Algorithm::Som, "SOM"},
    {Algorithm::Abod, "ABOD"},
    {Algorithm::FastAbod, "FASTABOD"},
    {Algorithm::Knn, "KNN"},
    {Algorithm::Odin, "ODIN"},
    {Algorithm::Lof, "LOF"},
    {Algorithm::Cof, "COF"},
    {Algorithm::Sdo, "SDO"},
}};

std::vector<ParamValue> ints(std::initializer_list<std::int64_t> values) {
  return {values.begin(), values.end()};
}

std::vector<ParamValue> reals(std::initializer_list<double> values) {
  return {values.begin(), values.end()};
}

}  // namespace

const std::array<Algorithm, kAlgorithmCount>& all_algorithms() {
  static const std::array<Algorithm, kAlgorithmCount> ids = [] {
    std::array<Algorithm, kAlgorithmCount> out{};
    for (std::size_t i = 0; i < kAlgorithmCount; ++i) out[i] = kAlgorithms[i].id;
    return out;
  }();
  return ids;
}

std::string_view algorithm_name(Algorithm algorithm) {
  for (const auto& info : kAlgorithms) {
    if (info.id == algorithm) return info.name;
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c != '_' && c != '-' && c != ' ') key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  if (key == "ISFOREST" || key == "ISOLATIONFOREST" || key == "IF") return Algorithm::IsolationForest;
  if (key == "ONECLASSSVM" || key == "OCSVM") return Algorithm::OneClassSvm;
  for (const auto& info : kAlgorithms) {
    if (info.name == key) return info.id;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::string format_param(const ParamValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else {
          return std::to_string(v);
        }
      },
      value);
}

void ParamSet::set(const std::string& name, ParamValue value) {
  for (auto& [k, v] : items_) {
    if (k == name) {
      v = std::move(value);
      return;
    }
  }
  items_.emplace_back(name, std::move(value));
}

bool ParamSet::has(std::string_view name) const {
  return std::any_of(items_.begin(), items_.end(), [&](const auto& kv) { return kv.first == name; });
}

const ParamValue& ParamSet::at(std::string_view name) const {
  for (const auto& [k, v] : items_) {
    if (k == name) return v;
  }
  throw ConfigError("missing parameter '" + std::string(name) + "'");
}

std::int64_t ParamSet::get_int(std::string_view name) const {
  const auto& v = at(name);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (const auto* d = std::get_if<double>(&v); d && std::floor(*d) == *d) return static_cast<std::int64_t>(*d);
  throw ConfigError("parameter '" + std::string(name) + "' must be an integer");
}

double ParamSet::get_double(std::string_view name) const {
  const auto& v = at(name);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw ConfigError("parameter '" + std::string(name) + "' must be numeric");
}

std::string ParamSet::get_string(std::string_view name) const { return format_param(at(name)); }

std::int64_t ParamSet::get_int_or(std::string_view name, std::int64_t fallback) const {
  return has(name) ? get_int(name) : fallback;
}
double ParamSet::get_double_or(std::string_view name, double fallback) const {
  return has(name) ? get_double(name) : fallback;
}
std::string ParamSet::get_string_or(std::string_view name, std::string fallback) const {
  return has(name) ? get_string(name) : fallback;
}

std::string ParamSet::to_string() const {
  if (items_.empty()) return "-";
  std::string out;
  for (const auto& [k, v] : items_) {
    if (!out.empty()) out += ' ';
    out += k + "=" + format_param(v);
  }
  return out;
}

void ParamGrid::add_axis(std::string name, std::vector<ParamValue> values) {
  if (values.empty()) throw std::invalid_argument("ParamGrid axis '" + name + "' has no values");
  axes_.emplace_back(std::move(name), std::move(values));
}

std::vector<ParamSet> ParamGrid::assignments() const {
  std::vector<ParamSet> out;
  if (axes_.empty()) {
    out.emplace_back();
    return out;
  }
  std::vector<std::size_t> idx(axes_.size(), 0);
  while (true) {
    ParamSet p;
    for (std::size_t a = 0; a < axes_.size(); ++a) p.set(axes_[a].first, axes_[a].second[idx[a]]);
    out.push_back(std::move(p));
    std::size_t a = axes_.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes_[a].second.size()) break;
      idx[a] = 0;
      if (a == 0) return out;
    }
  }
}

ParamGrid default_param_grid(Algorithm algorithm) {
  ParamGrid g;
  const std::vector<ParamValue> k_grid(kNeighborGrid.begin(), kNeighborGrid.end());
  switch (algorithm) {
    case Algorithm::Knn:
    case Algorithm::Odin:
    case Algorithm::Lof:
    case Algorithm::Cof:
      g.add_axis("k", k_grid);
      break;
    case Algorithm::FastAbod:
      // Angle variance needs at least two neighbors.
      g.add_axis("k", ints({2, 3, 5, 10, 20, 50, 100}));
      break;
    case Algorithm::KMeans:
    case Algorithm::Ldcof:
      g.add_axis("k", ints({2, 3, 5, 10, 20, 50}));
      break;
    case Algorithm::Hbos:
      g.add_axis("bins", {std::int64_t{5}, std::int64_t{10}, std::int64_t{20}, std::string("sqrt")});
      break;
    case Algorithm::IsolationForest:
      g.add_axis("trees", ints({5, 10, 50, 100}));
      g.add_axis("samples", ints({20, 50, 100, 256}));
      break;
    case Algorithm::Dbscan:
      g.add_axis("min_pts", ints({2, 5, 10}));
      g.add_axis("eps", {std::string("p50"), std::string("p75"), std::string("p90")});
      break;
    case Algorithm::Sos:
      g.add_axis("h", ints({10, 20, 50}));
      break;
    case Algorithm::Isos:
      g.add_axis("k", ints({5, 10, 20}));
      g.add_axis("phi", reals({0.1, 0.3}));
      break;
    case Algorithm::Sdo:
      g.add_axis("observers", ints({100, 200}));
      g.add_axis("x", ints({5, 10}));
      g.add_axis("q", reals({0.1, 0.3}));
      break;
    case Algorithm::Som:
      g.add_axis("min_a", reals({0.1}));
      g.add_axis("base_a", reals({0.6}));
      g.add_axis("decay", reals({0.9}));
      g.add_axis("side", ints({5, 10}));
      break;
    case Algorithm::OneClassSvm:
      g.add_axis("kernel", {std::string("LINEAR"), std::string("RBF")});
      g.add_axis("nu", reals({0.01, 0.02, 0.05, 0.1, 0.2}));
      break;
    case Algorithm::Abod:
    case Algorithm::GMeans:
      break;
  }
  return g;
}

// ---------------------------------------------------------------------------

std::vector<double> Scorer::score_all(const PointSet& points) const {
  std::vector<double> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out.push_back(score(points[i]));
  return out;
}

std::optional<std::size_t> NeighborIndex::self_of(std::span<const double> x) const {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (squared_distance(x, points_[i]) == 0.0) return i;
  }
  return std::nullopt;
}

std::vector<Neighbor> NeighborIndex::select(std::span<const double> x, std::size_t k,
                                            std::optional<std::size_t> skip) const {
  const std::size_t available = points_.size() - (skip ? 1 : 0);
  if (k > available) {
    throw FitError("neighbor query for k=" + std::to_string(k) + " but only " + std::to_string(available) +
                   " candidate points");
  }
  std::vector<Neighbor> all;
  all.reserve(available);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (skip && *skip == i) continue;
    all.push_back({i, squared_distance(x, points_[i])});
  }
  auto less = [](const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
  };
  if (k < all.size()) {
    std::nth_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), less);
    all.resize(k);
  }
  std::sort(all.begin(), all.end(), less);
  for (auto& n : all) n.distance = std::sqrt(n.distance);
  return all;
}

std::vector<Neighbor> NeighborIndex::query(std::span<const double> x, std::size_t k, bool exclude_self) const {
  return select(x, k, exclude_self ? self_of(x) : std::nullopt);
}

std::vector<Neighbor> NeighborIndex::query_stored(std::size_t i, std::size_t k) const {
  return select(points_[i], k, i);
}

std::vector<Neighbor> NeighborIndex::ranked(std::span<const double> x, std::optional<std::size_t> skip) const {
  return select(x, points_.size() - (skip ? 1 : 0), skip);
}

std::vector<Neighbor> knn_query(const NeighborIndex& index, std::span<const double> x, std::size_t k) {
  if (k == 0) throw std::invalid_argument("knn_query: k must be positive");
  return index.query(x, k, true);
}

// ---------------------------------------------------------------------------

std::string DecisionFunction::to_string() const {
  return std::string(log_scale ? "LOG-" : "") + (kind == DecisionKind::Iqr ? "IQR(" : "CONF(") +
         format_double(parameter) + ")";
}

const std::vector<DecisionCandidate>& decision_candidates() {
  static const std::vector<DecisionCandidate> c = [] {
    std::vector<DecisionCandidate> out;
    for (bool log_scale : {false, true}) {
      for (double w : {0.5, 1.0, 1.5, 2.0, 3.0}) out.push_back({DecisionKind::Iqr, w, log_scale});
      for (double z : {1.0, 2.0, 3.0}) out.push_back({DecisionKind::Conf, z, log_scale});
    }
    return out;
  }();
  return c;
}

double to_log_scale(double score) { return std::copysign(std::log1p(std::abs(score)), score); }

double from_log_scale(double value) { return std::copysign(std::expm1(std::abs(value)), value); }

ScoreStatistics score_statistics(std::span<const double> scores) {
  std::vector<double> v(scores.begin(), scores.end());
  ScoreStatistics s;
  s.q1 = quantile(v, 0.25);
  s.q3 = quantile(v, 0.75);
  s.mean = mean(scores);
  s.std = stddev(scores);
  return s;
}

DecisionStatistics decision_statistics(std::span<const double> scores) {
  std::vector<double> logs;
  logs.reserve(scores.size());
  for (double s : scores) logs.push_back(to_log_scale(s));
  return {score_statistics(scores), score_statistics(logs)};
}

DecisionFunction make_decision_function(DecisionCandidate candidate, const DecisionStatistics& stats) {
  const ScoreStatistics& s = candidate.log_scale ? stats.log : stats.linear;
  DecisionFunction df;
  df.kind = candidate.kind;
  df.parameter = candidate.parameter;
  df.log_scale = candidate.log_scale;
  df.q1 = s.q1;
  df.q3 = s.q3;
  df.mean = s.mean;
  df.std = s.std;
  const double t = candidate.kind == DecisionKind::Iqr ? s.q3 + candidate.parameter * (s.q3 - s.q1)
                                                       : s.mean + candidate.parameter * s.std;
  df.threshold = candidate.log_scale ? from_log_scale(t) : t;
  return df;
}

DecisionFunction learn_decision_function(std::span<const double> train_scores, std::span<const double> tuning_scores,
                                         const std::vector<bool>& tuning_labels) {
  if (train_scores.size() < kMinDecisionScores) {
    throw FitError("decision function needs at least " + std::to_string(kMinDecisionScores) + " train scores, got " +
                   std::to_string(train_scores.size()));
  }
  if (tuning_scores.size() != tuning_labels.size()) throw std::invalid_argument("tuning scores/labels length mismatch");
  const auto positives = std::count(tuning_labels.begin(), tuning_labels.end(), true);
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(tuning_labels.size())) {
    throw FitError("decision function tuning set must contain both normal and anomalous points");
  }
  const DecisionStatistics stats = decision_statistics(train_scores);
  DecisionFunction best;
  double best_mcc = -2.0;
  for (const auto& candidate : decision_candidates()) {
    DecisionFunction df = make_decision_function(candidate, stats);
    const double value = mcc(confusion(classify_all(df, tuning_scores), tuning_labels));
    if (value > best_mcc) {
      best_mcc = value;
      best = df;
    }
  }
  return best;
}

std::vector<bool> classify_all(const DecisionFunction& df, std::span<const double> scores) {
  std::vector<bool> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(classify(df, s));
  return out;
}

}  // namespace adbench
