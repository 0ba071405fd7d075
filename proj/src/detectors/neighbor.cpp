#include "adbench/detectors/neighbor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace adbench {

namespace {

void require_k_below(const PointSet& train, std::size_t k, const char* who) {
  if (train.empty()) throw FitError(std::string(who) + ": empty training set");
  if (k == 0 || k >= train.size()) {
    throw FitError(std::string(who) + ": k=" + std::to_string(k) + " must lie in [1, " +
                   std::to_string(train.size()) + ")");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

KnnScorer::KnnScorer(const PointSet& train, std::size_t k) : index_(train), k_(k) { require_k_below(train, k, "knn"); }

double KnnScorer::score(std::span<const double> x) const { return index_.query(x, k_).back().distance; }

// ---------------------------------------------------------------------------

OdinScorer::OdinScorer(const PointSet& train, std::size_t k) : index_(train), k_(k) {
  require_k_below(train, k, "odin");
  kdist_.resize(train.size());
  indegree_.assign(train.size(), 0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto nb = index_.query_stored(i, k_);
    kdist_[i] = nb.back().distance;
    for (const auto& e : nb) ++indegree_[e.id];
  }
}

std::size_t OdinScorer::indegree_of_query(std::span<const double> x) const {
  if (const auto self = index_.self_of(x)) return indegree_[*self];
  // Virtual insertion: stored point i would adopt x if x is strictly closer
  // than its current k-th neighbor.
  std::size_t count = 0;
  for (std::size_t i = 0; i < index_.size(); ++i) {
    if (distance(x, index_.points()[i]) < kdist_[i]) ++count;
  }
  return count;
}

double OdinScorer::score(std::span<const double> x) const {
  return 1.0 / (static_cast<double>(indegree_of_query(x)) + 1.0);
}

// ---------------------------------------------------------------------------

LofScorer::LofScorer(const PointSet& train, std::size_t k) : index_(train), k_(k) {
  require_k_below(train, k, "lof");
  const std::size_t n = train.size();
  std::vector<std::vector<Neighbor>> hoods(n);
  kdist_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    hoods[i] = index_.query_stored(i, k_);
    kdist_[i] = hoods[i].back().distance;
  }
  lrd_.resize(n);
  for (std::size_t i = 0; i < n; ++i) lrd_[i] = density_of(hoods[i]);
}

double LofScorer::density_of(const std::vector<Neighbor>& neighbors) const {
  double reach = 0.0;
  for (const auto& o : neighbors) reach += std::max(kdist_[o.id], o.distance);
  reach /= static_cast<double>(neighbors.size());
  return 1.0 / std::max(reach, kMinReachability);
}

double LofScorer::score(std::span<const double> x) const {
  const auto nb = index_.query(x, k_);
  const double own = density_of(nb);
  double sum = 0.0;
  for (const auto& o : nb) sum += lrd_[o.id];
  return sum / static_cast<double>(nb.size()) / own;
}

// ---------------------------------------------------------------------------

double average_chaining_distance(const PointSet& points, const std::vector<Neighbor>& neighbors) {
  const std::size_t k = neighbors.size();
  if (k == 0) return 0.0;
  // Prim's construction reproduces the set-based nearest path: each step adds
  // the outside point closest to the current set.
  std::vector<double> key(k);
  std::vector<bool> done(k, false);
  for (std::size_t t = 0; t < k; ++t) key[t] = neighbors[t].distance;
  const double kd = static_cast<double>(k);
  double acd = 0.0;
  for (std::size_t step = 1; step <= k; ++step) {
    std::size_t pick = k;
    for (std::size_t t = 0; t < k; ++t) {
      if (!done[t] && (pick == k || key[t] < key[pick])) pick = t;
    }
    done[pick] = true;
    acd += 2.0 * (kd + 1.0 - static_cast<double>(step)) / (kd * (kd + 1.0)) * key[pick];
    const auto p = points[neighbors[pick].id];
    for (std::size_t t = 0; t < k; ++t) {
      if (!done[t]) key[t] = std::min(key[t], distance(p, points[neighbors[t].id]));
    }
  }
  return acd;
}

CofScorer::CofScorer(const PointSet& train, std::size_t k) : index_(train), k_(k) {
  require_k_below(train, k, "cof");
  acd_.resize(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    acd_[i] = average_chaining_distance(train, index_.query_stored(i, k_));
  }
}

double CofScorer::score(std::span<const double> x) const {
  const auto nb = index_.query(x, k_);
  const double own = average_chaining_distance(index_.points(), nb);
  double sum = 0.0;
  for (const auto& o : nb) sum += acd_[o.id];
  const double avg = sum / static_cast<double>(nb.size());
  return own / std::max(avg, kMinReachability);
}

// ---------------------------------------------------------------------------

SdoScorer::SdoScorer(const PointSet& train, const Options& options, std::uint64_t seed)
    : options_(options), active_(train.dim()) {
  const std::size_t n = train.size();
  const std::size_t m = options_.observers;
  if (m == 0 || m > n) {
    throw FitError("sdo: " + std::to_string(m) + " observers requested from " + std::to_string(n) + " points");
  }
  if (!(options_.idle_fraction >= 0.0 && options_.idle_fraction < 1.0)) throw FitError("sdo: q must lie in [0, 1)");
  const auto idle = static_cast<std::size_t>(std::floor(options_.idle_fraction * static_cast<double>(m)));
  if (options_.x == 0 || options_.x > m - idle) {
    throw FitError("sdo: x=" + std::to_string(options_.x) + " exceeds the " + std::to_string(m - idle) +
                   " active observers");
  }

  Rng rng(seed);
  sampled_ = sample_without_replacement(n, m, rng);
  const PointSet observers = train.subset(sampled_);
  const NeighborIndex index(observers);
  votes_.assign(m, 0);
  const std::size_t voted = std::min(options_.x, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& o : index.query(train[i], voted, false)) ++votes_[o.id];
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return votes_[a] < votes_[b]; });
  std::vector<bool> keep(m, true);
  for (std::size_t t = 0; t < idle; ++t) keep[order[t]] = false;
  for (std::size_t o = 0; o < m; ++o) {
    if (keep[o]) active_.push_back(observers[o]);
  }
}

double SdoScorer::score(std::span<const double> x) const {
  std::vector<double> d(active_.size());
  for (std::size_t o = 0; o < active_.size(); ++o) d[o] = distance(x, active_[o]);
  const auto xs = static_cast<std::ptrdiff_t>(options_.x);
  std::nth_element(d.begin(), d.begin() + xs - 1, d.end());
  d.resize(options_.x);
  return options_.aggregate == ObserverAggregate::Median ? median(std::move(d)) : mean(d);
}

// ---------------------------------------------------------------------------

AbodScorer::AbodScorer(const PointSet& train, std::size_t k) : index_(train), k_(k) {
  if (train.size() < 3) throw FitError("abod: need at least three training points");
  if (k != 0 && (k < 2 || k >= train.size())) {
    throw FitError("fastabod: k=" + std::to_string(k) + " must lie in [2, " + std::to_string(train.size()) + ")");
  }
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < train.size() && distinct < 3; ++i) {
    bool fresh = true;
    for (std::size_t j = 0; j < i && fresh; ++j) fresh = squared_distance(train[i], train[j]) != 0.0;
    if (fresh) ++distinct;
  }
  if (distinct < 3) warn("fewer than three distinct training points; stored points may score 0");
}

std::vector<std::size_t> AbodScorer::candidates(std::span<const double> x) const {
  std::vector<std::size_t> ids;
  if (k_ == 0) {
    ids.resize(index_.size());
    std::iota(ids.begin(), ids.end(), std::size_t{0});
  } else {
    for (const auto& nb : index_.query(x, k_)) ids.push_back(nb.id);
  }
  return ids;
}

double AbodScorer::abof(std::span<const double> x) const {
  const auto ids = candidates(x);
  const std::size_t dim = index_.points().dim();
  std::vector<double> diff;
  std::vector<double> norm2;
  diff.reserve(ids.size() * dim);
  for (std::size_t id : ids) {
    const auto p = index_.points()[id];
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) s += (p[j] - x[j]) * (p[j] - x[j]);
    if (s == 0.0) continue;  // coincident with x
    for (std::size_t j = 0; j < dim; ++j) diff.push_back(p[j] - x[j]);
    norm2.push_back(s);
  }
  // Weighted variance, accumulated incrementally (West 1979).
  double sum_w = 0.0;
  double avg = 0.0;
  double m2 = 0.0;
  const std::size_t m = norm2.size();
  for (std::size_t a = 0; a < m; ++a) {
    const double* va = diff.data() + a * dim;
    for (std::size_t b = a + 1; b < m; ++b) {
      const double* vb = diff.data() + b * dim;
      double dot = 0.0;
      for (std::size_t j = 0; j < dim; ++j) dot += va[j] * vb[j];
      const double nn = norm2[a] * norm2[b];
      const double value = dot / nn;
      const double w = 1.0 / std::sqrt(nn);
      const double next_w = sum_w + w;
      const double delta = value - avg;
      const double r = delta * w / next_w;
      avg += r;
      m2 += sum_w * delta * r;
      sum_w = next_w;
    }
  }
  if (sum_w == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::max(0.0, m2 / sum_w);
}

std::size_t AbodScorer::pair_count(std::span<const double> x) const {
  std::size_t m = 0;
  for (std::size_t id : candidates(x)) m += squared_distance(index_.points()[id], x) != 0.0 ? 1 : 0;
  return m < 2 ? 0 : m * (m - 1) / 2;
}

double AbodScorer::score(std::span<const double> x) const {
  const double v = abof(x);
  return std::isnan(v) ? 0.0 : -v;
}

// ---------------------------------------------------------------------------

std::unique_ptr<KnnScorer> train_knn(const PointSet& train, std::size_t k) {
  return std::make_unique<KnnScorer>(train, k);
}
std::unique_ptr<OdinScorer> train_odin(const PointSet& train, std::size_t k) {
  return std::make_unique<OdinScorer>(train, k);
}
std::unique_ptr<LofScorer> train_lof(const PointSet& train, std::size_t k) {
  return std::make_unique<LofScorer>(train, k);
}
std::unique_ptr<CofScorer> train_cof(const PointSet& train, std::size_t k) {
  return std::make_unique<CofScorer>(train, k);
}
std::unique_ptr<SdoScorer> train_sdo(const PointSet& train, const SdoScorer::Options& options, std::uint64_t seed) {
  return std::make_unique<SdoScorer>(train, options, seed);
}
std::unique_ptr<AbodScorer> train_abod(const PointSet& train) { return std::make_unique<AbodScorer>(train, 0); }
std::unique_ptr<AbodScorer> train_fastabod(const PointSet& train, std::size_t k) {
  return std::make_unique<AbodScorer>(train, k);
}

}  // namespace adbench
