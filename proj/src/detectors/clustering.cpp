#include "adbench/detectors/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace adbench {

namespace {

PointSet seeded_initial_centroids(const PointSet& train, std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  const auto order = sample_without_replacement(train.size(), train.size(), rng);
  std::vector<std::size_t> chosen;
  for (std::size_t idx : order) {
    if (chosen.size() == k) break;
    const bool fresh = std::none_of(chosen.begin(), chosen.end(),
                                    [&](std::size_t c) { return squared_distance(train[c], train[idx]) == 0.0; });
    if (fresh) chosen.push_back(idx);
  }
  // Fewer distinct values than k: the extra centroids duplicate existing ones
  // and simply stay empty.
  for (std::size_t idx : order) {
    if (chosen.size() == k) break;
    if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end()) chosen.push_back(idx);
  }
  return train.subset(chosen);
}

std::vector<double> column_mean(const PointSet& points, std::span<const std::size_t> members) {
  std::vector<double> m(points.dim(), 0.0);
  for (std::size_t i : members) {
    const auto row = points[i];
    for (std::size_t j = 0; j < m.size(); ++j) m[j] += row[j];
  }
  for (double& v : m) v /= static_cast<double>(members.size());
  return m;
}

double sse_of(const PointSet& train, const PointSet& centroids, std::vector<std::size_t>& assignment) {
  double sse = 0.0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto [c, d] = nearest_centroid(centroids, train[i]);
    assignment[i] = c;
    sse += d * d;
  }
  return sse;
}

}  // namespace

std::pair<std::size_t, double> nearest_centroid(const PointSet& centroids, std::span<const double> x) {
  std::size_t best = 0;
  double best_d2 = squared_distance(centroids[0], x);
  for (std::size_t c = 1; c < centroids.size(); ++c) {
    const double d2 = squared_distance(centroids[c], x);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = c;
    }
  }
  return {best, std::sqrt(best_d2)};
}

LloydResult lloyd(const PointSet& train, PointSet initial, std::size_t max_iterations) {
  if (train.empty()) throw FitError("k-means: empty training set");
  if (initial.empty()) throw FitError("k-means: no initial centroids");
  LloydResult r;
  r.centroids = std::move(initial);
  r.assignment.assign(train.size(), 0);
  const std::size_t k = r.centroids.size();
  const std::size_t dim = train.dim();

  for (std::size_t it = 0; it < max_iterations; ++it) {
    r.sse_history.push_back(sse_of(train, r.centroids, r.assignment));
    PointSet next(k, dim);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < train.size(); ++i) {
      auto dst = next[r.assignment[i]];
      const auto row = train[i];
      for (std::size_t j = 0; j < dim; ++j) dst[j] += row[j];
      ++counts[r.assignment[i]];
    }
    double movement = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      auto dst = next[c];
      if (counts[c] == 0) {
        std::copy(r.centroids[c].begin(), r.centroids[c].end(), dst.begin());
      } else {
        for (double& v : dst) v /= static_cast<double>(counts[c]);
      }
      movement = std::max(movement, distance(dst, r.centroids[c]));
    }
    r.centroids = std::move(next);
    r.iterations = it + 1;
    if (movement < kLloydTolerance) break;
  }
  r.sse_history.push_back(sse_of(train, r.centroids, r.assignment));
  return r;
}

CentroidScorer::CentroidScorer(PointSet centroids, const PointSet& train) : centroids_(std::move(centroids)) {
  counts_.assign(centroids_.size(), 0);
  mean_distance_.assign(centroids_.size(), 0.0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto [c, d] = nearest_centroid(centroids_, train[i]);
    ++counts_[c];
    mean_distance_[c] += d;
  }
  for (std::size_t c = 0; c < centroids_.size(); ++c) {
    if (counts_[c] > 0) mean_distance_[c] /= static_cast<double>(counts_[c]);
  }
}

double CentroidScorer::score(std::span<const double> x) const { return nearest_centroid(centroids_, x).second; }

std::unique_ptr<CentroidScorer> train_kmeans(const PointSet& train, std::size_t k, std::uint64_t seed) {
  if (train.empty()) throw FitError("k-means: empty training set");
  if (k == 0 || k > train.size()) {
    throw FitError("k-means: k=" + std::to_string(k) + " invalid for " + std::to_string(train.size()) + " points");
  }
  auto result = lloyd(train, seeded_initial_centroids(train, k, seed));
  auto scorer = std::make_unique<CentroidScorer>(std::move(result.centroids), train);
  scorer->set_sse_history(std::move(result.sse_history));
  return scorer;
}

// ---------------------------------------------------------------------------
// G-Means

double anderson_darling(std::vector<double> z) {
  const std::size_t n = z.size();
  if (n == 0) return 0.0;
  std::sort(z.begin(), z.end());
  auto cdf = [](double v) {
    return std::clamp(0.5 * std::erfc(-v / std::numbers::sqrt2), 1e-15, 1.0 - 1e-15);
  };
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 2.0 * static_cast<double>(i + 1) - 1.0;
    s += w * (std::log(cdf(z[i])) + std::log(1.0 - cdf(z[n - 1 - i])));
  }
  const double nd = static_cast<double>(n);
  const double a2 = -nd - s / nd;
  return a2 * (1.0 + 4.0 / nd - 25.0 / (nd * nd));
}

namespace {

struct SplitOutcome {
  bool accepted = false;
  PointSet children;
};

SplitOutcome try_split(const PointSet& train, const std::vector<std::size_t>& members, std::span<const double> center,
                       const GMeansOptions& options, Rng& rng) {
  SplitOutcome out;
  const std::size_t dim = train.dim();
  const PointSet local = train.subset(members);
  const double n = static_cast<double>(local.size());

  // Principal direction by power iteration on the cluster covariance.
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(dim);
  for (double& e : v) e = gauss(rng);
  auto cov_times = [&](const std::vector<double>& u) {
    std::vector<double> r(dim, 0.0);
    for (std::size_t i = 0; i < local.size(); ++i) {
      const auto row = local[i];
      double dot = 0.0;
      for (std::size_t j = 0; j < dim; ++j) dot += (row[j] - center[j]) * u[j];
      for (std::size_t j = 0; j < dim; ++j) r[j] += (row[j] - center[j]) * dot;
    }
    for (double& e : r) e /= n;
    return r;
  };
  auto normalize = [](std::vector<double>& u) {
    double len = 0.0;
    for (double e : u) len += e * e;
    len = std::sqrt(len);
    if (len == 0.0) return false;
    for (double& e : u) e /= len;
    return true;
  };
  if (!normalize(v)) return out;
  for (int it = 0; it < 100; ++it) {
    auto next = cov_times(v);
    if (!normalize(next)) return out;
    v = std::move(next);
  }
  const auto cv = cov_times(v);
  double lambda = 0.0;
  for (std::size_t j = 0; j < dim; ++j) lambda += v[j] * cv[j];
  if (!(lambda > 0.0)) return out;

  const double offset = std::sqrt(2.0 * lambda / std::numbers::pi);
  PointSet init(2, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    init[0][j] = center[j] + offset * v[j];
    init[1][j] = center[j] - offset * v[j];
  }
  auto two = lloyd(local, std::move(init));
  std::size_t left = 0;
  for (std::size_t a : two.assignment) left += a == 0 ? 1 : 0;
  if (left < options.min_cluster || local.size() - left < options.min_cluster) return out;

  std::vector<double> w(dim);
  double w2 = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    w[j] = two.centroids[0][j] - two.centroids[1][j];
    w2 += w[j] * w[j];
  }
  if (w2 == 0.0) return out;
  std::vector<double> proj(local.size());
  for (std::size_t i = 0; i < local.size(); ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < dim; ++j) dot += local[i][j] * w[j];
    proj[i] = dot / w2;
  }
  const double mu = mean(proj);
  double var = 0.0;
  for (double p : proj) var += (p - mu) * (p - mu);
  var /= n - 1.0;
  if (!(var > 0.0)) return out;
  const double sd = std::sqrt(var);
  for (double& p : proj) p = (p - mu) / sd;
  if (anderson_darling(std::move(proj)) <= options.critical_value) return out;

  out.accepted = true;
  out.children = std::move(two.centroids);
  return out;
}

}  // namespace

std::unique_ptr<CentroidScorer> train_gmeans(const PointSet& train, std::uint64_t seed, const GMeansOptions& options) {
  if (train.empty()) throw FitError("g-means: empty training set");
  Rng rng(seed);
  std::vector<std::size_t> all(train.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  PointSet centers(train.dim());
  centers.push_back(column_mean(train, all));

  LloydResult state = lloyd(train, centers);
  while (state.centroids.size() < options.max_k) {
    const std::size_t k = state.centroids.size();
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < train.size(); ++i) members[state.assignment[i]].push_back(i);

    PointSet next(train.dim());
    std::size_t total = k;
    bool split_any = false;
    for (std::size_t c = 0; c < k; ++c) {
      if (total < options.max_k && members[c].size() >= options.min_cluster) {
        auto outcome = try_split(train, members[c], state.centroids[c], options, rng);
        if (outcome.accepted) {
          next.push_back(outcome.children[0]);
          next.push_back(outcome.children[1]);
          ++total;
          split_any = true;
          continue;
        }
      }
      next.push_back(state.centroids[c]);
    }
    if (!split_any) break;
    state = lloyd(train, std::move(next));
  }
  auto scorer = std::make_unique<CentroidScorer>(std::move(state.centroids), train);
  scorer->set_sse_history(std::move(state.sse_history));
  return scorer;
}

// ---------------------------------------------------------------------------
// DBSCAN

DbscanScorer::DbscanScorer(const PointSet& train, double eps, std::size_t min_pts) : core_(train.dim()), eps_(eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw FitError("dbscan: eps must be positive, got " + format_double(eps));
  if (min_pts < 2) throw FitError("dbscan: min_pts must be at least 2");
  const double eps2 = eps * eps;
  for (std::size_t i = 0; i < train.size(); ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < train.size() && count < min_pts; ++j) {
      if (squared_distance(train[i], train[j]) <= eps2) ++count;
    }
    if (count >= min_pts) core_.push_back(train[i]);
  }
  if (core_.empty()) {
    throw FitError("dbscan: no core points for eps=" + format_double(eps) + " min_pts=" + std::to_string(min_pts));
  }
}

double DbscanScorer::score(std::span<const double> x) const {
  const double d = nearest_centroid(core_, x).second;
  return std::max(0.0, d / eps_ - 1.0);
}

std::unique_ptr<DbscanScorer> train_dbscan(const PointSet& train, double eps, std::size_t min_pts) {
  if (train.empty()) throw FitError("dbscan: empty training set");
  return std::make_unique<DbscanScorer>(train, eps, min_pts);
}

double resolve_eps(const ParamValue& value, const PointSet& train, std::uint64_t seed) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&value)) return *d;
  const std::string& text = std::get<std::string>(value);
  if (text.size() < 2 || (text[0] != 'p' && text[0] != 'P')) throw ConfigError("dbscan: bad eps value '" + text + "'");
  double pct = 0.0;
  try {
    pct = std::stod(text.substr(1));
  } catch (const std::exception&) {
    throw ConfigError("dbscan: bad eps value '" + text + "'");
  }
  if (pct < 0.0 || pct > 100.0) throw ConfigError("dbscan: eps percentile out of range: " + text);
  if (train.size() < 2) throw FitError("dbscan: need two points to derive eps");

  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, train.size() - 1);
  std::vector<double> sample;
  const std::size_t pairs = std::min<std::size_t>(1000, train.size() * (train.size() - 1) / 2);
  sample.reserve(pairs);
  while (sample.size() < pairs) {
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    if (a != b) sample.push_back(distance(train[a], train[b]));
  }
  double eps = quantile(sample, pct / 100.0);
  if (eps <= 0.0) {
    double smallest = 0.0;
    for (double d : sample) {
      if (d > 0.0 && (smallest == 0.0 || d < smallest)) smallest = d;
    }
    if (smallest == 0.0) throw FitError("dbscan: all sampled distances are zero");
    eps = smallest;
  }
  return eps;
}

// ---------------------------------------------------------------------------
// LDCOF

LdcofScorer::LdcofScorer(PointSet centroids, const PointSet& train, double large_mass)
    : centroids_(std::move(centroids)) {
  const CentroidScorer stats(centroids_, train);
  const auto& counts = stats.counts();
  const std::size_t k = centroids_.size();

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
  large_.assign(k, false);
  const double needed = large_mass * static_cast<double>(train.size());
  double held = 0.0;
  for (std::size_t c : order) {
    if (held >= needed) break;
    large_[c] = true;
    held += static_cast<double>(counts[c]);
  }

  double smallest_positive = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double m = stats.mean_distances()[c];
    if (m > 0.0 && (smallest_positive == 0.0 || m < smallest_positive)) smallest_positive = m;
  }
  divisor_.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const double m = stats.mean_distances()[c];
    divisor_[c] = m > 0.0 ? m : (smallest_positive > 0.0 ? smallest_positive : 1.0);
  }
}

double LdcofScorer::score(std::span<const double> x) const {
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_c = 0;
  for (std::size_t c = 0; c < centroids_.size(); ++c) {
    if (!large_[c]) continue;
    const double d2 = squared_distance(centroids_[c], x);
    if (d2 < best) {
      best = d2;
      best_c = c;
    }
  }
  return std::sqrt(best) / divisor_[best_c];
}

std::unique_ptr<LdcofScorer> train_ldcof(const PointSet& train, std::size_t k, std::uint64_t seed) {
  if (train.empty()) throw FitError("ldcof: empty training set");
  if (k < 2 || k > train.size()) {
    throw FitError("ldcof: k=" + std::to_string(k) + " invalid for " + std::to_string(train.size()) + " points");
  }
  auto result = lloyd(train, seeded_initial_centroids(train, k, seed));
  return std::make_unique<LdcofScorer>(std::move(result.centroids), train, kLdcofLargeMass);
}

}  // namespace adbench
