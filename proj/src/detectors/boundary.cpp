#include "adbench/detectors/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <list>
#include <memory>
#include <string>
#include <unordered_map>

namespace adbench {

// ---------------------------------------------------------------------------
// One-class SVM

namespace {

constexpr double kTau = 1e-12;

class KernelRowCache {
 public:
  using Row = std::shared_ptr<const std::vector<double>>;

  KernelRowCache(std::size_t capacity, std::function<std::vector<double>(std::size_t)> compute)
      : capacity_(std::max<std::size_t>(capacity, 2)), compute_(std::move(compute)) {}

  Row get(std::size_t i) {
    if (auto it = map_.find(i); it != map_.end()) {
      order_.splice(order_.begin(), order_, it->second.second);
      return it->second.first;
    }
    if (map_.size() >= capacity_) {
      map_.erase(order_.back());
      order_.pop_back();
    }
    order_.push_front(i);
    auto row = std::make_shared<const std::vector<double>>(compute_(i));
    map_.emplace(i, std::make_pair(row, order_.begin()));
    return row;
  }

 private:
  std::size_t capacity_;
  std::function<std::vector<double>(std::size_t)> compute_;
  std::list<std::size_t> order_;
  std::unordered_map<std::size_t, std::pair<Row, std::list<std::size_t>::iterator>> map_;
};

}  // namespace

SvmKernel parse_svm_kernel(std::string_view name) {
  const auto key = to_lower(name);
  if (key == "linear") return SvmKernel::Linear;
  if (key == "rbf") return SvmKernel::Rbf;
  throw ConfigError("svm: unknown kernel '" + std::string(name) + "'");
}

double SvmScorer::kernel(std::span<const double> a, std::span<const double> b) const {
  if (options_.kernel == SvmKernel::Linear) {
    double dot = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) dot += a[j] * b[j];
    return dot;
  }
  return std::exp(-gamma_ * squared_distance(a, b));
}

SvmScorer::SvmScorer(const PointSet& train, const Options& options) : options_(options), sv_(train.dim()) {
  const std::size_t n = train.size();
  if (n < 10) throw FitError("svm: need at least 10 training points, got " + std::to_string(n));
  if (!(options_.nu > 0.0 && options_.nu <= 1.0)) throw FitError("svm: nu must lie in (0, 1]");
  gamma_ = options_.gamma > 0.0 ? options_.gamma : 1.0 / static_cast<double>(std::max<std::size_t>(train.dim(), 1));

  KernelRowCache cache(options_.cache_rows, [&](std::size_t i) {
    std::vector<double> row(n);
    for (std::size_t t = 0; t < n; ++t) row[t] = kernel(train[i], train[t]);
    return row;
  });
  std::vector<double> qd(n);
  for (std::size_t t = 0; t < n; ++t) qd[t] = kernel(train[t], train[t]);

  // Feasible start: sum(alpha) = nu * n with 0 <= alpha <= 1.
  alpha_.assign(n, 0.0);
  const double total = options_.nu * static_cast<double>(n);
  const auto full = static_cast<std::size_t>(total);
  for (std::size_t i = 0; i < std::min(full, n); ++i) alpha_[i] = 1.0;
  if (full < n) alpha_[full] = total - static_cast<double>(full);

  std::vector<double> grad(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha_[i] == 0.0) continue;
    const auto row = cache.get(i);
    for (std::size_t t = 0; t < n; ++t) grad[t] += alpha_[i] * (*row)[t];
  }

  for (iterations_ = 0; iterations_ < options_.max_iterations; ++iterations_) {
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (alpha_[t] < 1.0 && -grad[t] >= gmax) {
        gmax = -grad[t];
        i = t;
      }
    }
    if (i == n) {
      converged_ = true;
      break;
    }
    const auto qi = cache.get(i);
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (alpha_[t] <= 0.0) continue;
      gmax2 = std::max(gmax2, grad[t]);
      const double diff = gmax + grad[t];
      if (diff > 0.0) {
        const double quad = qd[i] + qd[t] - 2.0 * (*qi)[t];
        const double obj = -(diff * diff) / (quad > 0.0 ? quad : kTau);
        if (obj <= best_obj) {
          best_obj = obj;
          j = t;
        }
      }
    }
    if (gmax + gmax2 < options_.tolerance || j == n) {
      converged_ = true;
      break;
    }
    const auto qj = cache.get(j);

    const double old_i = alpha_[i];
    const double old_j = alpha_[j];
    double quad = qd[i] + qd[j] - 2.0 * (*qi)[j];
    if (quad <= 0.0) quad = kTau;
    const double delta = (grad[i] - grad[j]) / quad;
    const double sum = alpha_[i] + alpha_[j];
    alpha_[i] -= delta;
    alpha_[j] += delta;
    if (sum > 1.0) {
      if (alpha_[i] > 1.0) {
        alpha_[i] = 1.0;
        alpha_[j] = sum - 1.0;
      }
    } else if (alpha_[j] < 0.0) {
      alpha_[j] = 0.0;
      alpha_[i] = sum;
    }
    if (sum > 1.0) {
      if (alpha_[j] > 1.0) {
        alpha_[j] = 1.0;
        alpha_[i] = sum - 1.0;
      }
    } else if (alpha_[i] < 0.0) {
      alpha_[i] = 0.0;
      alpha_[j] = sum;
    }
    const double di = alpha_[i] - old_i;
    const double dj = alpha_[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) grad[t] += (*qi)[t] * di + (*qj)[t] * dj;
  }
  if (!converged_) {
    warn("svm: SMO stopped after " + std::to_string(iterations_) + " iterations without reaching tolerance");
  }

  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha_[t] >= 1.0) {
      lb = std::max(lb, grad[t]);
    } else if (alpha_[t] <= 0.0) {
      ub = std::min(ub, grad[t]);
    } else {
      ++free_count;
      sum_free += grad[t];
    }
  }
  rho_ = free_count > 0 ? sum_free / static_cast<double>(free_count) : (ub + lb) / 2.0;

  for (std::size_t t = 0; t < n; ++t) {
    if (alpha_[t] > 0.0) {
      sv_.push_back(train[t]);
      sv_coef_.push_back(alpha_[t]);
    }
  }
  train_decision_.resize(n);
  for (std::size_t t = 0; t < n; ++t) train_decision_[t] = grad[t] - rho_;
  const double sd = stddev(train_decision_);
  scale_ = sd > 0.0 ? sd : 1.0;
}

double SvmScorer::decision(std::span<const double> x) const {
  double f = 0.0;
  for (std::size_t s = 0; s < sv_.size(); ++s) f += sv_coef_[s] * kernel(sv_[s], x);
  return f - rho_;
}

double SvmScorer::score(std::span<const double> x) const { return -decision(x) / scale_; }

std::unique_ptr<SvmScorer> train_ocsvm(const PointSet& train, const SvmScorer::Options& options) {
  return std::make_unique<SvmScorer>(train, options);
}

// ---------------------------------------------------------------------------
// Isolation forest

double iforest_c(double n) {
  if (n <= 1.0) return 0.0;
  if (n == 2.0) return 1.0;
  return 2.0 * (std::log(n - 1.0) + 0.5772156649) - 2.0 * (n - 1.0) / n;
}

double iforest_score(double mean_path, std::size_t psi) {
  double c = iforest_c(static_cast<double>(psi));
  if (c == 0.0) c = 1.0;
  return std::exp2(-mean_path / c);
}

namespace {

struct TreeBuilder {
  const PointSet& data;
  std::size_t limit;
  Rng rng;
  std::vector<IForestScorer::Node> nodes;

  std::int32_t build(std::vector<std::size_t> idx, std::size_t depth) {
    const auto id = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    nodes[id].size = idx.size();
    if (depth >= limit || idx.size() <= 1) return id;

    std::vector<std::size_t> usable;
    std::vector<std::pair<double, double>> ranges(data.dim());
    for (std::size_t f = 0; f < data.dim(); ++f) {
      double lo = data[idx[0]][f];
      double hi = lo;
      for (std::size_t i : idx) {
        lo = std::min(lo, data[i][f]);
        hi = std::max(hi, data[i][f]);
      }
      ranges[f] = {lo, hi};
      if (hi > lo) usable.push_back(f);
    }
    if (usable.empty()) return id;
    std::uniform_int_distribution<std::size_t> pick(0, usable.size() - 1);
    const std::size_t f = usable[pick(rng)];
    std::uniform_real_distribution<double> cut(ranges[f].first, ranges[f].second);
    double split = cut(rng);
    while (split <= ranges[f].first) split = cut(rng);

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : idx) (data[i][f] < split ? left : right).push_back(i);
    nodes[id].feature = f;
    nodes[id].split = split;
    const auto l = build(std::move(left), depth + 1);
    const auto r = build(std::move(right), depth + 1);
    nodes[id].left = l;
    nodes[id].right = r;
    return id;
  }
};

}  // namespace

IForestScorer::IForestScorer(const PointSet& train, std::size_t trees, std::size_t samples, std::uint64_t seed) {
  if (train.empty()) throw FitError("iforest: empty training set");
  if (trees == 0) throw FitError("iforest: need at least one tree");
  if (samples == 0) throw FitError("iforest: subsample size must be positive");
  psi_ = std::min(samples, train.size());
  limit_ = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(psi_))));
  norm_ = iforest_c(static_cast<double>(psi_));
  if (norm_ == 0.0) norm_ = 1.0;
  trees_.reserve(trees);
  for (std::size_t t = 0; t < trees; ++t) {
    TreeBuilder builder{train, limit_, Rng(mix64(seed ^ mix64(t + 1))), {}};
    auto idx = sample_without_replacement(train.size(), psi_, builder.rng);
    builder.build(std::move(idx), 0);
    trees_.push_back(std::move(builder.nodes));
  }
}

double IForestScorer::path_length(const std::vector<Node>& tree, std::span<const double> x) const {
  std::int32_t node = 0;
  double depth = 0.0;
  while (tree[node].left >= 0) {
    node = x[tree[node].feature] < tree[node].split ? tree[node].left : tree[node].right;
    depth += 1.0;
  }
  return depth + iforest_c(static_cast<double>(tree[node].size));
}

double IForestScorer::mean_path_length(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& tree : trees_) sum += path_length(tree, x);
  return sum / static_cast<double>(trees_.size());
}

double IForestScorer::score(std::span<const double> x) const { return std::exp2(-mean_path_length(x) / norm_); }

std::size_t IForestScorer::max_depth() const {
  std::size_t best = 0;
  for (const auto& tree : trees_) {
    std::vector<std::pair<std::int32_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
      const auto [node, depth] = stack.back();
      stack.pop_back();
      best = std::max(best, depth);
      if (tree[node].left >= 0) {
        stack.emplace_back(tree[node].left, depth + 1);
        stack.emplace_back(tree[node].right, depth + 1);
      }
    }
  }
  return best;
}

std::unique_ptr<IForestScorer> train_iforest(const PointSet& train, std::size_t trees, std::size_t samples,
                                             std::uint64_t seed) {
  return std::make_unique<IForestScorer>(train, trees, samples, seed);
}

// ---------------------------------------------------------------------------
// Self-organizing map

SomScorer::SomScorer(const PointSet& train, const Options& options, std::uint64_t seed)
    : options_(options), weights_(train.dim()) {
  if (train.empty()) throw FitError("som: empty training set");
  if (options_.side == 0) throw FitError("som: side must be positive");
  if (!(options_.min_a > 0.0 && options_.min_a <= options_.base_a && options_.base_a <= 1.0)) {
    throw FitError("som: need 0 < min_a <= base_a <= 1");
  }
  if (!(options_.decay > 0.0 && options_.decay < 1.0)) throw FitError("som: decay must lie in (0, 1)");

  const std::size_t s = options_.side;
  const std::size_t units = s * s;
  Rng rng(seed);
  if (units <= train.size()) {
    for (std::size_t i : sample_without_replacement(train.size(), units, rng)) weights_.push_back(train[i]);
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, train.size() - 1);
    for (std::size_t u = 0; u < units; ++u) weights_.push_back(train[pick(rng)]);
  }

  auto quantization = [&] {
    double sum = 0.0;
    for (std::size_t i = 0; i < train.size(); ++i) sum += score(train[i]);
    return sum / static_cast<double>(train.size());
  };
  history_.push_back(quantization());

  const std::size_t epochs = options_.epochs;
  const std::size_t dim = train.dim();
  for (std::size_t e = 0; e < epochs; ++e) {
    const double a = std::max(options_.min_a, options_.base_a * std::pow(options_.decay, static_cast<double>(e)));
    const double sigma =
        epochs > 1 ? static_cast<double>(s) / 2.0 * (1.0 - static_cast<double>(e) / static_cast<double>(epochs - 1))
                   : 0.0;
    for (std::size_t i : sample_without_replacement(train.size(), train.size(), rng)) {
      const auto x = train[i];
      const std::size_t bmu = best_matching_unit(x);
      const auto br = static_cast<double>(bmu / s);
      const auto bc = static_cast<double>(bmu % s);
      for (std::size_t u = 0; u < units; ++u) {
        double h = 0.0;
        if (sigma > 0.0) {
          const double dr = static_cast<double>(u / s) - br;
          const double dc = static_cast<double>(u % s) - bc;
          h = std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
        } else {
          h = u == bmu ? 1.0 : 0.0;
        }
        if (h == 0.0) continue;
        auto w = weights_[u];
        for (std::size_t j = 0; j < dim; ++j) w[j] += a * h * (x[j] - w[j]);
      }
    }
    history_.push_back(quantization());
  }
}

std::size_t SomScorer::best_matching_unit(std::span<const double> x) const {
  std::size_t best = 0;
  double best_d2 = squared_distance(weights_[0], x);
  for (std::size_t u = 1; u < weights_.size(); ++u) {
    const double d2 = squared_distance(weights_[u], x);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = u;
    }
  }
  return best;
}

double SomScorer::score(std::span<const double> x) const { return distance(weights_[best_matching_unit(x)], x); }

std::unique_ptr<SomScorer> train_som(const PointSet& train, const SomScorer::Options& options, std::uint64_t seed) {
  return std::make_unique<SomScorer>(train, options, seed);
}

}  // namespace adbench
