#include "adbench/detectors/statistical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace adbench {

// ---------------------------------------------------------------------------
// HBOS

HbosScorer::HbosScorer(const PointSet& train, std::size_t bins) {
  if (train.empty()) throw FitError("hbos: empty training set");
  if (bins < 2) throw FitError("hbos: need at least two bins");
  const double n = static_cast<double>(train.size());
  floor_ = 1.0 / (10.0 * n);
  histograms_.resize(train.dim());
  for (std::size_t f = 0; f < train.dim(); ++f) {
    auto& h = histograms_[f];
    h.low = h.high = train[0][f];
    for (std::size_t i = 1; i < train.size(); ++i) {
      h.low = std::min(h.low, train[i][f]);
      h.high = std::max(h.high, train[i][f]);
    }
    h.width = (h.high - h.low) / static_cast<double>(bins);
    h.heights.assign(h.width > 0.0 ? bins : 1, 0.0);
    for (std::size_t i = 0; i < train.size(); ++i) {
      std::size_t b = 0;
      if (h.width > 0.0) {
        b = std::min(static_cast<std::size_t>((train[i][f] - h.low) / h.width), bins - 1);
      }
      h.heights[b] += 1.0;
    }
    for (double& v : h.heights) v /= n;
  }
}

double HbosScorer::feature_score(std::size_t feature, double value) const {
  const auto& h = histograms_[feature];
  double height = floor_;
  if (value >= h.low && value <= h.high) {
    std::size_t b = 0;
    if (h.width > 0.0) b = std::min(static_cast<std::size_t>((value - h.low) / h.width), h.heights.size() - 1);
    height = std::max(h.heights[b], floor_);
  }
  return -std::log(height);
}

double HbosScorer::score(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t f = 0; f < histograms_.size(); ++f) s += feature_score(f, x[f]);
  return s;
}

std::unique_ptr<HbosScorer> train_hbos(const PointSet& train, std::size_t bins) {
  return std::make_unique<HbosScorer>(train, bins);
}

std::size_t resolve_bins(const ParamValue& value, std::size_t n) {
  if (const auto* s = std::get_if<std::string>(&value)) {
    if (to_lower(*s) != "sqrt") throw ConfigError("hbos: bins must be an integer or 'sqrt', got '" + *s + "'");
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n)))));
  }
  if (const auto* i = std::get_if<std::int64_t>(&value)) {
    if (*i < 2) throw ConfigError("hbos: bins must be at least 2");
    return static_cast<std::size_t>(*i);
  }
  throw ConfigError("hbos: bins must be an integer or 'sqrt'");
}

// ---------------------------------------------------------------------------
// SOS / ISOS

namespace {

double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double e : v) s += std::exp(e - m);
  return m + std::log(s);
}

// Shannon entropy (nats) of the distribution proportional to exp(log_a).
double entropy_of(const std::vector<double>& log_a) {
  const double lse = log_sum_exp(log_a);
  double h = 0.0;
  for (double la : log_a) {
    const double lp = la - lse;
    const double p = std::exp(lp);
    if (p > 0.0) h -= p * lp;
  }
  return h;
}

}  // namespace

double AffinityScorer::log_affinity(std::size_t i, double d2) const {
  if (options_.kernel == AffinityKernel::Gaussian) return -beta_[i] * (d2 - shift_[i]);
  return -std::log1p(beta_[i] * d2);
}

bool AffinityScorer::in_neighborhood(std::size_t i, std::size_t j) const {
  if (i == j) return false;
  if (options_.neighbors == 0) return true;
  const auto& nb = neighborhood_[i];
  return std::binary_search(nb.begin(), nb.end(), j);
}

AffinityScorer::AffinityScorer(const PointSet& train, const Options& options) : index_(train), options_(options) {
  const std::size_t n = train.size();
  if (n < 2) throw FitError("sos: need at least two training points");
  if (options_.neighbors >= n) {
    throw FitError("isos: k=" + std::to_string(options_.neighbors) + " must be below the train size " +
                   std::to_string(n));
  }
  if (!(options_.perplexity >= 1.0)) throw FitError("sos: perplexity must be at least 1");

  degenerate_ = true;
  for (std::size_t i = 1; i < n && degenerate_; ++i) degenerate_ = squared_distance(train[0], train[i]) == 0.0;
  if (degenerate_) {
    warn("all training points coincide; every score is 0.5");
    return;
  }

  beta_.assign(n, 1.0);
  shift_.assign(n, 0.0);
  log_sum_.assign(n, 0.0);
  target_.assign(n, options_.perplexity);
  neighborhood_.resize(options_.neighbors == 0 ? 0 : n);

  std::vector<double> d2;
  std::vector<double> log_a;
  for (std::size_t i = 0; i < n; ++i) {
    d2.clear();
    if (options_.neighbors == 0) {
      for (std::size_t l = 0; l < n; ++l) {
        if (l != i) d2.push_back(squared_distance(train[i], train[l]));
      }
    } else {
      auto& nb = neighborhood_[i];
      for (const auto& e : index_.query_stored(i, options_.neighbors)) nb.push_back(e.id);
      std::sort(nb.begin(), nb.end());
      for (std::size_t l : nb) d2.push_back(squared_distance(train[i], train[l]));
    }
    const double shift = options_.kernel == AffinityKernel::Gaussian ? *std::min_element(d2.begin(), d2.end()) : 0.0;
    shift_[i] = shift;
    double scale = 0.0;
    for (double v : d2) scale += v - shift;
    scale /= static_cast<double>(d2.size());

    auto entropy_at = [&](double beta) {
      log_a.resize(d2.size());
      for (std::size_t t = 0; t < d2.size(); ++t) {
        log_a[t] = options_.kernel == AffinityKernel::Gaussian ? -beta * (d2[t] - shift) : -std::log1p(beta * d2[t]);
      }
      return entropy_of(log_a);
    };

    double beta = 1.0;
    if (scale > 0.0) {
      // Bisection on log(beta) relative to the local distance scale; entropy
      // is nonincreasing in beta.
      double lo = -40.0;
      double hi = 40.0;
      const double h_max = entropy_at(std::exp(lo) / scale);
      const double h_min = entropy_at(std::exp(hi) / scale);
      const double want = std::clamp(std::log(options_.perplexity), h_min, h_max);
      target_[i] = std::exp(want);
      double u = 0.0;
      for (int it = 0; it < kAffinityMaxIterations; ++it) {
        u = 0.5 * (lo + hi);
        const double h = entropy_at(std::exp(u) / scale);
        if (std::abs(h - want) < kAffinityEntropyTolerance) break;
        if (h > want) {
          lo = u;
        } else {
          hi = u;
        }
        if (hi - lo <= std::numeric_limits<double>::epsilon() * 4.0) break;
      }
      beta = std::exp(u) / scale;
    } else {
      target_[i] = static_cast<double>(d2.size());
    }
    beta_[i] = beta;
    log_a.resize(d2.size());
    for (std::size_t t = 0; t < d2.size(); ++t) log_a[t] = log_affinity(i, d2[t]);
    log_sum_[i] = log_sum_exp(log_a);
  }
}

double AffinityScorer::binding(std::size_t i, std::size_t j) const {
  if (degenerate_) return i == j ? 0.0 : 1.0 / static_cast<double>(index_.size() - 1);
  if (!in_neighborhood(i, j)) return 0.0;
  const double d2 = squared_distance(index_.points()[i], index_.points()[j]);
  return std::exp(log_affinity(i, d2) - log_sum_[i]);
}

double AffinityScorer::score(std::span<const double> x) const {
  if (degenerate_) return 0.5;
  const auto self = index_.self_of(x);
  const auto& pts = index_.points();

  double log_score = 0.0;
  auto accumulate = [&](std::size_t i) {
    const double la = log_affinity(i, squared_distance(x, pts[i]));
    if (self && in_neighborhood(i, *self)) {
      // x is already part of i's normalization.
      log_score += std::log1p(-std::exp(la - log_sum_[i]));
    } else {
      log_score -= softplus(la - log_sum_[i]);
    }
  };
  if (options_.neighbors == 0) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!self || i != *self) accumulate(i);
    }
  } else {
    for (const auto& nb : index_.query(x, options_.neighbors)) accumulate(nb.id);
  }
  return std::clamp(std::exp(log_score), 0.0, 1.0);
}

std::unique_ptr<AffinityScorer> train_sos(const PointSet& train, double perplexity) {
  if (perplexity < 1.0 || perplexity >= static_cast<double>(train.size())) {
    throw FitError("sos: perplexity " + format_double(perplexity) + " must lie in [1, " +
                   std::to_string(train.size()) + ")");
  }
  return std::make_unique<AffinityScorer>(train, AffinityScorer::Options{AffinityKernel::Gaussian, 0, perplexity});
}

std::unique_ptr<AffinityScorer> train_isos(const PointSet& train, std::size_t k, double phi, AffinityKernel kernel) {
  if (!(phi > 0.0 && phi < 1.0)) throw FitError("isos: phi must lie in (0, 1)");
  if (k == 0 || k >= train.size()) {
    throw FitError("isos: k=" + std::to_string(k) + " must lie in [1, " + std::to_string(train.size()) + ")");
  }
  const double perplexity = std::max(1.0, phi * static_cast<double>(k));
  return std::make_unique<AffinityScorer>(train, AffinityScorer::Options{kernel, k, perplexity});
}

}  // namespace adbench
