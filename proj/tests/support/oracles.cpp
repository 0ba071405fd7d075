#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace adbench::oracle {

namespace {

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

std::optional<std::size_t> stored_copy(const PointSet& train, std::span<const double> x) {
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (std::equal(x.begin(), x.end(), train[i].begin())) return i;
  }
  return std::nullopt;
}

double k_distance(const PointSet& train, std::size_t i, std::size_t k) {
  return neighbors(train, train[i], k).back().distance;
}

}  // namespace

std::vector<Ranked> neighbors(const PointSet& train, std::span<const double> x, std::size_t k) {
  const auto self = stored_copy(train, x);
  std::vector<Ranked> all;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (self && *self == i) continue;
    all.push_back({i, dist(x, train[i])});
  }
  std::sort(all.begin(), all.end(), [](const Ranked& a, const Ranked& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
  });
  all.resize(std::min(k, all.size()));
  return all;
}

double knn(const PointSet& train, std::span<const double> x, std::size_t k) {
  return neighbors(train, x, k).back().distance;
}

double odin(const PointSet& train, std::span<const double> x, std::size_t k) {
  const auto self = stored_copy(train, x);
  std::size_t indegree = 0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (self && *self == i) continue;
    if (self) {
      for (const auto& r : neighbors(train, train[i], k)) indegree += r.id == *self ? 1 : 0;
    } else {
      indegree += dist(x, train[i]) < k_distance(train, i, k) ? 1 : 0;
    }
  }
  return 1.0 / (static_cast<double>(indegree) + 1.0);
}

double lof(const PointSet& train, std::span<const double> x, std::size_t k) {
  auto lrd = [&](std::span<const double> p) {
    double reach = 0.0;
    const auto nb = neighbors(train, p, k);
    for (const auto& o : nb) reach += std::max(k_distance(train, o.id, k), o.distance);
    return static_cast<double>(nb.size()) / reach;
  };
  const auto nb = neighbors(train, x, k);
  double sum = 0.0;
  for (const auto& o : nb) sum += lrd(train[o.id]);
  return sum / static_cast<double>(nb.size()) / lrd(x);
}

double cof(const PointSet& train, std::span<const double> x, std::size_t k) {
  // Set-based nearest path: grow a set from p, each time taking the remaining
  // neighbor closest to any member; the chaining cost is that gap.
  auto acd = [&](std::span<const double> p) {
    const auto nb = neighbors(train, p, k);
    std::vector<std::vector<double>> members = {std::vector<double>(p.begin(), p.end())};
    std::vector<bool> used(nb.size(), false);
    double total = 0.0;
    const double kd = static_cast<double>(nb.size());
    for (std::size_t step = 1; step <= nb.size(); ++step) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t pick = 0;
      for (std::size_t t = 0; t < nb.size(); ++t) {
        if (used[t]) continue;
        for (const auto& m : members) {
          const double d = dist(m, train[nb[t].id]);
          if (d < best) {
            best = d;
            pick = t;
          }
        }
      }
      used[pick] = true;
      const auto q = train[nb[pick].id];
      members.emplace_back(q.begin(), q.end());
      total += 2.0 * (kd + 1.0 - static_cast<double>(step)) / (kd * (kd + 1.0)) * best;
    }
    return total;
  };
  const auto nb = neighbors(train, x, k);
  double avg = 0.0;
  for (const auto& o : nb) avg += acd(train[o.id]);
  avg /= static_cast<double>(nb.size());
  return acd(x) / avg;
}

double abod(const PointSet& train, std::span<const double> x, std::size_t k) {
  std::vector<std::size_t> ids;
  if (k == 0) {
    for (std::size_t i = 0; i < train.size(); ++i) ids.push_back(i);
  } else {
    for (const auto& r : neighbors(train, x, k)) ids.push_back(r.id);
  }
  std::vector<std::vector<double>> v;
  for (auto i : ids) {
    std::vector<double> d(x.size());
    double n2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      d[j] = train[i][j] - x[j];
      n2 += d[j] * d[j];
    }
    if (n2 > 0.0) v.push_back(d);
  }
  std::vector<double> values;
  std::vector<double> weights;
  for (std::size_t a = 0; a < v.size(); ++a) {
    for (std::size_t b = a + 1; b < v.size(); ++b) {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        dot += v[a][j] * v[b][j];
        na += v[a][j] * v[a][j];
        nb += v[b][j] * v[b][j];
      }
      values.push_back(dot / (na * nb));
      weights.push_back(1.0 / std::sqrt(na * nb));
    }
  }
  if (values.empty()) return 0.0;
  double sw = 0.0, swv = 0.0;
  for (std::size_t t = 0; t < values.size(); ++t) {
    sw += weights[t];
    swv += weights[t] * values[t];
  }
  const double m = swv / sw;
  double var = 0.0;
  for (std::size_t t = 0; t < values.size(); ++t) var += weights[t] * (values[t] - m) * (values[t] - m);
  return -(var / sw);
}

std::vector<double> sos(const PointSet& train, const PointSet& queries, double perplexity) {
  const std::size_t n = train.size();
  const double target = std::log(perplexity);
  std::vector<std::vector<double>> d2(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d2[i][j] = std::pow(dist(train[i], train[j]), 2);
  }
  std::vector<double> beta(n), shift(n), mass(n);
  for (std::size_t i = 0; i < n; ++i) {
    shift[i] = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) shift[i] = std::min(shift[i], d2[i][j]);
    }
    auto entropy = [&](double b) {
      double s = 0.0, sd = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double a = std::exp(-b * (d2[i][j] - shift[i]));
        s += a;
        sd += a * (d2[i][j] - shift[i]);
      }
      return std::log(s) + b * sd / s;
    };
    double lo = 0.0, hi = 1.0;
    while (entropy(hi) > target) hi *= 2.0;
    for (int it = 0; it < 300; ++it) {
      const double mid = 0.5 * (lo + hi);
      (entropy(mid) > target ? lo : hi) = mid;
    }
    beta[i] = 0.5 * (lo + hi);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) s += std::exp(-beta[i] * (d2[i][j] - shift[i]));
    }
    mass[i] = s;
  }
  std::vector<double> out;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto x = queries[q];
    const auto self = stored_copy(train, x);
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (self && *self == i) continue;
      const double a = std::exp(-beta[i] * (std::pow(dist(x, train[i]), 2) - shift[i]));
      p *= self ? 1.0 - a / mass[i] : 1.0 - a / (mass[i] + a);
    }
    out.push_back(p);
  }
  return out;
}

double mcc(double tp, double tn, double fp, double fn) {
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (den == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(den);
}

}  // namespace adbench::oracle
