#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace adbench {

// Error families. Each maps onto a distinct failure class of the pipeline so
// the harness can turn them into error rows (fit/loader) or exit codes (config).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LoaderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LookupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

/// Dense row-major collection of equal-length real vectors.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::size_t rows, std::size_t dim) : dim_(dim), data_(rows * dim, 0.0) {}

  static PointSet from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return data_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<double> operator[](std::size_t i) { return {data_.data() + i * dim_, dim_}; }

  void push_back(std::span<const double> row);
  void reserve(std::size_t rows) { data_.reserve(rows * dim_); }

  PointSet subset(std::span<const std::size_t> indices) const;
  const std::vector<double>& raw() const { return data_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

/// Stable 64-bit mixing; used to derive child seeds independent of the
/// standard library's hash implementation.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_string(std::string_view text, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t derive_seed(std::uint64_t master, std::string_view a, std::string_view b = {});

/// Uniformly chooses `count` distinct indices from [0, n) in draw order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, Rng& rng);

/// Linear-interpolation quantile of an unsorted sample (type 7).
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);
double mean(std::span<const double> values);
/// Population standard deviation.
double stddev(std::span<const double> values);

std::string format_double(double value);
std::string trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);
std::string to_lower(std::string_view text);

}  // namespace adbench
