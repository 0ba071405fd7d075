#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "adbench/detectors/boundary.hpp"
#include "fixtures.hpp"

using namespace adbench;

namespace {

PointSet line(std::initializer_list<double> xs) {
  PointSet p(1);
  for (double x : xs) {
    const std::vector<double> row = {x};
    p.push_back(row);
  }
  return p;
}

std::vector<double> at(double x) { return {x}; }

PointSet blobs(Rng& rng, std::size_t per_blob) {
  std::normal_distribution<double> g(0.0, 0.3);
  const double centres[4][2] = {{0, 0}, {8, 0}, {0, 8}, {8, 8}};
  PointSet p(2);
  for (const auto& c : centres) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      const std::vector<double> r = {c[0] + g(rng), c[1] + g(rng)};
      p.push_back(r);
    }
  }
  return p;
}

}  // namespace

TEST_CASE("svm flags a far point above the cluster centre") {
  Rng rng(1);
  const auto train = testing::gaussian_points(200, 2, rng);
  for (auto kernel : {SvmKernel::Rbf, SvmKernel::Linear}) {
    SvmScorer::Options o;
    o.kernel = kernel;
    o.nu = 0.02;
    const auto m = train_ocsvm(train, o);
    if (kernel == SvmKernel::Rbf) {
      const std::vector<double> origin = {0, 0}, far = {9, 9};
      CHECK(m->score(far) > m->score(origin));
      CHECK(m->gamma() == doctest::Approx(0.5));
    }
    CHECK(m->scale() > 0.0);
  }
  CHECK(parse_svm_kernel("rbf") == SvmKernel::Rbf);
  CHECK(parse_svm_kernel("LINEAR") == SvmKernel::Linear);
  CHECK_THROWS(parse_svm_kernel("poly"));
}

TEST_CASE("svm satisfies the nu-property") {
  Rng rng(2);
  const auto train = testing::gaussian_points(1000, 2, rng);
  for (double nu : {0.05, 0.1, 0.2}) {
    SvmScorer::Options o;
    o.nu = nu;
    const auto m = train_ocsvm(train, o);
    CHECK(m->converged());
    double outside = 0;
    for (double d : m->train_decisions()) outside += d < 0;
    CHECK(outside / 1000.0 <= nu + 0.05);
    CHECK(static_cast<double>(m->support_vector_count()) / 1000.0 >= nu - 0.05);
    double total = 0;
    for (double a : m->alphas()) {
      CHECK(a >= 0.0);
      CHECK(a <= 1.0 + 1e-12);
      total += a;
    }
    CHECK(total == doctest::Approx(nu * 1000.0).epsilon(1e-9));
  }
}

TEST_CASE("svm preconditions") {
  Rng rng(3);
  const auto train = testing::gaussian_points(50, 2, rng);
  SvmScorer::Options o;
  o.nu = 0.0;
  CHECK_THROWS_AS(train_ocsvm(train, o), FitError);
  o.nu = 1.5;
  CHECK_THROWS_AS(train_ocsvm(train, o), FitError);
  o.nu = 0.1;
  CHECK_THROWS_AS(train_ocsvm(testing::gaussian_points(9, 2, rng), o), FitError);
}

TEST_CASE("iforest score formula") {
  for (std::size_t psi : {16, 64, 256}) {
    CHECK(iforest_score(iforest_c(static_cast<double>(psi)), psi) == doctest::Approx(0.5));
    double prev = 2.0;
    for (double h = 0.5; h < 20.0; h += 0.5) {
      const double s = iforest_score(h, psi);
      CHECK(s < prev);
      CHECK(s > 0.0);
      CHECK(s <= 1.0);
      prev = s;
    }
  }
  CHECK(iforest_c(2) == 1.0);
  CHECK(iforest_c(1) == 0.0);
  // 2 (ln(255) + gamma) - 2 * 255 / 256
  CHECK(iforest_c(256) == doctest::Approx(2.0 * (std::log(255.0) + 0.5772156649015329) - 2.0 * 255.0 / 256.0));
}

TEST_CASE("iforest trees respect the height limit and oversized subsamples clamp") {
  Rng rng(4);
  const auto train = testing::gaussian_points(500, 3, rng);
  const auto m = train_iforest(train, 50, 128, 9);
  CHECK(m->tree_count() == 50);
  CHECK(m->height_limit() == 7);
  CHECK(m->max_depth() <= 7);
  for (double v : m->score_all(testing::gaussian_points(100, 3, rng))) {
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(train_iforest(train, 10, 501, 1)->subsample() == 500);
  CHECK_THROWS_AS(train_iforest(train, 0, 10, 1), FitError);
}

TEST_CASE("iforest isolates a far point on nearly every seed") {
  PointSet train(1);
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> r = {static_cast<double>(i)};
    train.push_back(r);
  }
  const std::vector<double> far = {1000};
  train.push_back(far);
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto m = train_iforest(train, 100, 64, seed);
    wins += m->score(far) > m->score(at(50));
  }
  CHECK(wins >= 99);
}

TEST_CASE("iforest is deterministic per seed") {
  Rng rng(5);
  const auto train = testing::gaussian_points(300, 2, rng);
  const auto a = train_iforest(train, 20, 64, 77), b = train_iforest(train, 20, 64, 77);
  const auto q = testing::gaussian_points(20, 2, rng);
  CHECK(a->score_all(q) == b->score_all(q));
}

TEST_CASE("single-unit som tracks the train mean") {
  Rng rng(6);
  std::normal_distribution<double> g(3.0, 1.0);
  PointSet train(1);
  for (int i = 0; i < 400; ++i) {
    const std::vector<double> r = {g(rng)};
    train.push_back(r);
  }
  SomScorer::Options o;
  o.side = 1;
  const auto m = train_som(train, o, 3);
  double mu = 0;
  for (std::size_t i = 0; i < train.size(); ++i) mu += train[i][0];
  mu /= static_cast<double>(train.size());
  // The last epoch runs at rate min_a, an exponential average with a spread of
  // roughly sqrt(a / (2 - a)) sigma around the mean.
  CHECK(std::abs(m->weights()[0][0] - mu) < 0.5);
  CHECK(m->score(at(mu + 5)) == doctest::Approx(std::abs(mu + 5 - m->weights()[0][0])));
}

TEST_CASE("som weights score zero and quantization error drops") {
  Rng rng(7);
  const auto train = blobs(rng, 100);
  SomScorer::Options o;
  o.side = 5;
  const auto m = train_som(train, o, 11);
  for (std::size_t i = 0; i < m->weights().size(); ++i) CHECK(m->score(m->weights()[i]) == 0.0);
  for (std::size_t i = 0; i < m->weights().size(); ++i) {
    for (double v : m->weights()[i]) CHECK(std::isfinite(v));
  }
  const auto& h = m->quantization_history();
  REQUIRE(h.size() == o.epochs + 1);
  // Weights start on train points and the first wide-neighborhood epoch pulls
  // every unit toward the centre, so the error is measured from epoch one on.
  CHECK(h.back() <= h[1] / 2.0);
  CHECK(h.back() <= 1.1 * *std::min_element(h.begin() + 1, h.end()));
  const std::vector<double> far = {30, -30};
  for (std::size_t i = 0; i < train.size(); ++i) CHECK(m->score(far) > m->score(train[i]));
}

TEST_CASE("som preconditions") {
  const auto train = line({0, 1, 2, 3});
  SomScorer::Options o;
  o.side = 0;
  CHECK_THROWS_AS(train_som(train, o, 1), FitError);
  o.side = 2;
  o.min_a = 0.7;
  CHECK_THROWS_AS(train_som(train, o, 1), FitError);
  o.min_a = 0.1;
  o.decay = 1.0;
  CHECK_THROWS_AS(train_som(train, o, 1), FitError);
}
