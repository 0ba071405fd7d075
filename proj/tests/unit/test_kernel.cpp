#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "adbench/detectors/registry.hpp"
#include "adbench/kernel.hpp"
#include "adbench/metrics.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

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

}  // namespace

TEST_CASE("knn query on a line") {
  const NeighborIndex idx(line({0, 1, 2, 10}));
  const auto nn = knn_query(idx, at(10), 2);
  REQUIRE(nn.size() == 2);
  CHECK(nn[0] == Neighbor{2, 8.0});
  CHECK(nn[1] == Neighbor{1, 9.0});
}

TEST_CASE("a stored query never finds itself") {
  const NeighborIndex idx(line({0, 1, 2, 10}));
  const auto nn = knn_query(idx, at(1), 1);
  REQUIRE(nn.size() == 1);
  CHECK(nn[0].id != 1);
  CHECK(idx.self_of(at(1)) == std::size_t{1});
  CHECK_FALSE(idx.self_of(at(1.5)));
  CHECK(idx.query(at(1), 1, false)[0].id == 1);
  CHECK(idx.query_stored(3, 1)[0].id == 2);
}

TEST_CASE("equidistant neighbors come in insertion order") {
  const NeighborIndex idx(line({2, 0, 4}));
  const auto nn = knn_query(idx, at(2), 2);
  CHECK(nn[0].id == 1);
  CHECK(nn[1].id == 2);
  const NeighborIndex dup(line({5, 5, 5}));
  CHECK(knn_query(dup, at(5), 2)[0].id == 1);
}

TEST_CASE("asking for more neighbors than exist fails") {
  const NeighborIndex idx(line({0, 1, 2}));
  CHECK_THROWS_AS(knn_query(idx, at(1), 3), FitError);
  CHECK_NOTHROW(knn_query(idx, at(7), 3));
  CHECK_THROWS_AS(knn_query(idx, at(1), 0), std::invalid_argument);
}

TEST_CASE("neighbor queries match the brute-force oracle") {
  Rng rng(4);
  const auto pts = testing::gaussian_points(120, 3, rng);
  const NeighborIndex idx(pts);
  for (std::size_t q = 0; q < 20; ++q) {
    const auto got = idx.query(pts[q], 7);
    const auto want = oracle::neighbors(pts, pts[q], 7);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].id == want[i].id);
      CHECK(got[i].distance == doctest::Approx(want[i].distance).epsilon(1e-12));
    }
    CHECK(idx.ranked(pts[q], q).size() == 119);
  }
}

TEST_CASE("separable scores pick the first candidate that separates") {
  std::vector<double> train(50, 0.0), tuning;
  std::vector<bool> labels;
  // Integer scores keep the IQR(0.5) fence exactly on the top normal score.
  for (int i = 0; i < 50; ++i) train[i] = i % 5;
  for (int i = 0; i < 20; ++i) {
    tuning.push_back(i % 5);
    labels.push_back(false);
  }
  for (int i = 0; i < 4; ++i) {
    tuning.push_back(100.0);
    labels.push_back(true);
  }
  const auto df = learn_decision_function(train, tuning, labels);
  CHECK(df.to_string() == "IQR(0.5)");
  CHECK(mcc(confusion(classify_all(df, tuning), labels)) == 1.0);
}

TEST_CASE("all-zero MCC candidates fall back to the first") {
  std::vector<double> train;
  for (int i = 1; i <= 20; ++i) train.push_back(i);
  const std::vector<double> tuning = {1, 2, 3, 4};
  const std::vector<bool> labels = {false, true, false, true};
  const auto df = learn_decision_function(train, tuning, labels);
  CHECK(df.kind == DecisionKind::Iqr);
  CHECK(df.parameter == 0.5);
  CHECK_FALSE(df.log_scale);
}

TEST_CASE("IQR threshold from type-7 quartiles") {
  std::vector<double> s;
  for (int i = 1; i <= 100; ++i) s.push_back(i);
  const auto stats = decision_statistics(s);
  CHECK(stats.linear.q1 == doctest::Approx(25.75));
  CHECK(stats.linear.q3 == doctest::Approx(75.25));
  const auto df = make_decision_function({DecisionKind::Iqr, 1.5}, stats);
  CHECK(df.threshold == doctest::Approx(149.5));
  const auto conf = make_decision_function({DecisionKind::Conf, 2.0}, stats);
  CHECK(conf.threshold == doctest::Approx(mean(s) + 2.0 * stddev(s)));
  CHECK(conf.to_string() == "CONF(2)");
}

TEST_CASE("log-scale candidates map their threshold back to raw scores") {
  std::vector<double> s = {-1e6, -1e5, -1e4, -1e3, -100, -50, -20, -10, -5, -2};
  const auto stats = decision_statistics(s);
  const auto df = make_decision_function({DecisionKind::Iqr, 1.5, true}, stats);
  std::vector<double> logs;
  for (double v : s) logs.push_back(std::copysign(std::log1p(std::abs(v)), v));
  const double q1 = quantile(logs, 0.25), q3 = quantile(logs, 0.75);
  const double t = q3 + 1.5 * (q3 - q1);
  CHECK(df.threshold == doctest::Approx(std::copysign(std::expm1(std::abs(t)), t)));
  CHECK(df.to_string() == "LOG-IQR(1.5)");
  CHECK(from_log_scale(to_log_scale(-123.5)) == doctest::Approx(-123.5));
  CHECK(to_log_scale(0.0) == 0.0);
}

TEST_CASE("candidate enumeration order") {
  const auto& c = decision_candidates();
  REQUIRE(c.size() == 16);
  CHECK(c[0].kind == DecisionKind::Iqr);
  CHECK(c[0].parameter == 0.5);
  CHECK(c[4].parameter == 3.0);
  CHECK(c[5].kind == DecisionKind::Conf);
  CHECK(c[7].parameter == 3.0);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK_FALSE(c[i].log_scale);
    CHECK(c[i + 8].log_scale);
    CHECK(c[i + 8].kind == c[i].kind);
    CHECK(c[i + 8].parameter == c[i].parameter);
  }
}

TEST_CASE("classification is strict and monotone") {
  DecisionFunction df;
  df.threshold = 2.0;
  CHECK_FALSE(classify(df, 2.0));
  CHECK(classify(df, std::nextafter(2.0, 3.0)));
  std::vector<double> s = {1, 2, 3, 4, 5};
  const auto flags = classify_all(df, s);
  CHECK(std::is_sorted(flags.begin(), flags.end()));
}

TEST_CASE("constant train scores give a threshold at the constant") {
  const std::vector<double> train(20, 7.0);
  const auto df = make_decision_function({DecisionKind::Iqr, 3.0}, decision_statistics(train));
  CHECK(df.threshold == 7.0);
  CHECK_FALSE(classify(df, 7.0));
  CHECK(classify(df, 7.5));
}

TEST_CASE("learned thresholds never fall below the train median") {
  Rng rng(21);
  std::lognormal_distribution<double> heavy(0.0, 2.0);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> train, tuning;
    std::vector<bool> labels;
    const bool skew = trial % 2 == 0;
    for (int i = 0; i < 60; ++i) train.push_back(skew ? -heavy(rng) : g(rng));
    for (int i = 0; i < 30; ++i) {
      tuning.push_back(skew ? -heavy(rng) : g(rng));
      labels.push_back(i % 6 == 0);
    }
    const auto df = learn_decision_function(train, tuning, labels);
    CHECK(df.threshold >= median(train));
    for (const auto& c : decision_candidates()) {
      CHECK(make_decision_function(c, decision_statistics(train)).threshold >= median(train) - 1e-9);
    }
  }
}

TEST_CASE("decision learning preconditions") {
  const std::vector<double> few = {1, 2, 3};
  const std::vector<double> tuning = {1, 2};
  CHECK_THROWS_AS(learn_decision_function(few, tuning, {false, true}), FitError);
  const std::vector<double> train(20, 1.0);
  CHECK_THROWS_AS(learn_decision_function(train, tuning, {false, false}), FitError);
  CHECK_THROWS_AS(learn_decision_function(train, tuning, {false}), std::invalid_argument);
}

TEST_CASE("parameter sets and grids") {
  ParamSet p{{"kernel", std::string("RBF")}, {"nu", 0.02}};
  CHECK(p.to_string() == "kernel=RBF nu=0.02");
  CHECK(p.get_double("nu") == 0.02);
  CHECK(p.get_string("kernel") == "RBF");
  CHECK(p.get_int_or("k", 5) == 5);
  CHECK(ParamSet{}.to_string() == "-");

  ParamGrid g;
  g.add_axis("a", {std::int64_t{1}, std::int64_t{2}});
  g.add_axis("b", {std::string("x"), std::string("y"), std::string("z")});
  const auto all = g.assignments();
  REQUIRE(all.size() == 6);
  CHECK(all[0].to_string() == "a=1 b=x");
  CHECK(all[1].to_string() == "a=1 b=y");
  CHECK(all[3].to_string() == "a=2 b=x");
  CHECK(ParamGrid{}.assignments().size() == 1);
}

TEST_CASE("default grids") {
  const auto knn = default_param_grid(Algorithm::Knn);
  REQUIRE(knn.axes().size() == 1);
  CHECK(knn.axes()[0].second.size() == kNeighborGrid.size());
  CHECK(std::get<std::int64_t>(knn.axes()[0].second.front()) == 1);
  CHECK(std::get<std::int64_t>(knn.axes()[0].second.back()) == 100);
  const auto svm = default_param_grid(Algorithm::OneClassSvm).assignments();
  CHECK(svm.size() == 10);
  CHECK(std::find(svm.begin(), svm.end(), ParamSet{{"kernel", std::string("RBF")}, {"nu", 0.02}}) != svm.end());
  CHECK(default_param_grid(Algorithm::Abod).empty());
  CHECK(default_param_grid(Algorithm::GMeans).empty());
  const auto isos = default_param_grid(Algorithm::Isos).assignments();
  CHECK(std::find(isos.begin(), isos.end(), ParamSet{{"k", std::int64_t{20}}, {"phi", 0.1}}) != isos.end());
  const auto ifo = default_param_grid(Algorithm::IsolationForest).assignments();
  CHECK(std::find(ifo.begin(), ifo.end(), ParamSet{{"trees", std::int64_t{5}}, {"samples", std::int64_t{20}}}) !=
        ifo.end());
  for (auto a : all_algorithms()) {
    if (a != Algorithm::Abod && a != Algorithm::GMeans) CHECK_FALSE(default_param_grid(a).empty());
  }
}

TEST_CASE("algorithm names round-trip") {
  std::set<std::string> names;
  for (auto a : all_algorithms()) {
    names.insert(std::string(algorithm_name(a)));
    CHECK(parse_algorithm(algorithm_name(a)) == a);
  }
  CHECK(names.size() == 17);
  CHECK(parse_algorithm("fast-abod") == Algorithm::FastAbod);
  CHECK(parse_algorithm("isolation forest") == Algorithm::IsolationForest);
  CHECK_FALSE(parse_algorithm("XYZ"));
}

TEST_CASE("every detector yields finite scores on finite input") {
  Rng rng(8);
  const auto train = testing::gaussian_points(120, 3, rng);
  const auto queries = testing::gaussian_points(15, 3, rng);
  for (auto a : all_algorithms()) {
    ParamSet p;
    if (a == Algorithm::Sdo) p = {{"observers", std::int64_t{50}}, {"x", std::int64_t{5}}, {"q", 0.1}};
    const auto m = fit_detector(a, p, train, 3);
    for (double s : m.scorer->score_all(queries)) CHECK_MESSAGE(std::isfinite(s), algorithm_name(a));
    for (double s : m.scorer->score_all(train)) CHECK_MESSAGE(std::isfinite(s), algorithm_name(a));
  }
}

TEST_CASE("distance detectors keep their ranking under uniform scaling") {
  Rng rng(10);
  const auto train = testing::gaussian_points(100, 3, rng);
  const auto queries = testing::gaussian_points(20, 3, rng);
  auto scaled = [](const PointSet& p, double c) {
    PointSet out(p.dim());
    for (std::size_t i = 0; i < p.size(); ++i) {
      std::vector<double> r(p[i].begin(), p[i].end());
      for (double& v : r) v *= c;
      out.push_back(r);
    }
    return out;
  };
  auto ranks = [](const std::vector<double>& s) {
    std::vector<std::size_t> idx(s.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });
    return idx;
  };
  const std::vector<std::pair<Algorithm, ParamSet>> cases = {
      {Algorithm::Knn, {{"k", std::int64_t{5}}}},
      {Algorithm::KMeans, {{"k", std::int64_t{3}}}},
      {Algorithm::Sdo, {{"observers", std::int64_t{40}}, {"x", std::int64_t{5}}, {"q", 0.1}}},
      {Algorithm::Som, {{"min_a", 0.1}, {"base_a", 0.6}, {"decay", 0.9}, {"side", std::int64_t{5}}}},
  };
  for (const auto& [a, p] : cases) {
    const auto base = fit_detector(a, p, train, 6).scorer->score_all(queries);
    const auto big = fit_detector(a, p, scaled(train, 7.0), 6).scorer->score_all(scaled(queries, 7.0));
    CHECK_MESSAGE(ranks(base) == ranks(big), algorithm_name(a));
  }
}
