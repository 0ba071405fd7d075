#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "adbench/report.hpp"
#include "fixtures.hpp"

using namespace adbench;
namespace fs = std::filesystem;

namespace {

ExperimentTriple triple(const std::string& loader, const std::string& alg, double mcc,
                        const std::string& dataset = "D", const std::string& attack = "a",
                        LoaderMode mode = LoaderMode::SingleAttack) {
  ExperimentTriple t;
  t.loader = loader;
  t.algorithm = alg;
  t.params = "-";
  t.decision_function = "IQR(1.5)";
  t.metrics.mcc = mcc;
  t.metrics.f1 = (mcc + 1.0) / 2.0;
  t.metrics.accuracy = (mcc + 3.0) / 4.0;
  t.metrics.auc = std::nan("");
  t.dataset = dataset;
  t.attack = mode == LoaderMode::SingleAttack ? attack : "";
  t.mode = mode;
  return t;
}

const std::vector<std::string>& seventeen() {
  static const std::vector<std::string> names = {"KMEANS", "GMEANS", "DBSCAN", "LDCOF",    "HBOS", "SOS",
                                                 "ISOS",   "SVM",    "IFOREST", "SOM",     "ABOD", "FASTABOD",
                                                 "KNN",    "ODIN",   "LOF",     "COF",     "SDO"};
  return names;
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

std::string file_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double naive_std(const std::vector<double>& v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

TEST_CASE("family memberships") {
  const auto r = FamilyRegistry::standard();
  CHECK(r.families() ==
        std::vector<std::string>{"clustering", "statistical", "classification", "neural", "neighbor", "density", "angle"});
  CHECK(as_set(r.families_of("LDCOF")) == std::set<std::string>{"clustering", "density"});
  CHECK(as_set(r.families_of("ISOS")) == std::set<std::string>{"statistical", "neighbor"});
  CHECK(as_set(r.families_of("FastABOD")) == std::set<std::string>{"angle", "neighbor"});
  CHECK(r.families_of("nope").empty());
  CHECK(as_set(r.members("neighbor", true)) == std::set<std::string>{"KNN", "ODIN", "ISOS", "FASTABOD", "LOF", "COF"});
  CHECK(as_set(r.members("neighbor", false)) == std::set<std::string>{"KNN", "ODIN"});
  CHECK(r.members("density", false) == std::vector<std::string>{"SDO"});

  std::set<std::string> seen;
  std::size_t exclusive_total = 0;
  for (const auto& f : r.families()) {
    const auto ex = as_set(r.members(f, false)), all = as_set(r.members(f, true));
    CHECK(std::includes(all.begin(), all.end(), ex.begin(), ex.end()));
    exclusive_total += ex.size();
    seen.insert(ex.begin(), ex.end());
  }
  CHECK(seen.size() == exclusive_total);
  CHECK(canonical_algorithm("isolation forest") == "IFOREST");
  CHECK(canonical_algorithm("fast-abod") == "FASTABOD");
  CHECK(canonical_algorithm("Custom") == "Custom");
}

TEST_CASE("a dominant algorithm is best everywhere") {
  std::vector<ExperimentTriple> t;
  for (int l = 0; l < 4; ++l) {
    const auto loader = "L" + std::to_string(l);
    t.push_back(triple(loader, "SVM", 0.9));
    t.push_back(triple(loader, "KNN", 0.1 * l));
    t.push_back(triple(loader, "SOM", -0.2));
  }
  const auto s = algo_summary(t);
  REQUIRE(s.size() == 3);
  const auto svm = std::find_if(s.begin(), s.end(), [](const auto& a) { return a.algorithm == "SVM"; });
  CHECK(svm->best_count == 4);
  CHECK(svm->avg_mcc == doctest::Approx(0.9));
  CHECK(svm->std_mcc == doctest::Approx(0.0));
  const auto knn = std::find_if(s.begin(), s.end(), [](const auto& a) { return a.algorithm == "KNN"; });
  CHECK(knn->best_count == 0);
  CHECK(knn->avg_mcc == doctest::Approx(0.15));
  CHECK(knn->std_mcc == doctest::Approx(naive_std({0.0, 0.1, 0.2, 0.3})));
}

TEST_CASE("ties count as best for every tied algorithm") {
  std::vector<ExperimentTriple> t = {triple("L", "FASTABOD", 0.7), triple("L", "SOM", 0.7), triple("L", "KNN", 0.2)};
  std::size_t total = 0;
  for (const auto& s : algo_summary(t)) {
    total += s.best_count;
    CHECK(s.best_count == (s.algorithm == "KNN" ? 0U : 1U));
  }
  CHECK(total == 2);
}

TEST_CASE("error rows are ignored") {
  auto bad = triple("L", "KNN", 0.99);
  bad.error = "boom";
  const auto s = algo_summary({bad, triple("L", "SVM", 0.1)});
  REQUIRE(s.size() == 1);
  CHECK(s[0].algorithm == "SVM");
  CHECK(s[0].best_count == 1);
}

TEST_CASE("seventeen distinct values rank as a permutation") {
  std::vector<double> mccs(17);
  std::iota(mccs.begin(), mccs.end(), 0.0);
  Rng rng(3);
  std::shuffle(mccs.begin(), mccs.end(), rng);
  std::vector<ExperimentTriple> t;
  for (std::size_t i = 0; i < 17; ++i) t.push_back(triple("L", seventeen()[i], mccs[i] / 20.0));
  const auto r = rank_mcc(t);
  std::vector<double> ranks;
  for (std::size_t i = 0; i < 17; ++i) {
    const double rank = r.ranks.at("L").at(seventeen()[i]);
    CHECK(rank == mccs[i]);
    ranks.push_back(rank);
  }
  std::sort(ranks.begin(), ranks.end());
  for (std::size_t i = 0; i < 17; ++i) CHECK(ranks[i] == static_cast<double>(i));
}

TEST_CASE("tied ranks share the top of their span") {
  std::vector<ExperimentTriple> t;
  for (std::size_t i = 0; i < 17; ++i) t.push_back(triple("L", seventeen()[i], i < 2 ? 0.9 : 0.5 - 0.01 * i));
  const auto r = rank_mcc(t).ranks.at("L");
  CHECK(r.at(seventeen()[0]) == 16.0);
  CHECK(r.at(seventeen()[1]) == 16.0);
  CHECK(r.at(seventeen()[2]) == 14.0);
  CHECK(r.at(seventeen()[16]) == 0.0);

  std::vector<ExperimentTriple> same;
  for (const auto& a : seventeen()) same.push_back(triple("L", a, 0.3));
  for (const auto& [a, rank] : rank_mcc(same).ranks.at("L")) CHECK(rank == 16.0);
}

TEST_CASE("ranks scale over the algorithms present and average across loaders") {
  const auto r = rank_mcc({triple("A", "KNN", 0.9), triple("A", "SOM", 0.5), triple("A", "SVM", 0.1),
                           triple("B", "KNN", 0.2), triple("B", "SOM", 0.3), triple("C", "KNN", 0.0)});
  CHECK(r.ranks.at("A").at("KNN") == 16.0);
  CHECK(r.ranks.at("A").at("SOM") == 8.0);
  CHECK(r.ranks.at("A").at("SVM") == 0.0);
  CHECK(r.ranks.at("B").at("KNN") == 0.0);
  CHECK(r.ranks.at("C").at("KNN") == 16.0);
  CHECK(r.average.at("KNN") == doctest::Approx(32.0 / 3.0));
  CHECK(r.average.at("SOM") == doctest::Approx(12.0));
}

TEST_CASE("ranks ignore strictly increasing transforms") {
  Rng rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<ExperimentTriple> t, moved;
  for (int l = 0; l < 5; ++l) {
    for (const auto& a : seventeen()) {
      const double m = std::round(u(rng) * 4) / 4;  // coarse values force ties
      t.push_back(triple("L" + std::to_string(l), a, m));
      moved.push_back(triple("L" + std::to_string(l), a, std::tanh(3 * m) / 2 - 0.1));
    }
  }
  CHECK(rank_mcc(t).ranks == rank_mcc(moved).ranks);
}

TEST_CASE("family rollups") {
  std::vector<ExperimentTriple> t;
  Rng rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int l = 0; l < 3; ++l) {
    for (const auto& a : seventeen()) t.push_back(triple("L" + std::to_string(l), a, u(rng)));
  }
  const auto reg = FamilyRegistry::standard();
  const auto summary = algo_summary(t);
  const auto ranks = rank_mcc(t);
  for (bool starred : {false, true}) {
    for (const auto& f : family_rollup(t, reg, starred)) {
      CHECK(f.starred == starred);
      CHECK(as_set(f.members) == as_set(reg.members(f.family, starred)));
      double sum = 0, rank_sum = 0;
      std::size_t n = 0;
      for (const auto& row : t) {
        if (std::find(f.members.begin(), f.members.end(), row.algorithm) == f.members.end()) continue;
        sum += row.mcc();
        rank_sum += ranks.ranks.at(row.loader).at(row.algorithm);
        ++n;
      }
      CHECK(f.rows == n);
      CHECK(f.avg_mcc == doctest::Approx(sum / static_cast<double>(n)).epsilon(1e-12));
      CHECK(f.avg_rank == doctest::Approx(rank_sum / static_cast<double>(n)).epsilon(1e-12));
    }
  }
  const auto neural = family_rollup(t, reg, false);
  const auto it = std::find_if(neural.begin(), neural.end(), [](const auto& f) { return f.family == "neural"; });
  REQUIRE(it != neural.end());
  const auto som = std::find_if(summary.begin(), summary.end(), [](const auto& s) { return s.algorithm == "SOM"; });
  CHECK(it->avg_mcc == doctest::Approx(som->avg_mcc));
  CHECK(it->avg_rank == doctest::Approx(ranks.average.at("SOM")));

  const auto only_knn = family_rollup({triple("L", "KNN", 0.4)}, reg, false);
  REQUIRE(only_knn.size() == 1);
  CHECK(only_knn[0].family == "neighbor");
}

TEST_CASE("dataset rollups") {
  const auto one = dataset_rollup({triple("L", "KNN", 0.5, "X"), triple("L", "SVM", 0.5, "X")});
  REQUIRE(one.size() == 1);
  CHECK(one[0].mcc.std == 0.0);
  CHECK(one[0].loaders == 1);

  const auto two = dataset_rollup({triple("L1", "KNN", 0.8, "X"), triple("L1", "SVM", 0.2, "X"),
                                   triple("L2", "KNN", 0.6, "X"), triple("L2", "SVM", 0.4, "X"),
                                   triple("M", "KNN", -0.5, "Y")});
  REQUIRE(two.size() == 2);
  CHECK(two[0].dataset == "X");
  CHECK(two[0].avg_best_mcc == doctest::Approx(0.7));
  CHECK(two[0].mcc.avg == doctest::Approx(0.5));
  CHECK(two[0].mcc.std == doctest::Approx(naive_std({0.8, 0.2, 0.6, 0.4})));
  CHECK(two[0].rows == 4);
  CHECK(two[1].dataset == "Y");
  CHECK(two[1].avg_best_mcc == doctest::Approx(-0.5));
}

TEST_CASE("category rollups follow the taxonomy") {
  const auto tax = AttackTaxonomy::standard();
  std::pair<std::string, std::string> first, second;
  for (const auto& p : tax.pairs()) {
    if (first.first.empty()) {
      first = p;
    } else if (tax.lookup(p.first, p.second) != tax.lookup(first.first, first.second)) {
      second = p;
      break;
    }
  }
  REQUIRE_FALSE(second.first.empty());
  const std::vector<ExperimentTriple> t = {
      triple("L1", "KNN", 0.8, first.first, first.second), triple("L1", "SVM", 0.4, first.first, first.second),
      triple("L2", "KNN", 0.1, second.first, second.second), triple("L3", "KNN", 0.3, "NOPE", "mystery")};
  const auto r = category_rollup(t, tax);
  const auto find = [&](const std::string& name) {
    return std::find_if(r.categories.begin(), r.categories.end(), [&](const auto& c) { return c.name == name; });
  };
  const auto a = find(tax.lookup(first.first, first.second));
  REQUIRE(a != r.categories.end());
  CHECK(a->loaders == 1);
  CHECK(a->mcc.avg == doctest::Approx(0.6));
  CHECK(a->avg_best_mcc == doctest::Approx(0.8));
  const auto b = find(tax.lookup(second.first, second.second));
  REQUIRE(b != r.categories.end());
  CHECK(b->mcc.avg == doctest::Approx(0.1));
  const auto u = find(kUnmappedCategory);
  REQUIRE(u != r.categories.end());
  CHECK(u->rows == 1);
  CHECK(r.categories.back().name == kUnmappedCategory);
  CHECK_FALSE(r.warnings.empty());
  std::size_t attack_rows = 0;
  for (const auto& g : r.attacks) attack_rows += g.rows;
  CHECK(attack_rows == t.size());
}

TEST_CASE("unknowns comparison") {
  const std::vector<ExperimentTriple> single = {triple("L1", "KNN", 0.8, "X"), triple("L2", "KNN", 0.6, "X"),
                                                triple("S", "KNN", 0.5, "Z")};
  auto u1 = triple("UX", "FASTABOD", 0.7, "X", "", LoaderMode::Unknowns);
  u1.params = "k=5";
  auto u2 = triple("UX", "SOM", 0.7, "X", "", LoaderMode::Unknowns);
  u2.params = "side=10";
  const auto u3 = triple("UX", "KNN", 0.1, "X", "", LoaderMode::Unknowns);
  const auto u4 = triple("UY", "KNN", 0.2, "Y", "", LoaderMode::Unknowns);
  const auto rows = unknowns_comparison(single, {u1, u2, u3, u4});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].dataset == "X");
  REQUIRE(rows[0].single_attack);
  REQUIRE(rows[0].unknowns);
  CHECK(rows[0].single_attack->avg_mcc == doctest::Approx(0.7));
  CHECK(rows[0].unknowns->avg_mcc == doctest::Approx(0.5));
  CHECK(rows[0].best_algorithm == "FASTABOD, SOM");
  CHECK(rows[0].best_params == "k=5 | side=10");
  CHECK(rows[0].best_mcc == 0.7);
  CHECK(rows[1].dataset == "Y");
  CHECK_FALSE(rows[1].single_attack);
  CHECK(rows[2].dataset == "Z");
  CHECK_FALSE(rows[2].unknowns);

  const auto only = unknowns_comparison(single, {});
  REQUIRE(only.size() == 2);
  for (const auto& r : only) {
    CHECK(r.single_attack);
    CHECK_FALSE(r.unknowns);
  }
}

TEST_CASE("empty triples give header-only CSVs and no charts") {
  const auto dir = testing::scratch_dir("report-empty");
  const auto files = emit_reports({}, AttackTaxonomy::standard(), FamilyRegistry::standard(), dir.string());
  CHECK_FALSE(files.written.empty());
  for (const auto& entry : fs::directory_iterator(dir)) {
    CHECK(entry.path().extension() == ".csv");
    const auto text = file_text(entry.path());
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  }
}

TEST_CASE("reports are byte-identical on regeneration and charts sort by MCC") {
  std::vector<ExperimentTriple> t;
  Rng rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int l = 0; l < 3; ++l) {
    for (const auto& a : seventeen()) t.push_back(triple("L" + std::to_string(l), a, u(rng), "UNSW-NB15", "Worms"));
  }
  t.push_back(triple("UX", "KNN", 0.4, "UNSW-NB15", "", LoaderMode::Unknowns));
  const auto a = testing::scratch_dir("report-a"), b = testing::scratch_dir("report-b");
  emit_reports(t, AttackTaxonomy::standard(), FamilyRegistry::standard(), a.string());
  emit_reports(t, AttackTaxonomy::standard(), FamilyRegistry::standard(), b.string());
  std::size_t svgs = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    svgs += entry.path().extension() == ".svg";
    CHECK(file_text(entry.path()) == file_text(b / entry.path().filename()));
  }
  CHECK(svgs == 4);

  // The per-algorithm chart covers single-attack rows only.
  auto summary = algo_summary(std::vector<ExperimentTriple>(t.begin(), t.end() - 1));
  std::stable_sort(summary.begin(), summary.end(), [](const auto& x, const auto& y) { return x.avg_mcc > y.avg_mcc; });
  const auto chart = file_text(a / "algorithms.svg");
  std::size_t last = 0;
  for (const auto& s : summary) {
    const auto pos = chart.find(">" + s.algorithm + "<");
    REQUIRE(pos != std::string::npos);
    CHECK(pos > last);
    last = pos;
  }
}
