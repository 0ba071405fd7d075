#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "adbench/core.hpp"
#include "adbench/csv.hpp"

using namespace adbench;

TEST_CASE("point set rows and subsets") {
  auto ps = PointSet::from_rows({{1, 2}, {3, 4}, {5, 6}});
  CHECK(ps.size() == 3);
  CHECK(ps.dim() == 2);
  CHECK(ps[1][0] == 3.0);
  const std::vector<std::size_t> idx = {2, 0};
  const auto sub = ps.subset(idx);
  CHECK(sub.size() == 2);
  CHECK(sub[0][1] == 6.0);
  CHECK(sub[1][0] == 1.0);
  const std::vector<double> row = {7, 8};
  ps.push_back(row);
  CHECK(ps.size() == 4);
  CHECK(PointSet(3).empty());
}

TEST_CASE("euclidean distance") {
  const std::vector<double> a = {0, 0}, b = {3, 4};
  CHECK(squared_distance(a, b) == 25.0);
  CHECK(distance(a, b) == 5.0);
}

TEST_CASE("type-7 quantiles") {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  CHECK(quantile(v, 0.25) == doctest::Approx(25.75));
  CHECK(quantile(v, 0.75) == doctest::Approx(75.25));
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 2, 3}) == 2.5);
  CHECK(quantile({5}, 0.9) == 5.0);
}

TEST_CASE("mean and population standard deviation") {
  const std::vector<double> v = {2, 4, 4, 4, 5, 5, 7, 9};
  CHECK(mean(v) == 5.0);
  CHECK(stddev(v) == 2.0);
}

TEST_CASE("seed derivation is stable and input-sensitive") {
  CHECK(derive_seed(1, "a", "b") == derive_seed(1, "a", "b"));
  CHECK(derive_seed(1, "a", "b") != derive_seed(2, "a", "b"));
  CHECK(derive_seed(1, "a", "b") != derive_seed(1, "ab", ""));
  CHECK(mix64(0) != mix64(1));
  CHECK(hash_string("x") != hash_string("y"));
}

TEST_CASE("sampling without replacement") {
  Rng rng(3);
  const auto s = sample_without_replacement(50, 20, rng);
  CHECK(s.size() == 20);
  CHECK(std::set<std::size_t>(s.begin(), s.end()).size() == 20);
  CHECK(*std::max_element(s.begin(), s.end()) < 50);
  Rng rng2(3);
  CHECK(sample_without_replacement(5, 9, rng2).size() == 5);
}

TEST_CASE("text helpers") {
  CHECK(trim("  a b \r\n") == "a b");
  CHECK(split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
  CHECK(to_lower("DoS") == "dos");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(std::nan("")).empty());
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("csv reader handles quotes, separators and CRLF") {
  std::istringstream in("a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\r\n\n\"multi\nline\",2\n");
  csv::Reader r(in);
  csv::Record rec;
  REQUIRE(r.next(rec));
  CHECK(rec == csv::Record{"a", "b"});
  REQUIRE(r.next(rec));
  CHECK(rec == csv::Record{"x,1", "say \"hi\""});
  CHECK(r.line() == 2);
  REQUIRE(r.next(rec));
  CHECK(rec == csv::Record{"multi\nline", "2"});
  CHECK(r.line() == 4);
  CHECK_FALSE(r.next(rec));
}

TEST_CASE("csv writer round-trips") {
  const csv::Record rec = {"plain", "with,comma", "with \"quote\"", ""};
  std::ostringstream out;
  csv::write_record(out, rec);
  std::istringstream in(out.str());
  const auto back = csv::read_all(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0] == rec);
  CHECK(csv::escape("a") == "a");
}
