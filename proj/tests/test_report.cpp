#include "adaef/report.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

using namespace adaef;

TEST_CASE("nearest-rank percentile") {
  std::vector<double> values(100);
  std::iota(values.begin(), values.end(), 1.0);  // 1..100
  CHECK(percentile(values, 5.0) == doctest::Approx(5.0));
  CHECK(percentile(values, 50.0) == doctest::Approx(50.0));
  CHECK(percentile(values, 99.5) == doctest::Approx(100.0));
  CHECK(percentile(values, 1.0) == doctest::Approx(1.0));
  CHECK(percentile(values, 0.5) == doctest::Approx(1.0));  // rank ceil(0.5)=1

  CHECK(percentile({42.0}, 1.0) == doctest::Approx(42.0));
  CHECK(percentile({42.0}, 99.0) == doctest::Approx(42.0));
  CHECK(percentile({3.0, 3.0, 3.0}, 37.0) == doctest::Approx(3.0));
  // order-insensitive; ranks ceil(3p/100)
  CHECK(percentile({9.0, 1.0, 5.0}, 33.0) == doctest::Approx(1.0));
  CHECK(percentile({9.0, 1.0, 5.0}, 34.0) == doctest::Approx(5.0));
  CHECK(percentile({9.0, 1.0, 5.0}, 67.0) == doctest::Approx(9.0));
  CHECK_THROWS_AS(percentile({}, 5.0), std::invalid_argument);
  CHECK_THROWS_AS(percentile({1.0}, 100.0), std::invalid_argument);
}

TEST_CASE("aggregate recomputes summary fields") {
  std::vector<QueryRow> rows;
  for (int i = 0; i < 20; ++i) {
    QueryRow r;
    r.query_id = i;
    r.recall = i < 19 ? 1.0 : 0.0;
    r.latency_us = 10.0 + i;
    r.ef = 100 + i;
    r.score = 50.0;
    rows.push_back(r);
  }
  const RunReport rep = aggregate(rows, 1.5);
  CHECK(rep.mean_recall == doctest::Approx(19.0 / 20.0));
  CHECK(rep.mean_ef == doctest::Approx(100.0 + 19.0 / 2.0));
  CHECK(rep.total_time_s == doctest::Approx(1.5));
  // the single zero-recall row sits at both tail percentiles of n=20
  CHECK(rep.p5_recall == doctest::Approx(0.0));
  CHECK(rep.p1_recall == doctest::Approx(0.0));
  CHECK(rep.rows.size() == 20);
}

TEST_CASE("csv round trip including nan scores") {
  std::vector<QueryRow> rows(3);
  rows[0] = {0, 0.9, 123.456, 150, false, 87.25};
  rows[1] = {1, 1.0, 88.0, 5000, true, 12.0};
  rows[2] = {2, 0.5, 1.0, 10, false,
             std::numeric_limits<double>::quiet_NaN()};
  const std::string path = "/tmp/adaef_test_report.csv";
  write_report_csv(path, rows);
  const std::vector<QueryRow> loaded = read_report_csv(path);
  REQUIRE(loaded.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(loaded[i].query_id == rows[i].query_id);
    CHECK(loaded[i].recall == doctest::Approx(rows[i].recall));
    CHECK(loaded[i].latency_us == doctest::Approx(rows[i].latency_us));
    CHECK(loaded[i].ef == rows[i].ef);
    CHECK(loaded[i].uncapped == rows[i].uncapped);
  }
  CHECK(loaded[0].score == doctest::Approx(rows[0].score));
  CHECK(std::isnan(loaded[2].score));
  std::remove(path.c_str());
}

TEST_CASE("json report is written and parseable") {
  std::vector<QueryRow> rows(2);
  rows[0] = {0, 1.0, 10.0, 100, false, 90.0};
  rows[1] = {1, 0.8, 20.0, 200, false, 40.0};
  const RunReport rep = aggregate(rows, 0.03);
  const std::string path = "/tmp/adaef_test_report.json";
  write_report_json(path, rep);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("mean_recall") != std::string::npos);
  CHECK(text.find("ef_histogram") != std::string::npos);
  std::remove(path.c_str());
}
