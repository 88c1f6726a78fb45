#include "adaef/oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace adaef;

namespace {

RowMatrixf random_rows(std::int64_t n, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> gauss;
  RowMatrixf rows(n, d);
  for (Eigen::Index i = 0; i < rows.size(); ++i) rows.data()[i] = gauss(rng);
  return rows;
}

// Independent reference: full sort of the exact distance list.
std::vector<Neighbor> full_sort_topk(const Eigen::RowVectorXf& q,
                                     const Dataset& ds, Metric metric, int k,
                                     const std::vector<char>* live = nullptr) {
  std::vector<Neighbor> all;
  for (std::int64_t i = 0; i < ds.size(); ++i) {
    if (live && !(*live)[i]) continue;
    all.push_back({i, distance(q, ds.row(i), metric)});
  }
  std::sort(all.begin(), all.end(), neighbor_closer);
  if (static_cast<int>(all.size()) > k) all.resize(k);
  return all;
}

}  // namespace

TEST_CASE("brute force on unit basis rows") {
  RowMatrixf rows(3, 3);
  rows << 1, 0, 0, 0, 1, 0, 0, 0, 1;
  Dataset ds(rows);
  Eigen::RowVectorXf q(3);
  q << 1, 0.1f, 0;
  const auto top = brute_force_topk(q, ds, Metric::CosineDistance, 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].id == 0);
  CHECK(top[1].id == 1);
  CHECK(top[0].dist < top[1].dist);
}

TEST_CASE("k larger than dataset returns every row sorted") {
  Dataset ds(random_rows(7, 4, 2));
  Eigen::RowVectorXf q = random_rows(1, 4, 3);
  const auto top = brute_force_topk(q, ds, Metric::InnerProduct, 50);
  REQUIRE(top.size() == 7);
  for (std::size_t i = 1; i < top.size(); ++i) {
    CHECK(neighbor_closer(top[i - 1], top[i]));
  }
}

TEST_CASE("heap selection agrees with a full sort") {
  const Dataset ds(random_rows(400, 12, 5));
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::RowVectorXf q = random_rows(1, 12, 100 + trial);
    for (Metric m : {Metric::InnerProduct, Metric::CosineDistance}) {
      const int k = 1 + static_cast<int>(rng() % 30);
      const auto got = brute_force_topk(q, ds, m, k);
      const auto want = full_sort_topk(q, ds, m, k);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].id == want[i].id);
        CHECK(got[i].dist == want[i].dist);
      }
    }
  }
}

TEST_CASE("ties break toward the smaller id") {
  RowMatrixf rows(4, 2);
  rows << 1, 0, 1, 0, 1, 0, 1, 0;  // identical rows, identical distances
  Dataset ds(rows);
  Eigen::RowVectorXf q(2);
  q << 1, 0;
  const auto top = brute_force_topk(q, ds, Metric::InnerProduct, 3);
  REQUIRE(top.size() == 3);
  CHECK(top[0].id == 0);
  CHECK(top[1].id == 1);
  CHECK(top[2].id == 2);
}

TEST_CASE("live mask filters rows") {
  const Dataset ds(random_rows(50, 4, 8));
  const Eigen::RowVectorXf q = random_rows(1, 4, 9);
  std::vector<char> live(50, 1);
  const auto unfiltered = brute_force_topk(q, ds, Metric::InnerProduct, 5);
  live[unfiltered[0].id] = 0;
  const auto filtered =
      brute_force_topk(q, ds, Metric::InnerProduct, 5, &live);
  REQUIRE(filtered.size() == 5);
  for (const auto& nb : filtered) CHECK(nb.id != unfiltered[0].id);
  CHECK(filtered[0].id == unfiltered[1].id);
  const auto want = full_sort_topk(q, ds, Metric::InnerProduct, 5, &live);
  for (std::size_t i = 0; i < filtered.size(); ++i) {
    CHECK(filtered[i].id == want[i].id);
  }
}

TEST_CASE("recall examples and properties") {
  CHECK(recall_at_k({1, 2, 3}, {1, 2, 3}, 3) == doctest::Approx(1.0));
  CHECK(recall_at_k({3, 2, 1}, {1, 2, 3}, 3) == doctest::Approx(1.0));
  CHECK(recall_at_k({1, 2, 9}, {1, 2, 3}, 3) == doctest::Approx(2.0 / 3.0));
  CHECK(recall_at_k({}, {1, 2, 3}, 3) == doctest::Approx(0.0));
  CHECK(recall_at_k({1, 2}, {1, 2, 3}, 3) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(recall_at_k({1}, {1, 2}, 3), std::invalid_argument);
}
