#include "adaef/synthetic.hpp"

#include <doctest.h>

#include <numeric>

using namespace adaef;

TEST_CASE("uniform cluster sizes") {
  CHECK(cluster_sizes(8, 4, 0.0) ==
        std::vector<std::int64_t>{2, 2, 2, 2});
  // 10 over 4 clusters: remainder of 2 goes to the lowest ranks
  CHECK(cluster_sizes(10, 4, 0.0) ==
        std::vector<std::int64_t>{3, 3, 2, 2});
}

TEST_CASE("zipfian cluster sizes, harmonic example") {
  // weights 1, 1/2, 1/3, 1/4 over n=100: exact shares 48, 24, 16, 12
  CHECK(cluster_sizes(100, 4, 1.0) ==
        std::vector<std::int64_t>{48, 24, 16, 12});
}

TEST_CASE("cluster sizes sum to n and are non-increasing") {
  for (double s : {0.0, 0.5, 1.0, 2.0}) {
    const auto sizes = cluster_sizes(200001, 37, s);
    REQUIRE(sizes.size() == 37);
    CHECK(std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0}) ==
          200001);
    for (std::size_t i = 1; i < sizes.size(); ++i) {
      CHECK(sizes[i] <= sizes[i - 1]);
    }
  }
}

TEST_CASE("generation is deterministic in the seed") {
  SyntheticSpec spec;
  spec.n = 500;
  spec.dim = 8;
  spec.clusters = 10;
  spec.num_queries = 20;
  spec.rng_seed = 99;
  const Generated a = generate(spec);
  const Generated b = generate(spec);
  CHECK((a.data.rows().array() == b.data.rows().array()).all());
  CHECK((a.queries.array() == b.queries.array()).all());

  spec.rng_seed = 100;
  const Generated c = generate(spec);
  CHECK_FALSE((a.data.rows().array() == c.data.rows().array()).all());
}

TEST_CASE("generated data has the requested shape and is finite") {
  SyntheticSpec spec;
  spec.n = 1000;
  spec.dim = 16;
  spec.clusters = 8;
  spec.zipf_exponent = 1.0;
  spec.num_queries = 50;
  spec.query_jitter = 0.01;
  const Generated g = generate(spec);
  CHECK(g.data.size() == 1000);
  CHECK(g.data.dim() == 16);
  CHECK(g.queries.rows() == 50);
  CHECK(g.queries.cols() == 16);
  CHECK(g.data.rows().array().isFinite().all());
  CHECK(g.queries.array().isFinite().all());
  CHECK_NOTHROW(g.data.validate(Metric::CosineDistance));
}

TEST_CASE("rows stay near their cluster centers") {
  SyntheticSpec spec;
  spec.n = 400;
  spec.dim = 4;
  spec.clusters = 4;
  spec.cluster_std = 1e-4;
  spec.center_box = 10.0;
  const Generated g = generate(spec);
  // with tiny in-cluster noise each consecutive uniform block is nearly
  // constant, so the rows take (about) `clusters` distinct values
  const auto sizes = cluster_sizes(spec.n, spec.clusters, 0.0);
  std::int64_t offset = 0;
  for (std::int64_t size : sizes) {
    const Eigen::RowVectorXf first = g.data.row(offset);
    for (std::int64_t i = offset; i < offset + size; ++i) {
      CHECK((g.data.row(i) - first).norm() < 0.01f);
    }
    offset += size;
  }
}
