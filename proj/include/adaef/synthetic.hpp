#pragma once

#include "adaef/types.hpp"

#include <cstdint>
#include <vector>

namespace adaef {

/// Clustered Gaussian generator. zipf_exponent = 0 gives (near-)equal
/// cluster sizes; exponent s > 0 makes size(rank) proportional to rank^-s,
/// largest first.
struct SyntheticSpec {
  std::int64_t n = 200000;
  int dim = 64;
  int clusters = 256;
  double zipf_exponent = 0.0;
  double cluster_std = 0.2;
  double center_box = 1.0;  // centers uniform in [-box, box]^d
  std::int64_t num_queries = 1000;
  double query_jitter = 0.0;  // Gaussian std added to sampled query rows
  std::uint64_t rng_seed = 1;
};

/// Cluster sizes, largest-remainder rounding with ties resolved toward the
/// lower rank. Non-increasing; sums to n.
std::vector<std::int64_t> cluster_sizes(std::int64_t n, int clusters,
                                        double zipf_exponent);

struct Generated {
  Dataset data;
  RowMatrixf queries;
};

Generated generate(const SyntheticSpec& spec);

}  // namespace adaef
