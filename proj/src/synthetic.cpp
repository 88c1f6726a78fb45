#include "adaef/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace adaef {

std::vector<std::int64_t> cluster_sizes(std::int64_t n, int clusters,
                                        double zipf_exponent) {
  if (clusters < 1 || clusters > n) {
    throw std::invalid_argument("clusters must lie in [1, n]");
  }
  std::vector<double> weights(clusters);
  for (int r = 0; r < clusters; ++r) {
    weights[r] = std::pow(static_cast<double>(r + 1), -zipf_exponent);
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);

  std::vector<std::int64_t> sizes(clusters);
  std::vector<std::pair<double, int>> fractional(clusters);
  std::int64_t assigned = 0;
  for (int r = 0; r < clusters; ++r) {
    const double share = static_cast<double>(n) * weights[r] / total;
    sizes[r] = static_cast<std::int64_t>(std::floor(share));
    fractional[r] = {share - std::floor(share), r};
    assigned += sizes[r];
  }
  // Largest remainder, ties to the lower rank.
  std::stable_sort(fractional.begin(), fractional.end(),
                   [](const auto& a, const auto& b) {
                     return a.first > b.first;
                   });
  for (std::int64_t i = 0; i < n - assigned; ++i) {
    ++sizes[fractional[i].second];
  }
  return sizes;
}

Generated generate(const SyntheticSpec& spec) {
  if (spec.n < 1 || spec.dim < 1 || spec.num_queries < 0 ||
      spec.cluster_std < 0.0 || spec.center_box <= 0.0) {
    throw std::invalid_argument("invalid synthetic spec");
  }
  const std::vector<std::int64_t> sizes =
      cluster_sizes(spec.n, spec.clusters, spec.zipf_exponent);

  std::mt19937_64 rng(spec.rng_seed);
  std::uniform_real_distribution<double> box(-spec.center_box,
                                             spec.center_box);
  std::normal_distribution<double> noise(0.0, spec.cluster_std);

  RowMatrixf rows(spec.n, spec.dim);
  std::int64_t next = 0;
  for (int c = 0; c < spec.clusters; ++c) {
    Eigen::RowVectorXf center(spec.dim);
    for (int j = 0; j < spec.dim; ++j) {
      center[j] = static_cast<float>(box(rng));
    }
    for (std::int64_t i = 0; i < sizes[c]; ++i, ++next) {
      for (int j = 0; j < spec.dim; ++j) {
        rows(next, j) = center[j] + static_cast<float>(noise(rng));
      }
    }
  }

  RowMatrixf queries(spec.num_queries, spec.dim);
  std::uniform_int_distribution<std::int64_t> pick(0, spec.n - 1);
  std::normal_distribution<double> jitter(0.0, spec.query_jitter);
  for (std::int64_t i = 0; i < spec.num_queries; ++i) {
    queries.row(i) = rows.row(pick(rng));
    if (spec.query_jitter > 0.0) {
      for (int j = 0; j < spec.dim; ++j) {
        queries(i, j) += static_cast<float>(jitter(rng));
      }
    }
  }

  Generated out;
  out.data = Dataset(std::move(rows));
  out.queries = std::move(queries);
  return out;
}

}  // namespace adaef
