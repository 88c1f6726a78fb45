#pragma once

#include "adaef/distance.hpp"

#include <vector>

namespace adaef {

struct Neighbor {
  std::int64_t id = -1;
  float dist = 0.0f;  // internal smaller-is-closer value
};

/// Orders by distance, then by id at equal distance. This tie-break is the
/// global convention shared by the oracle, the index, and the incremental
/// ground-truth maintenance.
inline bool neighbor_closer(const Neighbor& a, const Neighbor& b) {
  return a.dist < b.dist || (a.dist == b.dist && a.id < b.id);
}

/// Exact top-k by heap selection over every row (optionally only rows with
/// live[id] != 0). Returns min(k, candidate count) neighbors ascending.
std::vector<Neighbor> brute_force_topk(
    const Eigen::Ref<const Eigen::RowVectorXf>& q, const Dataset& ds,
    Metric metric, int k, const std::vector<char>* live = nullptr);

/// |result ∩ truth| / k, order-insensitive. truth must hold exactly k ids.
double recall_at_k(const std::vector<std::int64_t>& result_ids,
                   const std::vector<std::int64_t>& truth_ids, int k);

}  // namespace adaef
