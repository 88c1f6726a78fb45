#pragma once

#include "adaef/oracle.hpp"
#include "adaef/scoring.hpp"
#include "adaef/stats.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace adaef {

class HnswIndex;

struct EfRecall {
  int ef = 0;
  double recall = 0.0;  // group-average recall as measured
};

/// Exact top-k of one proxy query, maintained incrementally across updates.
struct ProxyTruth {
  std::vector<Neighbor> topk;  // ascending (distance, id)
};

struct EfTable {
  std::map<int, std::vector<EfRecall>> groups;  // score group -> probed pairs
  double wae = 0.0;  // weighted average ef across groups
  double build_target_recall = 0.95;
  int build_k = 10;
  int ef_cap = 5000;
  std::vector<std::int64_t> sample_ids;  // proxy vector ids
  std::vector<ProxyTruth> proxy_truth;   // parallel to sample_ids
};

struct EfEstimate {
  int ef = 0;
  double score = 0.0;
};

/// Probing schedule: k, 1.25k, 1.5k, 2k, 3k, 4k, 5k, then +k steps, clamped
/// to ef_cap; strictly increasing.
std::vector<int> probe_ladder(int k, int ef_cap);

EfTable build_table(const HnswIndex& idx, const DatasetStats& stats,
                    const ScoringConfig& cfg, int sample_size, int k,
                    double target_recall, int ef_cap, std::uint64_t rng_seed);

/// Table lookup of ESTIMATE-EF: picks the row for the floored score
/// (nearest existing group on a miss, ties to the lower key), scans the
/// ascending (ef, recall) pairs, and floors the outcome by WAE.
int select_ef(const EfTable& table, double score, double target_recall);

int estimate_ef(const Eigen::Ref<const Eigen::RowVectorXf>& q,
                const std::vector<float>& distances, double target_recall,
                const DatasetStats& stats, const EfTable& table,
                const ScoringConfig& cfg);

EfEstimate estimate_ef_detail(const Eigen::Ref<const Eigen::RowVectorXf>& q,
                              const std::vector<float>& distances,
                              double target_recall, const DatasetStats& stats,
                              const EfTable& table, const ScoringConfig& cfg);

/// Rebuilds the table after an update batch was applied to the index.
/// Proxy ground truths are maintained incrementally: inserted rows are
/// merged into each proxy's top-k, deleted ids are dropped and backfilled
/// by brute force only when a list shrinks; deleted proxies are replaced by
/// fresh uniform samples.
EfTable refresh_table(const EfTable& prior, const HnswIndex& idx,
                      const DatasetStats& stats, const ScoringConfig& cfg,
                      const std::vector<std::int64_t>& inserted_ids,
                      const std::vector<std::int64_t>& deleted_ids,
                      std::uint64_t rng_seed);

void save_table(const std::string& path, const EfTable& table);
EfTable load_table(const std::string& path);

}  // namespace adaef
