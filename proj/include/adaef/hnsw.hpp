#pragma once

#include "adaef/distance.hpp"
#include "adaef/scoring.hpp"
#include "adaef/stats.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace adaef {

struct EfTable;

struct HnswParams {
  int degree_m = 16;         // max outgoing degree on upper layers; 2x at base
  int ef_construction = 200;
  std::uint64_t rng_seed = 42;
};

struct SearchResult {
  std::vector<std::int64_t> ids;  // ascending by distance, ties by id
  std::vector<float> dists;
};

struct AdaptiveResult {
  std::vector<std::int64_t> ids;
  std::vector<float> dists;
  int assigned_ef = 0;    // >= k whenever the estimator fired
  bool uncapped = false;  // distance budget never filled; ef stayed infinite
  double score = 0.0;
  int sample_size = 0;  // |D| collected
};

/// Distance sample collected by the infinite-ef phase of the adaptive
/// search, reused verbatim when scoring proxy queries offline.
struct DistanceSample {
  std::vector<float> distances;
  std::int64_t entry = -1;
  int limit = 0;  // l, the hop-bounded budget
};

class HnswIndex {
 public:
  /// Builds the index over ds (nonempty). Deterministic per rng_seed.
  HnswIndex(Dataset ds, Metric metric, HnswParams params);

  const Dataset& dataset() const { return data_; }
  Metric metric() const { return metric_; }
  const HnswParams& params() const { return params_; }
  std::int64_t node_count() const { return static_cast<std::int64_t>(links_.size()); }
  std::int64_t live_count() const { return live_count_; }
  bool is_live(std::int64_t id) const { return live_[id] != 0; }
  const std::vector<char>& live_flags() const { return live_; }
  std::int64_t entry_point() const { return entry_; }
  int max_level() const { return max_level_; }
  const std::vector<std::uint32_t>& neighbors(std::int64_t id,
                                              int level) const {
    return links_[id][level];
  }
  int node_level(std::int64_t id) const {
    return static_cast<int>(links_[id].size()) - 1;
  }

  /// Standard fixed-ef search; requires ef >= k. Returns up to
  /// min(k, live count) results.
  SearchResult search_fixed(const Eigen::Ref<const Eigen::RowVectorXf>& q,
                            int k, int ef) const;

  /// Count of nodes other than ep reachable within `hops` base-layer edges,
  /// by adjacency-only BFS.
  int two_hop_limit(std::int64_t ep, int hops = 2) const;

  /// Adaptive search: infinite-ef phase collecting l distances, then
  /// ESTIMATE-EF and truncation of the result list.
  AdaptiveResult adaptive_search(const Eigen::Ref<const Eigen::RowVectorXf>& q,
                                 int k, double target_recall,
                                 const DatasetStats& stats,
                                 const EfTable& table,
                                 const ScoringConfig& cfg) const;

  /// The distance list the adaptive search would collect for q, identical
  /// traversal order; stops as soon as the budget is filled.
  DistanceSample collect_distance_sample(
      const Eigen::Ref<const Eigen::RowVectorXf>& q, int hops) const;

  /// Standard HNSW insertion; returns the new node id.
  std::int64_t insert(const Eigen::Ref<const Eigen::RowVectorXf>& v);

  /// Tombstones the node: excluded from all results, edges lazily skipped.
  void remove(std::int64_t id);

  void save(const std::string& path) const;
  static HnswIndex load(const std::string& path, Dataset ds);

 private:
  HnswIndex() = default;

  int base_degree_cap() const { return 2 * params_.degree_m; }
  int random_level();
  float dist_to(const Eigen::Ref<const Eigen::RowVectorXf>& q,
                std::int64_t id) const {
    return distance(q, data_.row(id), metric_);
  }
  std::int64_t greedy_descend(const Eigen::Ref<const Eigen::RowVectorXf>& q,
                              std::int64_t ep, int from_level,
                              int to_level) const;
  void insert_node(std::int64_t id);

  struct BaseSearchOut;
  void base_search(const Eigen::Ref<const Eigen::RowVectorXf>& q,
                   std::int64_t ep, std::int64_t initial_ef, int sample_limit,
                   const std::function<std::int64_t(const std::vector<float>&)>*
                       estimator,
                   bool stop_after_sample, BaseSearchOut& out,
                   int level = 0) const;
  std::vector<std::pair<float, std::uint32_t>> select_neighbors(
      const Eigen::Ref<const Eigen::RowVectorXf>& q,
      const std::set<std::pair<float, std::uint32_t>>& candidates,
      int max_count) const;
  void shrink_links(std::int64_t id, int level, int cap);

  Dataset data_;
  Metric metric_ = Metric::CosineDistance;
  HnswParams params_;
  double level_mult_ = 0.0;
  std::vector<std::vector<std::vector<std::uint32_t>>> links_;
  std::vector<char> live_;
  std::int64_t live_count_ = 0;
  std::int64_t entry_ = -1;
  int max_level_ = -1;
  std::mt19937_64 rng_;
};

}  // namespace adaef
