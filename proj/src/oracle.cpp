#include "adaef/oracle.hpp"

#include <algorithm>
#include <queue>
#include <unordered_set>

namespace adaef {

std::vector<Neighbor> brute_force_topk(
    const Eigen::Ref<const Eigen::RowVectorXf>& q, const Dataset& ds,
    Metric metric, int k, const std::vector<char>* live) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  auto worse = [](const Neighbor& a, const Neighbor& b) {
    return neighbor_closer(a, b);  // max-heap on (dist, id)
  };
  std::priority_queue<Neighbor, std::vector<Neighbor>, decltype(worse)> heap(
      worse);
  for (std::int64_t i = 0; i < ds.size(); ++i) {
    if (live && !(*live)[i]) continue;
    Neighbor cand{i, distance(q, ds.row(i), metric)};
    if (static_cast<int>(heap.size()) < k) {
      heap.push(cand);
    } else if (neighbor_closer(cand, heap.top())) {
      heap.pop();
      heap.push(cand);
    }
  }
  std::vector<Neighbor> out(heap.size());
  for (auto it = out.rbegin(); it != out.rend(); ++it) {
    *it = heap.top();
    heap.pop();
  }
  return out;
}

double recall_at_k(const std::vector<std::int64_t>& result_ids,
                   const std::vector<std::int64_t>& truth_ids, int k) {
  if (static_cast<int>(truth_ids.size()) != k) {
    throw std::invalid_argument("truth must contain exactly k ids");
  }
  std::unordered_set<std::int64_t> truth(truth_ids.begin(), truth_ids.end());
  std::int64_t hits = 0;
  for (std::int64_t id : result_ids) hits += truth.count(id);
  return static_cast<double>(hits) / k;
}

}  // namespace adaef
