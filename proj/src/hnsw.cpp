#include "adaef/hnsw.hpp"

#include "adaef/eftable.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

namespace adaef {

namespace {

constexpr std::int64_t kInfiniteEf = std::numeric_limits<std::int64_t>::max();

using ScoredNode = std::pair<float, std::uint32_t>;  // (distance, id)

// Min-heap on (distance, id): closest first, smaller id on ties.
struct FurtherFirst {
  bool operator()(const ScoredNode& a, const ScoredNode& b) const {
    return a > b;
  }
};

}  // namespace

struct HnswIndex::BaseSearchOut {
  // Live results ascending by (distance, id); last element is the furthest.
  std::set<ScoredNode> results;
  std::vector<float> sample;
  std::int64_t assigned_ef = -1;  // -1 while the estimator has not fired
};

HnswIndex::HnswIndex(Dataset ds, Metric metric, HnswParams params)
    : data_(std::move(ds)), metric_(metric), params_(params) {
  if (data_.empty()) throw std::invalid_argument("empty dataset");
  if (params_.degree_m < 2) throw std::invalid_argument("degree_m must be >= 2");
  if (params_.ef_construction < params_.degree_m) {
    throw std::invalid_argument("ef_construction must be >= degree_m");
  }
  data_.validate(metric_);
  level_mult_ = 1.0 / std::log(static_cast<double>(params_.degree_m));
  rng_.seed(params_.rng_seed);
  const std::int64_t n = data_.size();
  links_.reserve(n);
  live_.reserve(n);
  for (std::int64_t i = 0; i < n; ++i) {
    links_.emplace_back();
    live_.push_back(1);
    ++live_count_;
    insert_node(i);
  }
}

int HnswIndex::random_level() {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u = unit(rng_);
  if (u <= 0.0) u = std::numeric_limits<double>::min();
  const int level = static_cast<int>(-std::log(u) * level_mult_);
  return std::min(level, 63);
}

std::int64_t HnswIndex::greedy_descend(
    const Eigen::Ref<const Eigen::RowVectorXf>& q, std::int64_t ep,
    int from_level, int to_level) const {
  std::int64_t cur = ep;
  float cur_dist = dist_to(q, cur);
  for (int level = from_level; level > to_level; --level) {
    bool improved = true;
    while (improved) {
      improved = false;
      if (level >= static_cast<int>(links_[cur].size())) continue;
      for (std::uint32_t nb : links_[cur][level]) {
        const float d = dist_to(q, nb);
        if (d < cur_dist) {
          cur = nb;
          cur_dist = d;
          improved = true;
        }
      }
    }
  }
  return cur;
}

void HnswIndex::base_search(
    const Eigen::Ref<const Eigen::RowVectorXf>& q, std::int64_t ep,
    std::int64_t initial_ef, int sample_limit,
    const std::function<std::int64_t(const std::vector<float>&)>* estimator,
    bool stop_after_sample, BaseSearchOut& out, int level) const {
  std::int64_t ef = initial_ef;
  std::vector<char> visited(links_.size(), 0);
  std::priority_queue<ScoredNode, std::vector<ScoredNode>, FurtherFirst>
      candidates;
  auto& results = out.results;
  auto& sample = out.sample;

  const float ep_dist = dist_to(q, ep);
  visited[ep] = 1;
  candidates.emplace(ep_dist, static_cast<std::uint32_t>(ep));
  if (live_[ep]) results.emplace(ep_dist, static_cast<std::uint32_t>(ep));
  if (sample_limit > 0) {
    sample.push_back(ep_dist);
    if (stop_after_sample &&
        static_cast<int>(sample.size()) >= sample_limit) {
      return;
    }
  }

  while (!candidates.empty()) {
    const ScoredNode c = candidates.top();
    candidates.pop();
    if (!results.empty() &&
        static_cast<std::int64_t>(results.size()) >= ef &&
        c.first > results.rbegin()->first) {
      break;
    }
    for (std::uint32_t e : links_[c.second][level]) {
      if (visited[e]) continue;
      visited[e] = 1;
      const float d = dist_to(q, e);
      const bool admit =
          static_cast<std::int64_t>(results.size()) < ef ||
          (!results.empty() && d < results.rbegin()->first);
      if (admit) {
        candidates.emplace(d, e);
        if (live_[e]) {
          results.emplace(d, e);
          while (static_cast<std::int64_t>(results.size()) > ef) {
            results.erase(std::prev(results.end()));
          }
        }
      }
      if (static_cast<int>(sample.size()) < sample_limit) {
        sample.push_back(d);
        if (static_cast<int>(sample.size()) == sample_limit) {
          if (stop_after_sample) return;
          if (estimator) {
            ef = (*estimator)(sample);
            out.assigned_ef = ef;
            while (static_cast<std::int64_t>(results.size()) > ef) {
              results.erase(std::prev(results.end()));
            }
          }
        }
      }
    }
  }
}

SearchResult HnswIndex::search_fixed(
    const Eigen::Ref<const Eigen::RowVectorXf>& q, int k, int ef) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (ef < k) throw std::invalid_argument("ef must be >= k");
  if (q.size() != data_.dim()) {
    throw std::invalid_argument("query dimension mismatch");
  }
  SearchResult res;
  if (live_count_ == 0) return res;

  const std::int64_t ep = greedy_descend(q, entry_, max_level_, 0);
  BaseSearchOut out;
  base_search(q, ep, ef, /*sample_limit=*/0, nullptr, false, out);
  for (const ScoredNode& s : out.results) {
    if (static_cast<int>(res.ids.size()) >= k) break;
    res.ids.push_back(s.second);
    res.dists.push_back(s.first);
  }
  return res;
}

int HnswIndex::two_hop_limit(std::int64_t ep, int hops) const {
  std::vector<char> seen(links_.size(), 0);
  seen[ep] = 1;
  std::vector<std::uint32_t> frontier{static_cast<std::uint32_t>(ep)};
  int count = 0;
  for (int hop = 0; hop < hops && !frontier.empty(); ++hop) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t u : frontier) {
      for (std::uint32_t v : links_[u][0]) {
        if (seen[v]) continue;
        seen[v] = 1;
        ++count;
        next.push_back(v);
      }
    }
    frontier = std::move(next);
  }
  return count;
}

DistanceSample HnswIndex::collect_distance_sample(
    const Eigen::Ref<const Eigen::RowVectorXf>& q, int hops) const {
  DistanceSample out;
  if (links_.empty()) return out;
  out.entry = greedy_descend(q, entry_, max_level_, 0);
  out.limit = two_hop_limit(out.entry, hops);
  BaseSearchOut search_out;
  base_search(q, out.entry, kInfiniteEf, out.limit, nullptr,
              /*stop_after_sample=*/true, search_out);
  out.distances = std::move(search_out.sample);
  return out;
}

AdaptiveResult HnswIndex::adaptive_search(
    const Eigen::Ref<const Eigen::RowVectorXf>& q, int k, double target_recall,
    const DatasetStats& stats, const EfTable& table,
    const ScoringConfig& cfg) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (stats.metric != metric_) {
    throw std::invalid_argument("stats metric does not match index metric");
  }
  if (table.groups.empty()) throw std::invalid_argument("empty ef table");

  AdaptiveResult res;
  res.score = std::numeric_limits<double>::quiet_NaN();
  if (live_count_ == 0) return res;

  const std::int64_t ep = greedy_descend(q, entry_, max_level_, 0);
  const int limit = two_hop_limit(ep, cfg.hops);

  std::function<std::int64_t(const std::vector<float>&)> estimator =
      [&](const std::vector<float>& sample) -> std::int64_t {
    const EfEstimate est =
        estimate_ef_detail(q, sample, target_recall, stats, table, cfg);
    res.score = est.score;
    return std::max<std::int64_t>(est.ef, k);
  };

  BaseSearchOut out;
  base_search(q, ep, kInfiniteEf, limit, &estimator, false, out);
  res.sample_size = static_cast<int>(out.sample.size());
  if (out.assigned_ef >= 0) {
    res.assigned_ef = static_cast<int>(out.assigned_ef);
  } else {
    res.uncapped = true;  // the sample budget never filled
  }
  for (const ScoredNode& s : out.results) {
    if (static_cast<int>(res.ids.size()) >= k) break;
    res.ids.push_back(s.second);
    res.dists.push_back(s.first);
  }
  return res;
}

void HnswIndex::insert_node(std::int64_t id) {
  const int level = random_level();
  links_[id].resize(level + 1);
  if (entry_ < 0) {
    entry_ = id;
    max_level_ = level;
    return;
  }

  const auto q = data_.row(id);
  std::int64_t ep = greedy_descend(q, entry_, max_level_, level);
  for (int lc = std::min(level, max_level_); lc >= 0; --lc) {
    BaseSearchOut out;
    base_search(q, ep, params_.ef_construction, 0, nullptr, false, out, lc);
    const int cap = lc == 0 ? base_degree_cap() : params_.degree_m;
    std::vector<ScoredNode> picked =
        select_neighbors(q, out.results, params_.degree_m);
    auto& own = links_[id][lc];
    own.clear();
    for (const ScoredNode& s : picked) own.push_back(s.second);
    std::sort(own.begin(), own.end());

    for (const ScoredNode& s : picked) {
      auto& back = links_[s.second][lc];
      back.push_back(static_cast<std::uint32_t>(id));
      if (static_cast<int>(back.size()) > cap) {
        shrink_links(s.second, lc, cap);
      } else {
        std::sort(back.begin(), back.end());
      }
    }
    if (!picked.empty()) ep = picked.front().second;
  }
  if (level > max_level_) {
    entry_ = id;
    max_level_ = level;
  }
}

std::int64_t HnswIndex::insert(
    const Eigen::Ref<const Eigen::RowVectorXf>& v) {
  if (v.size() != data_.dim()) {
    throw std::invalid_argument("dimension mismatch in insert");
  }
  RowMatrixf batch(1, data_.dim());
  batch.row(0) = v;
  Dataset tmp(batch);
  tmp.validate(metric_);
  data_.append(batch);
  const std::int64_t id = data_.size() - 1;
  links_.emplace_back();
  live_.push_back(1);
  ++live_count_;
  insert_node(id);
  return id;
}

void HnswIndex::remove(std::int64_t id) {
  if (id < 0 || id >= node_count() || !live_[id]) {
    throw std::invalid_argument("unknown or already removed id");
  }
  live_[id] = 0;
  --live_count_;
}

std::vector<ScoredNode> HnswIndex::select_neighbors(
    const Eigen::Ref<const Eigen::RowVectorXf>& q,
    const std::set<ScoredNode>& candidates, int max_count) const {
  // HNSW heuristic: keep a candidate only if it is closer to q than to any
  // already selected neighbor, preserving edge diversity. Pruned candidates
  // backfill free slots afterwards; without this, tightly clustered data
  // loses its inter-cluster bridges and the base graph disconnects.
  std::vector<ScoredNode> selected;
  std::vector<ScoredNode> pruned;
  for (const ScoredNode& cand : candidates) {
    if (static_cast<int>(selected.size()) >= max_count) break;
    bool keep = true;
    for (const ScoredNode& s : selected) {
      const float to_selected =
          distance(data_.row(cand.second), data_.row(s.second), metric_);
      if (to_selected < cand.first) {
        keep = false;
        break;
      }
    }
    if (keep) {
      selected.push_back(cand);
    } else {
      pruned.push_back(cand);
    }
  }
  for (const ScoredNode& cand : pruned) {
    if (static_cast<int>(selected.size()) >= max_count) break;
    selected.push_back(cand);
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

void HnswIndex::shrink_links(std::int64_t id, int level, int cap) {
  const auto center = data_.row(id);
  std::set<ScoredNode> candidates;
  for (std::uint32_t nb : links_[id][level]) {
    candidates.emplace(dist_to(center, nb), nb);
  }
  std::vector<ScoredNode> picked = select_neighbors(center, candidates, cap);
  auto& out = links_[id][level];
  out.clear();
  for (const ScoredNode& s : picked) out.push_back(s.second);
  std::sort(out.begin(), out.end());
}

namespace {
constexpr char kIndexMagic[8] = {'A', 'D', 'A', 'I', 'D', 'X', '0', '1'};

template <typename T>
void write_pod(std::ofstream& f, const T& value) {
  f.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& f, T& value) {
  f.read(reinterpret_cast<char*>(&value), sizeof(T));
}
}  // namespace

// Snapshot layout (little-endian):
//   magic "ADAIDX01"
//   u8 metric, u32 dim, i64 node count n, i32 degree_m, i32 ef_construction,
//   u64 rng_seed, i32 max_level, i64 entry point
//   u32 rng state length, then that many bytes (mt19937_64 stream state)
//   n bytes of live flags
//   per node: u32 level count; per level: u32 edge count, then that many
//   u32 deltas between consecutive ascending neighbor ids.
void HnswIndex::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(kIndexMagic, sizeof(kIndexMagic));
  write_pod(f, static_cast<std::uint8_t>(metric_));
  write_pod(f, static_cast<std::uint32_t>(data_.dim()));
  write_pod(f, static_cast<std::int64_t>(node_count()));
  write_pod(f, static_cast<std::int32_t>(params_.degree_m));
  write_pod(f, static_cast<std::int32_t>(params_.ef_construction));
  write_pod(f, params_.rng_seed);
  write_pod(f, static_cast<std::int32_t>(max_level_));
  write_pod(f, entry_);

  std::ostringstream rng_state;
  rng_state << rng_;
  const std::string rng_str = rng_state.str();
  write_pod(f, static_cast<std::uint32_t>(rng_str.size()));
  f.write(rng_str.data(), static_cast<std::streamsize>(rng_str.size()));

  f.write(live_.data(), static_cast<std::streamsize>(live_.size()));
  for (const auto& levels : links_) {
    write_pod(f, static_cast<std::uint32_t>(levels.size()));
    for (const auto& ids : levels) {
      // Lists are kept sorted ascending, so delta encoding applies directly.
      write_pod(f, static_cast<std::uint32_t>(ids.size()));
      std::uint32_t prev = 0;
      for (std::uint32_t id : ids) {
        write_pod(f, static_cast<std::uint32_t>(id - prev));
        prev = id;
      }
    }
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

HnswIndex HnswIndex::load(const std::string& path, Dataset ds) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kIndexMagic, 8) != 0) {
    throw std::runtime_error("bad index file: " + path);
  }
  HnswIndex idx;
  std::uint8_t metric = 0;
  std::uint32_t dim = 0;
  std::int64_t n = 0;
  std::int32_t degree_m = 0, ef_construction = 0, max_level = 0;
  read_pod(f, metric);
  read_pod(f, dim);
  read_pod(f, n);
  read_pod(f, degree_m);
  read_pod(f, ef_construction);
  read_pod(f, idx.params_.rng_seed);
  read_pod(f, max_level);
  read_pod(f, idx.entry_);

  idx.metric_ = static_cast<Metric>(metric);
  idx.params_.degree_m = degree_m;
  idx.params_.ef_construction = ef_construction;
  idx.max_level_ = max_level;
  idx.level_mult_ = 1.0 / std::log(static_cast<double>(degree_m));

  if (ds.size() != n || ds.dim() != static_cast<int>(dim)) {
    throw std::runtime_error("dataset does not match index snapshot");
  }
  idx.data_ = std::move(ds);

  std::uint32_t rng_len = 0;
  read_pod(f, rng_len);
  std::string rng_str(rng_len, '\0');
  f.read(rng_str.data(), rng_len);
  std::istringstream(rng_str) >> idx.rng_;

  idx.live_.resize(n);
  f.read(idx.live_.data(), n);
  idx.live_count_ = std::count(idx.live_.begin(), idx.live_.end(), 1);

  idx.links_.resize(n);
  for (std::int64_t i = 0; i < n; ++i) {
    std::uint32_t num_levels = 0;
    read_pod(f, num_levels);
    idx.links_[i].resize(num_levels);
    for (std::uint32_t lvl = 0; lvl < num_levels; ++lvl) {
      std::uint32_t count = 0;
      read_pod(f, count);
      auto& ids = idx.links_[i][lvl];
      ids.resize(count);
      std::uint32_t prev = 0;
      for (std::uint32_t j = 0; j < count; ++j) {
        std::uint32_t delta = 0;
        read_pod(f, delta);
        prev += delta;
        ids[j] = prev;
      }
    }
  }
  if (!f) throw std::runtime_error("truncated index file: " + path);
  return idx;
}

}  // namespace adaef
