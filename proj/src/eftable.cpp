#include "adaef/eftable.hpp"

#include "adaef/hnsw.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <unordered_set>

namespace adaef {

namespace {

using json = nlohmann::json;

std::vector<std::int64_t> truth_ids(const ProxyTruth& truth) {
  std::vector<std::int64_t> ids;
  ids.reserve(truth.topk.size());
  for (const Neighbor& nb : truth.topk) ids.push_back(nb.id);
  return ids;
}

double proxy_score(const HnswIndex& idx, const DatasetStats& stats,
                   const ScoringConfig& cfg, std::int64_t proxy_id) {
  const auto row = idx.dataset().row(proxy_id);
  const DistanceSample sample = idx.collect_distance_sample(row, cfg.hops);
  const FdlParams params =
      to_internal(estimate_fdl_params(row, stats), stats.metric);
  return score_distances(sample.distances, params, cfg);
}

/// Steps shared by initial construction and refresh: score and group the
/// proxies, probe the ef ladder per group until the target recall is met,
/// and summarize with the weighted average ef.
void probe_groups(const HnswIndex& idx, const DatasetStats& stats,
                  const ScoringConfig& cfg, EfTable& table) {
  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < table.sample_ids.size(); ++i) {
    const double score = proxy_score(idx, stats, cfg, table.sample_ids[i]);
    members[static_cast<int>(std::floor(score))].push_back(i);
  }

  const std::vector<int> ladder = probe_ladder(table.build_k, table.ef_cap);
  table.groups.clear();
  double weighted_sum = 0.0;
  for (const auto& [group, proxies] : members) {
    std::vector<EfRecall> pairs;
    int meeting_ef = -1;
    for (int ef : ladder) {
      double recall_sum = 0.0;
      for (std::size_t p : proxies) {
        const auto row = idx.dataset().row(table.sample_ids[p]);
        const SearchResult res = idx.search_fixed(row, table.build_k, ef);
        const std::vector<std::int64_t> truth =
            truth_ids(table.proxy_truth[p]);
        recall_sum += recall_at_k(res.ids, truth,
                                  static_cast<int>(truth.size()));
      }
      const double avg = recall_sum / static_cast<double>(proxies.size());
      pairs.push_back({ef, avg});
      if (avg >= table.build_target_recall) {
        meeting_ef = ef;
        break;
      }
    }
    if (meeting_ef < 0) meeting_ef = pairs.back().ef;
    weighted_sum += static_cast<double>(proxies.size()) * meeting_ef;
    table.groups[group] = std::move(pairs);
  }
  table.wae = weighted_sum / static_cast<double>(table.sample_ids.size());
}

ProxyTruth exact_truth(const HnswIndex& idx, std::int64_t proxy_id, int k) {
  ProxyTruth truth;
  truth.topk = brute_force_topk(idx.dataset().row(proxy_id), idx.dataset(),
                                idx.metric(), k, &idx.live_flags());
  return truth;
}

std::vector<std::int64_t> sample_live_ids(const HnswIndex& idx, int count,
                                          std::mt19937_64& rng,
                                          const std::unordered_set<std::int64_t>&
                                              exclude) {
  std::vector<std::int64_t> pool;
  pool.reserve(idx.node_count());
  for (std::int64_t i = 0; i < idx.node_count(); ++i) {
    if (idx.is_live(i) && !exclude.count(i)) pool.push_back(i);
  }
  if (static_cast<std::int64_t>(count) > static_cast<std::int64_t>(pool.size())) {
    throw std::invalid_argument("sample_size exceeds live row count");
  }
  std::vector<std::int64_t> picked;
  std::sample(pool.begin(), pool.end(), std::back_inserter(picked), count,
              rng);
  return picked;
}

}  // namespace

std::vector<int> probe_ladder(int k, int ef_cap) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (ef_cap < k) throw std::invalid_argument("ef_cap must be >= k");
  std::vector<int> ladder;
  auto push = [&](long long ef) {
    const int clamped = static_cast<int>(std::min<long long>(ef, ef_cap));
    if (ladder.empty() || clamped > ladder.back()) ladder.push_back(clamped);
    return clamped == ef_cap;
  };
  if (push(k)) return ladder;
  if (push(static_cast<long long>(std::ceil(1.25 * k)))) return ladder;
  if (push(static_cast<long long>(std::ceil(1.5 * k)))) return ladder;
  for (long long mult = 2;; ++mult) {
    if (push(mult * static_cast<long long>(k))) return ladder;
  }
}

EfTable build_table(const HnswIndex& idx, const DatasetStats& stats,
                    const ScoringConfig& cfg, int sample_size, int k,
                    double target_recall, int ef_cap,
                    std::uint64_t rng_seed) {
  if (sample_size < 1) throw std::invalid_argument("sample_size must be >= 1");
  if (idx.live_count() == 0) throw std::invalid_argument("empty dataset");
  if (k > ef_cap) throw std::invalid_argument("k must be <= ef_cap");
  if (stats.metric != idx.metric()) {
    throw std::invalid_argument("stats metric does not match index metric");
  }

  EfTable table;
  table.build_target_recall = target_recall;
  table.build_k = k;
  table.ef_cap = ef_cap;

  std::mt19937_64 rng(rng_seed);
  table.sample_ids = sample_live_ids(idx, sample_size, rng, {});
  table.proxy_truth.reserve(table.sample_ids.size());
  for (std::int64_t id : table.sample_ids) {
    table.proxy_truth.push_back(exact_truth(idx, id, k));
  }
  probe_groups(idx, stats, cfg, table);
  return table;
}

int select_ef(const EfTable& table, double score, double target_recall) {
  if (table.groups.empty()) throw std::invalid_argument("empty ef table");
  const int key = static_cast<int>(std::floor(score));

  auto it = table.groups.lower_bound(key);
  if (it == table.groups.end()) {
    it = std::prev(it);
  } else if (it->first != key && it != table.groups.begin()) {
    // Nearest existing group, preferring the lower key on ties.
    auto below = std::prev(it);
    if (key - below->first <= it->first - key) it = below;
  }

  const std::vector<EfRecall>& row = it->second;
  int ef = row.back().ef;
  for (const EfRecall& pair : row) {
    if (pair.recall >= target_recall) {
      ef = pair.ef;
      break;
    }
  }
  return std::max(ef, static_cast<int>(std::ceil(table.wae)));
}

EfEstimate estimate_ef_detail(const Eigen::Ref<const Eigen::RowVectorXf>& q,
                              const std::vector<float>& distances,
                              double target_recall, const DatasetStats& stats,
                              const EfTable& table, const ScoringConfig& cfg) {
  if (distances.empty()) throw std::invalid_argument("empty distance list");
  const FdlParams params =
      to_internal(estimate_fdl_params(q, stats), stats.metric);
  EfEstimate est;
  est.score = score_distances(distances, params, cfg);
  est.ef = select_ef(table, est.score, target_recall);
  return est;
}

int estimate_ef(const Eigen::Ref<const Eigen::RowVectorXf>& q,
                const std::vector<float>& distances, double target_recall,
                const DatasetStats& stats, const EfTable& table,
                const ScoringConfig& cfg) {
  return estimate_ef_detail(q, distances, target_recall, stats, table, cfg)
      .ef;
}

EfTable refresh_table(const EfTable& prior, const HnswIndex& idx,
                      const DatasetStats& stats, const ScoringConfig& cfg,
                      const std::vector<std::int64_t>& inserted_ids,
                      const std::vector<std::int64_t>& deleted_ids,
                      std::uint64_t rng_seed) {
  EfTable table;
  table.build_target_recall = prior.build_target_recall;
  table.build_k = prior.build_k;
  table.ef_cap = prior.ef_cap;

  const std::unordered_set<std::int64_t> deleted(deleted_ids.begin(),
                                                 deleted_ids.end());
  std::mt19937_64 rng(rng_seed);
  std::unordered_set<std::int64_t> taken(prior.sample_ids.begin(),
                                         prior.sample_ids.end());

  int replacements = 0;
  for (std::int64_t id : prior.sample_ids) {
    if (!idx.is_live(id)) ++replacements;
  }
  std::vector<std::int64_t> fresh =
      replacements > 0 ? sample_live_ids(idx, replacements, rng, taken)
                       : std::vector<std::int64_t>{};
  std::size_t next_fresh = 0;

  for (std::size_t p = 0; p < prior.sample_ids.size(); ++p) {
    const std::int64_t proxy_id = prior.sample_ids[p];
    if (!idx.is_live(proxy_id)) {
      const std::int64_t replacement = fresh[next_fresh++];
      table.sample_ids.push_back(replacement);
      table.proxy_truth.push_back(
          exact_truth(idx, replacement, table.build_k));
      continue;
    }

    const auto row = idx.dataset().row(proxy_id);
    std::vector<Neighbor> topk = prior.proxy_truth[p].topk;
    std::erase_if(topk, [&](const Neighbor& nb) {
      return deleted.count(nb.id) != 0;
    });
    if (static_cast<int>(topk.size()) < table.build_k) {
      // Deletions shrank the list: rows formerly ranked below k may now
      // belong, so backfill over the survivors (inserts included).
      topk = brute_force_topk(row, idx.dataset(), idx.metric(),
                              table.build_k, &idx.live_flags());
    } else {
      for (std::int64_t ins : inserted_ids) {
        if (!idx.is_live(ins)) continue;
        Neighbor cand{ins,
                      distance(row, idx.dataset().row(ins), idx.metric())};
        auto pos = std::lower_bound(topk.begin(), topk.end(), cand,
                                    neighbor_closer);
        topk.insert(pos, cand);
        if (static_cast<int>(topk.size()) > table.build_k) topk.pop_back();
      }
    }
    table.sample_ids.push_back(proxy_id);
    table.proxy_truth.push_back(ProxyTruth{std::move(topk)});
  }

  probe_groups(idx, stats, cfg, table);
  return table;
}

void save_table(const std::string& path, const EfTable& table) {
  json j;
  j["version"] = 1;
  j["build"] = {{"target_recall", table.build_target_recall},
                {"k", table.build_k},
                {"ef_cap", table.ef_cap}};
  j["wae"] = table.wae;
  j["sample_ids"] = table.sample_ids;
  json truths = json::array();
  for (const ProxyTruth& truth : table.proxy_truth) {
    json t;
    t["ids"] = json::array();
    t["dists"] = json::array();
    for (const Neighbor& nb : truth.topk) {
      t["ids"].push_back(nb.id);
      t["dists"].push_back(nb.dist);
    }
    truths.push_back(std::move(t));
  }
  j["proxy_truth"] = std::move(truths);
  json groups = json::array();
  for (const auto& [score, pairs] : table.groups) {
    json row;
    row["score"] = score;
    row["ef_recall"] = json::array();
    for (const EfRecall& pair : pairs) {
      row["ef_recall"].push_back({pair.ef, pair.recall});
    }
    groups.push_back(std::move(row));
  }
  j["groups"] = std::move(groups);

  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << j.dump(2) << "\n";
  if (!f) throw std::runtime_error("write failed: " + path);
}

EfTable load_table(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  json j;
  f >> j;

  EfTable table;
  table.build_target_recall = j.at("build").at("target_recall").get<double>();
  table.build_k = j.at("build").at("k").get<int>();
  table.ef_cap = j.at("build").at("ef_cap").get<int>();
  table.wae = j.at("wae").get<double>();
  table.sample_ids = j.at("sample_ids").get<std::vector<std::int64_t>>();
  for (const json& t : j.at("proxy_truth")) {
    ProxyTruth truth;
    const auto ids = t.at("ids").get<std::vector<std::int64_t>>();
    const auto dists = t.at("dists").get<std::vector<float>>();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      truth.topk.push_back({ids[i], dists[i]});
    }
    table.proxy_truth.push_back(std::move(truth));
  }
  for (const json& row : j.at("groups")) {
    std::vector<EfRecall> pairs;
    for (const json& pair : row.at("ef_recall")) {
      pairs.push_back({pair.at(0).get<int>(), pair.at(1).get<double>()});
    }
    table.groups[row.at("score").get<int>()] = std::move(pairs);
  }
  return table;
}

}  // namespace adaef
