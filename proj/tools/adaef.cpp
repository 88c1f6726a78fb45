// adaef: command-line driver for the adaptive-ef HNSW pipeline.

#include "adaef/eftable.hpp"
#include "adaef/hnsw.hpp"
#include "adaef/io.hpp"
#include "adaef/oracle.hpp"
#include "adaef/report.hpp"
#include "adaef/scoring.hpp"
#include "adaef/stats.hpp"
#include "adaef/synthetic.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

using namespace adaef;

namespace {

int thread_count() {
  const char* env = std::getenv("ADA_EF_THREADS");
  if (!env) return 1;
  const int t = std::atoi(env);
  return t > 0 ? t : 1;
}

// Runs fn(i) for i in [0, n), across up to ADA_EF_THREADS threads.
template <typename Fn>
void for_each_query(std::int64_t n, Fn fn) {
  const int threads = std::min<std::int64_t>(thread_count(), n);
  if (threads <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::int64_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

std::vector<std::int64_t> truth_row(
    const std::vector<std::vector<std::int32_t>>& gt, std::int64_t i, int k) {
  if (i >= static_cast<std::int64_t>(gt.size()) ||
      static_cast<int>(gt[i].size()) < k) {
    throw std::runtime_error("ground truth has fewer than k ids for query " +
                             std::to_string(i));
  }
  return std::vector<std::int64_t>(gt[i].begin(), gt[i].begin() + k);
}

struct CommonArtifacts {
  Dataset data;
  HnswIndex index;
};

CommonArtifacts load_index(const std::string& data_path,
                           const std::string& index_path) {
  Dataset data(load_fvecs(data_path));
  HnswIndex index = HnswIndex::load(index_path, data);
  return {std::move(data), std::move(index)};
}

void emit_reports(const std::string& csv_path, const std::string& json_path,
                  std::vector<QueryRow> rows, double total_s) {
  if (!csv_path.empty()) write_report_csv(csv_path, rows);
  const RunReport rep = aggregate(std::move(rows), total_s);
  if (!json_path.empty()) write_report_json(json_path, rep);
  std::printf("queries=%zu mean_recall=%.6f p5_recall=%.6f p1_recall=%.6f "
              "mean_ef=%.2f total_s=%.3f\n",
              rep.rows.size(), rep.mean_recall, rep.p5_recall, rep.p1_recall,
              rep.mean_ef, rep.total_time_s);
}

void add_scoring_flags(CLI::App* cmd, ScoringConfig& cfg, std::string& decay) {
  cmd->add_option("--delta", cfg.delta, "quantile mass per bin");
  cmd->add_option("--bins", cfg.bins, "number of score bins");
  cmd->add_option("--hops", cfg.hops, "BFS depth for the distance budget")
      ->check(CLI::Range(1, 3));
  cmd->add_option("--decay", decay, "bin weight decay: exp|linear|none");
}

Decay parse_decay(const std::string& name) {
  if (name == "exp") return Decay::Exponential;
  if (name == "linear") return Decay::Linear;
  if (name == "none") return Decay::None;
  return decay_from_name(name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive-ef HNSW search pipeline"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  SyntheticSpec spec;
  std::string gen_out, gen_queries_out;
  gen->add_option("--out", gen_out, "output fvecs for data")->required();
  gen->add_option("--queries-out", gen_queries_out, "output fvecs for queries")
      ->required();
  gen->add_option("--n", spec.n);
  gen->add_option("--dim", spec.dim);
  gen->add_option("--clusters", spec.clusters);
  gen->add_option("--zipf", spec.zipf_exponent);
  gen->add_option("--cluster-std", spec.cluster_std);
  gen->add_option("--center-box", spec.center_box);
  gen->add_option("--num-queries", spec.num_queries);
  gen->add_option("--query-jitter", spec.query_jitter);
  gen->add_option("--seed", spec.rng_seed);

  // ---- build-index ----
  auto* build = app.add_subcommand("build-index", "build an HNSW index");
  std::string bi_data, bi_out, bi_metric = "cosdist";
  HnswParams hnsw_params;
  build->add_option("--data", bi_data)->required();
  build->add_option("--out", bi_out)->required();
  build->add_option("--metric", bi_metric, "ip|cos|cosdist");
  build->add_option("--m", hnsw_params.degree_m);
  build->add_option("--ef-construction", hnsw_params.ef_construction);
  build->add_option("--seed", hnsw_params.rng_seed);

  // ---- stats ----
  auto* stats_cmd = app.add_subcommand("stats", "compute dataset statistics");
  std::string st_data, st_out, st_metric = "cosdist";
  stats_cmd->add_option("--data", st_data)->required();
  stats_cmd->add_option("--out", st_out)->required();
  stats_cmd->add_option("--metric", st_metric);

  // ---- ground-truth ----
  auto* gt_cmd = app.add_subcommand("ground-truth", "exact top-k by brute force");
  std::string gt_data, gt_queries, gt_out, gt_metric = "cosdist", gt_index;
  int gt_k = 10;
  gt_cmd->add_option("--data", gt_data)->required();
  gt_cmd->add_option("--queries", gt_queries)->required();
  gt_cmd->add_option("--out", gt_out)->required();
  gt_cmd->add_option("--metric", gt_metric);
  gt_cmd->add_option("--k", gt_k);
  gt_cmd->add_option("--index", gt_index,
                     "restrict to rows still live in this index");

  // ---- build-table ----
  auto* table_cmd = app.add_subcommand("build-table", "probe the score->ef table");
  std::string tb_data, tb_index, tb_stats, tb_out, tb_decay = "exp";
  int tb_sample = 200, tb_k = 10, tb_cap = 5000;
  double tb_target = 0.95;
  std::uint64_t tb_seed = 7;
  ScoringConfig tb_cfg;
  table_cmd->add_option("--data", tb_data)->required();
  table_cmd->add_option("--index", tb_index)->required();
  table_cmd->add_option("--stats", tb_stats)->required();
  table_cmd->add_option("--out", tb_out)->required();
  table_cmd->add_option("--sample-size", tb_sample);
  table_cmd->add_option("--k", tb_k);
  table_cmd->add_option("--target-recall", tb_target);
  table_cmd->add_option("--ef-cap", tb_cap);
  table_cmd->add_option("--seed", tb_seed);
  add_scoring_flags(table_cmd, tb_cfg, tb_decay);

  // ---- search-fixed ----
  auto* sf = app.add_subcommand("search-fixed", "fixed-ef search workload");
  std::string sf_data, sf_index, sf_queries, sf_gt, sf_csv, sf_json;
  int sf_k = 10, sf_ef = 0, sf_cap = 5000;
  double sf_stop = 0.99;
  bool sf_sweep = false;
  sf->add_option("--data", sf_data)->required();
  sf->add_option("--index", sf_index)->required();
  sf->add_option("--queries", sf_queries)->required();
  sf->add_option("--gt", sf_gt)->required();
  sf->add_option("--k", sf_k);
  sf->add_option("--ef", sf_ef, "fixed ef (>= k)");
  sf->add_flag("--ef-sweep", sf_sweep, "probe the ef ladder instead");
  sf->add_option("--ef-cap", sf_cap, "sweep upper bound");
  sf->add_option("--sweep-stop-recall", sf_stop,
                 "stop the sweep once mean recall reaches this");
  sf->add_option("--csv", sf_csv, "per-query csv (or per-rung when sweeping)");
  sf->add_option("--json", sf_json, "aggregate json");

  // ---- search-ada ----
  auto* sa = app.add_subcommand("search-ada", "adaptive-ef search workload");
  std::string sa_data, sa_index, sa_queries, sa_gt, sa_stats, sa_table,
      sa_csv, sa_json, sa_decay = "exp";
  int sa_k = 10;
  double sa_target = 0.95;
  ScoringConfig sa_cfg;
  sa->add_option("--data", sa_data)->required();
  sa->add_option("--index", sa_index)->required();
  sa->add_option("--queries", sa_queries)->required();
  sa->add_option("--gt", sa_gt)->required();
  sa->add_option("--stats", sa_stats)->required();
  sa->add_option("--table", sa_table)->required();
  sa->add_option("--k", sa_k);
  sa->add_option("--target-recall", sa_target);
  sa->add_option("--csv", sa_csv);
  sa->add_option("--json", sa_json);
  add_scoring_flags(sa, sa_cfg, sa_decay);

  // ---- update ----
  auto* up = app.add_subcommand("update", "apply an insert/delete batch");
  std::string up_data, up_index, up_stats, up_table, up_inserts, up_deletes,
      up_mode = "incremental", up_decay = "exp";
  std::string up_data_out, up_index_out, up_stats_out, up_table_out;
  std::uint64_t up_seed = 11;
  int up_sample = 200, up_k = 10, up_cap = 5000;
  double up_target = 0.95;
  ScoringConfig up_cfg;
  up->add_option("--data", up_data)->required();
  up->add_option("--index", up_index)->required();
  up->add_option("--stats", up_stats)->required();
  up->add_option("--table", up_table)->required();
  up->add_option("--inserts", up_inserts, "fvecs batch to insert");
  up->add_option("--deletes", up_deletes, "ivecs of ids to tombstone");
  up->add_option("--mode", up_mode, "stale|incremental|recompute");
  up->add_option("--data-out", up_data_out, "defaults to --data");
  up->add_option("--index-out", up_index_out, "defaults to --index");
  up->add_option("--stats-out", up_stats_out, "defaults to --stats");
  up->add_option("--table-out", up_table_out, "defaults to --table");
  up->add_option("--seed", up_seed);
  up->add_option("--sample-size", up_sample, "recompute mode table sample");
  up->add_option("--k", up_k);
  up->add_option("--target-recall", up_target);
  up->add_option("--ef-cap", up_cap);
  add_scoring_flags(up, up_cfg, up_decay);

  // ---- report ----
  auto* rep = app.add_subcommand("report", "recompute aggregates from a csv");
  std::string rp_csv, rp_json;
  rep->add_option("--csv", rp_csv)->required();
  rep->add_option("--json", rp_json)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const Generated g = generate(spec);
      save_fvecs(gen_out, g.data.rows());
      save_fvecs(gen_queries_out, g.queries);
      std::printf("wrote %lld vectors (%d-d) and %lld queries\n",
                  static_cast<long long>(g.data.size()), g.data.dim(),
                  static_cast<long long>(g.queries.rows()));
    } else if (*build) {
      Dataset data(load_fvecs(bi_data));
      const Metric metric = metric_from_name(bi_metric);
      const auto start = std::chrono::steady_clock::now();
      HnswIndex index(std::move(data), metric, hnsw_params);
      const double secs = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start)
                              .count();
      index.save(bi_out);
      std::printf("built index over %lld vectors in %.1fs (max level %d)\n",
                  static_cast<long long>(index.node_count()), secs,
                  index.max_level());
    } else if (*stats_cmd) {
      const Dataset data(load_fvecs(st_data));
      save_stats(st_out, compute_stats(data, metric_from_name(st_metric)));
      std::printf("stats over %lld rows written\n",
                  static_cast<long long>(data.size()));
    } else if (*gt_cmd) {
      const Dataset data(load_fvecs(gt_data));
      const RowMatrixf queries = load_fvecs(gt_queries);
      const Metric metric = metric_from_name(gt_metric);
      std::vector<char> live;
      if (!gt_index.empty()) {
        live = HnswIndex::load(gt_index, Dataset(data.rows())).live_flags();
      }
      std::vector<std::vector<std::int32_t>> out(queries.rows());
      for_each_query(queries.rows(), [&](std::int64_t i) {
        for (const Neighbor& nb :
             brute_force_topk(queries.row(i), data, metric, gt_k,
                              live.empty() ? nullptr : &live)) {
          out[i].push_back(static_cast<std::int32_t>(nb.id));
        }
      });
      save_ivecs(gt_out, out);
      std::printf("ground truth for %lld queries written\n",
                  static_cast<long long>(queries.rows()));
    } else if (*table_cmd) {
      auto [data, index] = load_index(tb_data, tb_index);
      const DatasetStats stats = load_stats(tb_stats);
      tb_cfg.decay = parse_decay(tb_decay);
      const EfTable t = build_table(index, stats, tb_cfg, tb_sample, tb_k,
                                    tb_target, tb_cap, tb_seed);
      save_table(tb_out, t);
      std::printf("table with %zu score groups written (wae=%.1f)\n",
                  t.groups.size(), t.wae);
    } else if (*sf) {
      auto [data, index] = load_index(sf_data, sf_index);
      const RowMatrixf queries = load_fvecs(sf_queries);
      const auto gt = load_ivecs(sf_gt);
      auto run_rung = [&](int ef, std::vector<QueryRow>& rows) {
        rows.assign(queries.rows(), QueryRow{});
        for_each_query(queries.rows(), [&](std::int64_t i) {
          const auto t0 = std::chrono::steady_clock::now();
          const SearchResult r = index.search_fixed(queries.row(i), sf_k, ef);
          const auto t1 = std::chrono::steady_clock::now();
          QueryRow& row = rows[i];
          row.query_id = i;
          row.recall = recall_at_k(r.ids, truth_row(gt, i, sf_k), sf_k);
          row.latency_us =
              std::chrono::duration<double, std::micro>(t1 - t0).count();
          row.ef = ef;
          row.score = std::numeric_limits<double>::quiet_NaN();
        });
      };
      if (sf_sweep) {
        std::FILE* csv = sf_csv.empty() ? nullptr : std::fopen(sf_csv.c_str(), "w");
        if (csv) std::fprintf(csv, "ef,mean_recall,p5_recall,p1_recall\n");
        for (int ef : probe_ladder(sf_k, sf_cap)) {
          std::vector<QueryRow> rows;
          const auto t0 = std::chrono::steady_clock::now();
          run_rung(ef, rows);
          const double secs = std::chrono::duration<double>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
          const RunReport r = aggregate(std::move(rows), secs);
          std::printf("ef=%d mean_recall=%.6f p5=%.6f p1=%.6f\n", ef,
                      r.mean_recall, r.p5_recall, r.p1_recall);
          if (csv) {
            std::fprintf(csv, "%d,%.9f,%.9f,%.9f\n", ef, r.mean_recall,
                         r.p5_recall, r.p1_recall);
          }
          if (r.mean_recall >= sf_stop) break;
        }
        if (csv) std::fclose(csv);
      } else {
        if (sf_ef < sf_k) {
          throw std::runtime_error("--ef must be provided and >= k");
        }
        std::vector<QueryRow> rows;
        const auto t0 = std::chrono::steady_clock::now();
        run_rung(sf_ef, rows);
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        emit_reports(sf_csv, sf_json, std::move(rows), secs);
      }
    } else if (*sa) {
      auto [data, index] = load_index(sa_data, sa_index);
      const RowMatrixf queries = load_fvecs(sa_queries);
      const auto gt = load_ivecs(sa_gt);
      const DatasetStats stats = load_stats(sa_stats);
      const EfTable table = load_table(sa_table);
      sa_cfg.decay = parse_decay(sa_decay);
      std::vector<QueryRow> rows(queries.rows());
      const auto t0 = std::chrono::steady_clock::now();
      for_each_query(queries.rows(), [&](std::int64_t i) {
        const auto q0 = std::chrono::steady_clock::now();
        const AdaptiveResult r = index.adaptive_search(
            queries.row(i), sa_k, sa_target, stats, table, sa_cfg);
        const auto q1 = std::chrono::steady_clock::now();
        QueryRow& row = rows[i];
        row.query_id = i;
        row.recall = recall_at_k(r.ids, truth_row(gt, i, sa_k), sa_k);
        row.latency_us =
            std::chrono::duration<double, std::micro>(q1 - q0).count();
        row.ef = r.uncapped ? table.ef_cap : r.assigned_ef;
        row.uncapped = r.uncapped;
        row.score = r.score;
      });
      const double secs = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
      emit_reports(sa_csv, sa_json, std::move(rows), secs);
    } else if (*up) {
      auto [data, index] = load_index(up_data, up_index);
      DatasetStats stats = load_stats(up_stats);
      EfTable table = load_table(up_table);
      up_cfg.decay = parse_decay(up_decay);

      std::vector<std::int64_t> inserted, deleted;
      RowMatrixf batch;
      if (!up_inserts.empty()) {
        batch = load_fvecs(up_inserts);
        for (Eigen::Index i = 0; i < batch.rows(); ++i) {
          inserted.push_back(index.insert(batch.row(i)));
        }
      }
      if (!up_deletes.empty()) {
        for (const auto& rec : load_ivecs(up_deletes)) {
          for (std::int32_t id : rec) {
            index.remove(id);
            deleted.push_back(id);
          }
        }
      }

      const Dataset& updated = index.dataset();
      if (up_mode == "incremental") {
        if (batch.rows() > 0) {
          stats = merge_stats(stats,
                              compute_stats(Dataset(batch), stats.metric));
        }
        if (!deleted.empty()) {
          RowMatrixf removed(deleted.size(), updated.dim());
          for (std::size_t i = 0; i < deleted.size(); ++i) {
            removed.row(i) = updated.row(deleted[i]);
          }
          stats = remove_stats(stats,
                               compute_stats(Dataset(removed), stats.metric));
        }
        table = refresh_table(table, index, stats, up_cfg, inserted, deleted,
                              up_seed);
      } else if (up_mode == "recompute") {
        RowMatrixf live_rows(index.live_count(), updated.dim());
        std::int64_t r = 0;
        for (std::int64_t id = 0; id < index.node_count(); ++id) {
          if (index.is_live(id)) live_rows.row(r++) = updated.row(id);
        }
        stats = compute_stats(Dataset(live_rows), stats.metric);
        table = build_table(index, stats, up_cfg, up_sample, up_k, up_target,
                            up_cap, up_seed);
      } else if (up_mode != "stale") {
        throw std::runtime_error("unknown --mode: " + up_mode);
      }

      save_fvecs(up_data_out.empty() ? up_data : up_data_out, updated.rows());
      index.save(up_index_out.empty() ? up_index : up_index_out);
      save_stats(up_stats_out.empty() ? up_stats : up_stats_out, stats);
      save_table(up_table_out.empty() ? up_table : up_table_out, table);
      std::printf("applied %zu inserts, %zu deletes (mode %s); %lld live\n",
                  inserted.size(), deleted.size(), up_mode.c_str(),
                  static_cast<long long>(index.live_count()));
    } else if (*rep) {
      std::vector<QueryRow> rows = read_report_csv(rp_csv);
      const RunReport r = aggregate(std::move(rows), 0.0);
      write_report_json(rp_json, r);
      std::printf("report with %zu rows aggregated\n", r.rows.size());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
