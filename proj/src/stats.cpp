#include "adaef/stats.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace adaef {

namespace {

void check_compatible(const DatasetStats& a, const DatasetStats& b,
                      const char* op) {
  if (a.mean.size() != b.mean.size()) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch");
  }
  if (a.metric != b.metric || a.normalized != b.normalized) {
    throw std::invalid_argument(std::string(op) + ": metric mismatch");
  }
}

Eigen::RowVectorXd prepared_row(const Dataset& ds, std::int64_t i,
                                bool normalize) {
  Eigen::RowVectorXd r = ds.row(i).cast<double>();
  if (normalize) {
    const double norm = r.norm();
    if (norm == 0.0) {
      throw std::invalid_argument("zero-norm row under a cosine metric");
    }
    r /= norm;
  }
  return r;
}

}  // namespace

DatasetStats compute_stats(const Dataset& ds, Metric metric) {
  const std::int64_t n = ds.size();
  if (n < 2) {
    throw std::invalid_argument("compute_stats requires at least 2 rows");
  }
  const int d = ds.dim();
  const bool normalize = metric_is_cosine(metric);

  DatasetStats out;
  out.metric = metric;
  out.normalized = normalize;
  out.n = n;

  Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(d);
  for (std::int64_t i = 0; i < n; ++i) {
    sum += prepared_row(ds, i, normalize);
  }
  const Eigen::RowVectorXd mean = sum / static_cast<double>(n);

  // Blockwise two-pass accumulation keeps memory bounded for large n.
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
  constexpr std::int64_t kBlock = 4096;
  Eigen::MatrixXd centered(std::min(kBlock, n), d);
  for (std::int64_t start = 0; start < n; start += kBlock) {
    const std::int64_t rows = std::min(kBlock, n - start);
    for (std::int64_t i = 0; i < rows; ++i) {
      centered.row(i) = prepared_row(ds, start + i, normalize) - mean;
    }
    scatter.noalias() +=
        centered.topRows(rows).transpose() * centered.topRows(rows);
  }

  out.mean = mean.transpose();
  out.cov = scatter / static_cast<double>(n - 1);
  return out;
}

FdlParams estimate_fdl_params(const Eigen::Ref<const Eigen::RowVectorXf>& q,
                              const DatasetStats& stats) {
  if (q.size() != stats.mean.size()) {
    throw std::invalid_argument("estimate_fdl_params: dimension mismatch");
  }
  Eigen::VectorXd qd = q.cast<double>().transpose();
  if (stats.normalized) {
    const double norm = qd.norm();
    if (norm == 0.0) {
      throw std::invalid_argument("zero-norm query under a cosine metric");
    }
    qd /= norm;
  }
  const double projected = qd.dot(stats.mean);
  double var = qd.dot(stats.cov * qd);
  var = std::max(var, 0.0);  // PSD up to rounding

  FdlParams p;
  p.sigma = std::sqrt(var);
  p.mu = stats.metric == Metric::CosineDistance ? 1.0 - projected : projected;
  return p;
}

DatasetStats merge_stats(const DatasetStats& a, const DatasetStats& b) {
  check_compatible(a, b, "merge_stats");
  if (b.n == 0) return a;
  if (a.n == 0) return b;
  const double n = static_cast<double>(a.n);
  const double np = static_cast<double>(b.n);
  const double npp = n + np;
  if (a.n + b.n < 2) {
    throw std::invalid_argument("merge_stats: merged count must be >= 2");
  }

  DatasetStats out;
  out.metric = a.metric;
  out.normalized = a.normalized;
  out.n = a.n + b.n;
  out.mean = (n * a.mean + np * b.mean) / npp;

  const Eigen::VectorXd diff = a.mean - b.mean;
  out.cov = ((n - 1.0) * a.cov + (np - 1.0) * b.cov +
             (n * np / npp) * diff * diff.transpose()) /
            (npp - 1.0);
  return out;
}

DatasetStats remove_stats(const DatasetStats& total,
                          const DatasetStats& removed) {
  check_compatible(total, removed, "remove_stats");
  if (removed.n == 0) return total;
  if (removed.n >= total.n) {
    throw std::invalid_argument("remove_stats: removed count must be < total");
  }
  const double npp = static_cast<double>(total.n);
  const double np = static_cast<double>(removed.n);
  const double n = npp - np;

  DatasetStats out;
  out.metric = total.metric;
  out.normalized = total.normalized;
  out.n = total.n - removed.n;
  out.mean = (npp * total.mean - np * removed.mean) / n;

  const Eigen::VectorXd diff = total.mean - removed.mean;
  out.cov = ((npp - 1.0) * total.cov - (np - 1.0) * removed.cov -
             (np * npp / n) * diff * diff.transpose()) /
            (n - 1.0);
  return out;
}

namespace {
constexpr char kStatsMagic[8] = {'A', 'D', 'A', 'S', 'T', 'A', 'T', '1'};
}

void save_stats(const std::string& path, const DatasetStats& stats) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(kStatsMagic, sizeof(kStatsMagic));
  const std::uint8_t metric = static_cast<std::uint8_t>(stats.metric);
  const std::uint8_t normalized = stats.normalized ? 1 : 0;
  const std::uint32_t d = static_cast<std::uint32_t>(stats.mean.size());
  const std::int64_t n = stats.n;
  f.write(reinterpret_cast<const char*>(&metric), 1);
  f.write(reinterpret_cast<const char*>(&normalized), 1);
  f.write(reinterpret_cast<const char*>(&d), 4);
  f.write(reinterpret_cast<const char*>(&n), 8);
  f.write(reinterpret_cast<const char*>(stats.mean.data()), 8 * d);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> cov =
      stats.cov;
  f.write(reinterpret_cast<const char*>(cov.data()),
          8 * static_cast<std::streamsize>(d) * d);
  if (!f) throw std::runtime_error("write failed: " + path);
}

DatasetStats load_stats(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kStatsMagic, 8) != 0) {
    throw std::runtime_error("bad stats file: " + path);
  }
  std::uint8_t metric = 0, normalized = 0;
  std::uint32_t d = 0;
  std::int64_t n = 0;
  f.read(reinterpret_cast<char*>(&metric), 1);
  f.read(reinterpret_cast<char*>(&normalized), 1);
  f.read(reinterpret_cast<char*>(&d), 4);
  f.read(reinterpret_cast<char*>(&n), 8);
  DatasetStats stats;
  stats.metric = static_cast<Metric>(metric);
  stats.normalized = normalized != 0;
  stats.n = n;
  stats.mean.resize(d);
  f.read(reinterpret_cast<char*>(stats.mean.data()), 8 * d);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> cov(
      d, d);
  f.read(reinterpret_cast<char*>(cov.data()),
         8 * static_cast<std::streamsize>(d) * d);
  if (!f) throw std::runtime_error("truncated stats file: " + path);
  stats.cov = cov;
  return stats;
}

}  // namespace adaef
