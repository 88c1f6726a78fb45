#pragma once

#include "adaef/types.hpp"

#include <Eigen/Dense>

#include <string>

namespace adaef {

/// Per-column mean and sample covariance of a dataset, accumulated in
/// float64. For cosine metrics the statistics are taken over L2-normalized
/// rows (normalized == true).
struct DatasetStats {
  Eigen::VectorXd mean;  // d
  Eigen::MatrixXd cov;   // d x d, (n-1) denominator
  std::int64_t n = 0;
  Metric metric = Metric::CosineDistance;
  bool normalized = false;
};

/// Estimated Gaussian parameters of the full distance list for one query,
/// in the metric's native sign.
struct FdlParams {
  double mu = 0.0;
  double sigma = 0.0;
};

DatasetStats compute_stats(const Dataset& ds, Metric metric);

/// mu = q.M (IP), q_hat.M (CS), 1 - q_hat.M (CD); variance = q Sigma q^T
/// with q normalized for the cosine metrics. Negative quadratic forms from
/// rounding are clamped to zero before the square root.
FdlParams estimate_fdl_params(const Eigen::Ref<const Eigen::RowVectorXf>& q,
                              const DatasetStats& stats);

/// Maps native-sign FDL parameters to the internal smaller-is-closer
/// convention used by the search path (negates mu for IP and CS).
inline FdlParams to_internal(const FdlParams& p, Metric metric) {
  if (metric == Metric::CosineDistance) return p;
  return {-p.mu, p.sigma};
}

/// Pooled statistics of the union of two disjoint batches.
DatasetStats merge_stats(const DatasetStats& a, const DatasetStats& b);

/// Statistics of the rows remaining after deleting `removed` from `total`.
DatasetStats remove_stats(const DatasetStats& total,
                          const DatasetStats& removed);

void save_stats(const std::string& path, const DatasetStats& stats);
DatasetStats load_stats(const std::string& path);

}  // namespace adaef
