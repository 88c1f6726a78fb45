#pragma once

#include "adaef/types.hpp"

#include <Eigen/Dense>

namespace adaef {

/// Raw metric value in its native sign (IP and CS: larger = more similar;
/// CD: smaller = closer). Accumulated in float64 over float32 inputs.
double metric_value(const Eigen::Ref<const Eigen::RowVectorXf>& a,
                    const Eigen::Ref<const Eigen::RowVectorXf>& b,
                    Metric metric);

/// Comparable distance, "smaller is closer" for every metric: negated IP
/// and CS, CD unchanged. One comparator serves all metrics in the search
/// and oracle code, which share this exact path.
inline float distance(const Eigen::Ref<const Eigen::RowVectorXf>& a,
                      const Eigen::Ref<const Eigen::RowVectorXf>& b,
                      Metric metric) {
  const double v = metric_value(a, b, metric);
  return static_cast<float>(metric == Metric::CosineDistance ? v : -v);
}

/// Full distance list: metric value of q against every dataset row, in row
/// order and in the metric's native sign.
Eigen::VectorXd exact_fdl(const Eigen::Ref<const Eigen::RowVectorXf>& q,
                          const Dataset& ds, Metric metric);

}  // namespace adaef
