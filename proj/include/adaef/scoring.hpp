#pragma once

#include "adaef/stats.hpp"

#include <vector>

namespace adaef {

enum class Decay { Exponential, Linear, None };

const char* decay_name(Decay d);
Decay decay_from_name(const std::string& name);

struct ScoringConfig {
  double delta = 0.001;  // quantile mass per bin
  int bins = 5;
  Decay decay = Decay::Exponential;
  int hops = 2;  // BFS depth bounding the sampled distance list
};

/// Quantile thresholds theta_i = mu + sigma * Phi^{-1}(delta * i),
/// i = 1..bins. `params` must be in the internal smaller-is-closer
/// convention (see to_internal).
Eigen::VectorXd bin_thresholds(const FdlParams& params,
                               const ScoringConfig& cfg);

/// Effective per-bin weights, w_1 = 100 for the decaying families:
/// Exponential 100*e^{-i+1}, Linear 100*(m-i+1)/m, None uniform 100/m.
Eigen::VectorXd decay_weights(const ScoringConfig& cfg);

/// c_1 counts d <= theta_1; c_i counts theta_{i-1} < d <= theta_i;
/// distances above theta_m are not counted.
Eigen::VectorXi bin_counts(const std::vector<float>& distances,
                           const Eigen::VectorXd& thresholds);

/// Weighted normalized sum of bin counts, in [0, 100].
double query_score(const Eigen::VectorXi& counts,
                   const Eigen::VectorXd& weights, std::size_t sample_size);

/// Convenience: thresholds, counts, and score in one call.
double score_distances(const std::vector<float>& distances,
                       const FdlParams& internal_params,
                       const ScoringConfig& cfg);

}  // namespace adaef
