#include "adaef/scoring.hpp"

#include "adaef/normal.hpp"

#include <cmath>

namespace adaef {

const char* decay_name(Decay d) {
  switch (d) {
    case Decay::Exponential:
      return "exp";
    case Decay::Linear:
      return "linear";
    case Decay::None:
      return "none";
  }
  return "?";
}

Decay decay_from_name(const std::string& name) {
  if (name == "exp") return Decay::Exponential;
  if (name == "linear") return Decay::Linear;
  if (name == "none") return Decay::None;
  throw std::invalid_argument("unknown decay: " + name);
}

Eigen::VectorXd bin_thresholds(const FdlParams& params,
                               const ScoringConfig& cfg) {
  if (cfg.bins < 1) throw std::invalid_argument("bins must be >= 1");
  if (!(cfg.delta > 0.0) || cfg.delta * cfg.bins >= 1.0) {
    throw std::invalid_argument("delta * bins must lie in (0, 1)");
  }
  Eigen::VectorXd theta(cfg.bins);
  for (int i = 1; i <= cfg.bins; ++i) {
    theta[i - 1] = params.mu + params.sigma * inverse_normal_cdf(cfg.delta * i);
  }
  return theta;
}

Eigen::VectorXd decay_weights(const ScoringConfig& cfg) {
  Eigen::VectorXd w(cfg.bins);
  const int m = cfg.bins;
  for (int i = 1; i <= m; ++i) {
    switch (cfg.decay) {
      case Decay::Exponential:
        w[i - 1] = 100.0 * std::exp(-(i - 1));
        break;
      case Decay::Linear:
        w[i - 1] = 100.0 * static_cast<double>(m - i + 1) / m;
        break;
      case Decay::None:
        w[i - 1] = 100.0 / m;
        break;
    }
  }
  return w;
}

Eigen::VectorXi bin_counts(const std::vector<float>& distances,
                           const Eigen::VectorXd& thresholds) {
  const int m = static_cast<int>(thresholds.size());
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(m);
  for (const float dist : distances) {
    const double d = dist;
    if (d > thresholds[m - 1]) continue;
    for (int i = 0; i < m; ++i) {
      if (d <= thresholds[i]) {
        ++counts[i];
        break;
      }
    }
  }
  return counts;
}

double query_score(const Eigen::VectorXi& counts,
                   const Eigen::VectorXd& weights, std::size_t sample_size) {
  if (sample_size == 0) throw std::invalid_argument("empty distance list");
  if (counts.size() != weights.size()) {
    throw std::invalid_argument("counts/weights size mismatch");
  }
  return weights.dot(counts.cast<double>()) /
         static_cast<double>(sample_size);
}

double score_distances(const std::vector<float>& distances,
                       const FdlParams& internal_params,
                       const ScoringConfig& cfg) {
  const Eigen::VectorXd theta = bin_thresholds(internal_params, cfg);
  const Eigen::VectorXi counts = bin_counts(distances, theta);
  return query_score(counts, decay_weights(cfg), distances.size());
}

}  // namespace adaef
