#include "adaef/distance.hpp"

namespace adaef {

double metric_value(const Eigen::Ref<const Eigen::RowVectorXf>& a,
                    const Eigen::Ref<const Eigen::RowVectorXf>& b,
                    Metric metric) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dimension mismatch in metric_value");
  }
  const double ip = a.cast<double>().dot(b.cast<double>());
  switch (metric) {
    case Metric::InnerProduct:
      return ip;
    case Metric::CosineSimilarity:
    case Metric::CosineDistance: {
      const double na = a.cast<double>().norm();
      const double nb = b.cast<double>().norm();
      if (na == 0.0 || nb == 0.0) {
        throw std::invalid_argument("zero-norm vector under a cosine metric");
      }
      const double cs = ip / (na * nb);
      return metric == Metric::CosineSimilarity ? cs : 1.0 - cs;
    }
  }
  throw std::logic_error("unreachable");
}

Eigen::VectorXd exact_fdl(const Eigen::Ref<const Eigen::RowVectorXf>& q,
                          const Dataset& ds, Metric metric) {
  Eigen::VectorXd out(ds.size());
  for (std::int64_t i = 0; i < ds.size(); ++i) {
    out[i] = metric_value(q, ds.row(i), metric);
  }
  return out;
}

}  // namespace adaef
