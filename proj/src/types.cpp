#include "adaef/types.hpp"

namespace adaef {

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::InnerProduct:
      return "ip";
    case Metric::CosineSimilarity:
      return "cos";
    case Metric::CosineDistance:
      return "cosdist";
  }
  return "?";
}

Metric metric_from_name(const std::string& name) {
  if (name == "ip") return Metric::InnerProduct;
  if (name == "cos") return Metric::CosineSimilarity;
  if (name == "cosdist") return Metric::CosineDistance;
  throw std::invalid_argument("unknown metric: " + name);
}

void Dataset::append(const RowMatrixf& batch) {
  if (batch.rows() == 0) return;
  if (rows_.rows() == 0) {
    rows_ = batch;
    return;
  }
  if (batch.cols() != rows_.cols()) {
    throw std::invalid_argument("dimension mismatch in Dataset::append");
  }
  const Eigen::Index old_n = rows_.rows();
  rows_.conservativeResize(old_n + batch.rows(), Eigen::NoChange);
  rows_.bottomRows(batch.rows()) = batch;
}

void Dataset::validate(Metric metric) const {
  for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
    if (!rows_.row(i).allFinite()) {
      throw std::invalid_argument("non-finite component in row " +
                                  std::to_string(i));
    }
    if (metric_is_cosine(metric) && rows_.row(i).norm() == 0.0f) {
      throw std::invalid_argument("zero-norm row " + std::to_string(i) +
                                  " under a cosine metric");
    }
  }
}

}  // namespace adaef
