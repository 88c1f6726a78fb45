#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace adaef {

using RowMatrixf =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Similarity metric. For InnerProduct and CosineSimilarity a larger raw
/// value means more similar; internally both are negated so that every
/// metric compares as "smaller is closer".
enum class Metric { InnerProduct, CosineSimilarity, CosineDistance };

inline bool metric_is_cosine(Metric m) {
  return m == Metric::CosineSimilarity || m == Metric::CosineDistance;
}

const char* metric_name(Metric m);
Metric metric_from_name(const std::string& name);

/// Row-major collection of float32 vectors. Row index doubles as the
/// stable vector id; rows are only ever appended, never reordered.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(RowMatrixf rows) : rows_(std::move(rows)) {}

  std::int64_t size() const { return rows_.rows(); }
  int dim() const { return static_cast<int>(rows_.cols()); }
  bool empty() const { return rows_.rows() == 0; }

  Eigen::Ref<const Eigen::RowVectorXf> row(std::int64_t id) const {
    return rows_.row(id);
  }
  const RowMatrixf& rows() const { return rows_; }

  /// Appends a batch of rows; dimensions must match unless empty.
  void append(const RowMatrixf& batch);

  /// Rejects non-finite components, and zero-norm rows under cosine metrics.
  void validate(Metric metric) const;

 private:
  RowMatrixf rows_;
};

}  // namespace adaef
