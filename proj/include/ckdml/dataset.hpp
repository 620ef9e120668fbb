#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ckdml/error.hpp"

namespace ckdml {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Encoded, fully numeric view of a table: feature matrix plus binary labels.
/// The positive (diseased) class is encoded as 0 throughout.
struct Dataset {
  Matrix features;
  std::vector<int> labels;  // each in {0, 1}
  std::vector<std::string> feature_names;
  int positive_label = 0;

  std::size_t n() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }

  /// New dataset holding the given rows, in the given order.
  Dataset select(std::span<const std::size_t> rows) const {
    Dataset out;
    out.feature_names = feature_names;
    out.positive_label = positive_label;
    out.features = Matrix(rows.size(), features.cols());
    out.labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::size_t r = rows[i];
      for (std::size_t j = 0; j < features.cols(); ++j) {
        out.features(i, j) = features(r, j);
      }
      out.labels.push_back(labels[r]);
    }
    return out;
  }
};

}  // namespace ckdml
