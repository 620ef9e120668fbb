#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

#include "ckdml/dataset.hpp"
#include "ckdml/error.hpp"
#include "ckdml/rng.hpp"
#include "ckdml/tabular.hpp"

namespace ckdml {

enum class ImputeMode {
  PaperOrder,  // impute the full table, then split
  LeakFree,    // fit imputation statistics on train rows only
};

struct ImputePolicy {
  double high_null_threshold = 0.20;  // in (0,1)
  ImputeMode mode = ImputeMode::PaperOrder;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

struct SplitPair {
  Dataset train;
  Dataset test;
  std::uint64_t seed = 0;
  double test_ratio = 0.0;
};

/// Per-feature standardization statistics, fitted on designated rows only.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;  // floored at 1e-12
};

/// Fill every Missing cell. Statistics come from `fit_rows`; cells are filled
/// in all rows. Columns whose missing ratio (within the fitting rows) exceeds
/// policy.high_null_threshold are filled by uniform draws from the column's
/// observed values; the rest get the observed mean (numeric) or mode
/// (categorical, ties broken by first category in schema order).
///
/// Cells are visited column-major (columns in schema order, rows in order);
/// the generator advances only on random-sample draws.
inline Table impute(const Table& table, const ImputePolicy& policy,
                    std::uint64_t rng_seed, std::span<const std::size_t> fit_rows) {
  if (policy.high_null_threshold <= 0.0 || policy.high_null_threshold >= 1.0) {
    throw ConfigError("high_null_threshold must be in (0,1)");
  }
  Table out = table;
  Rng rng(rng_seed);
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    const ColumnSpec& col = table.schema[c];

    std::vector<const Cell*> observed;
    observed.reserve(fit_rows.size());
    std::size_t fit_missing = 0;
    for (const std::size_t r : fit_rows) {
      const Cell& cell = table.rows[r][c];
      if (cell.is_missing()) {
        ++fit_missing;
      } else {
        observed.push_back(&cell);
      }
    }
    if (observed.empty()) {
      throw DataError("column '" + col.name + "' has no observed values to impute from");
    }
    const double null_ratio =
        static_cast<double>(fit_missing) / static_cast<double>(fit_rows.size());

    Cell fill;  // used by the mean/mode strategy
    const bool random_sample = null_ratio > policy.high_null_threshold;
    if (!random_sample) {
      if (col.kind == ColumnKind::Numeric) {
        double sum = 0.0;
        for (const Cell* cell : observed) sum += cell->number;
        fill = Cell::num(sum / static_cast<double>(observed.size()));
      } else {
        std::vector<std::size_t> counts(col.categories.size(), 0);
        for (const Cell* cell : observed) {
          for (std::size_t k = 0; k < col.categories.size(); ++k) {
            if (cell->category == col.categories[k]) {
              ++counts[k];
              break;
            }
          }
        }
        std::size_t best = 0;
        for (std::size_t k = 1; k < counts.size(); ++k) {
          if (counts[k] > counts[best]) best = k;  // ties keep schema order
        }
        fill = Cell::cat(col.categories[best]);
      }
    }

    for (auto& row : out.rows) {
      if (!row[c].is_missing()) continue;
      row[c] = random_sample ? *observed[rng.below(observed.size())] : fill;
    }
  }
  return out;
}

/// Impute with statistics fitted on the whole table (the PaperOrder workflow).
inline Table impute(const Table& table, const ImputePolicy& policy,
                    std::uint64_t rng_seed) {
  std::vector<std::size_t> all(table.n_rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return impute(table, policy, rng_seed, all);
}

/// Encode a fully observed table as a numeric dataset. Numeric columns pass
/// through; categorical feature columns map categories to 0,1,... in schema
/// category order. Labels: ckd -> 0, notckd -> 1; positive_label is 0.
inline Dataset encode(const Table& table, std::string_view label_column) {
  const auto label_idx = table.column_index(label_column);
  if (!label_idx) {
    throw DataError("unknown label column '" + std::string(label_column) + "'");
  }
  const ColumnSpec& label = table.schema[*label_idx];
  if (label.kind != ColumnKind::Categorical || label.categories.size() != 2) {
    throw DataError("label column '" + label.name + "' must be categorical with two categories");
  }

  Dataset ds;
  ds.positive_label = 0;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    if (c == *label_idx) continue;
    feature_cols.push_back(c);
    ds.feature_names.push_back(table.schema[c].name);
  }
  ds.features = Matrix(table.n_rows(), feature_cols.size());
  ds.labels.reserve(table.n_rows());

  const auto code_of = [](const ColumnSpec& col, const Cell& cell, std::size_t row) {
    if (cell.is_missing()) {
      throw DataError("missing cell in column '" + col.name + "', row " +
                      std::to_string(row + 1) + "; impute first");
    }
    if (col.kind == ColumnKind::Numeric) return cell.number;
    for (std::size_t k = 0; k < col.categories.size(); ++k) {
      if (cell.category == col.categories[k]) return static_cast<double>(k);
    }
    throw DataError("category '" + cell.category + "' not in schema of column '" +
                    col.name + "'");
  };

  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      const std::size_t c = feature_cols[j];
      ds.features(r, j) = code_of(table.schema[c], table.rows[r][c], r);
    }
    ds.labels.push_back(
        static_cast<int>(code_of(label, table.rows[r][*label_idx], r)));
  }
  return ds;
}

/// Seeded index partition: Fisher-Yates shuffle, first round(ratio*n) indices
/// become the test set. If stratified, the shuffle-and-cut runs per class
/// (label 0 first, then label 1, one generator drawn in that order).
inline SplitIndices split_indices(std::span<const int> labels, double test_ratio,
                                  std::uint64_t seed, bool stratified) {
  const std::size_t n = labels.size();
  if (test_ratio <= 0.0 || test_ratio >= 1.0) {
    throw ConfigError("test_ratio must be in (0,1)");
  }
  if (n < 2) throw DataError("need at least 2 rows to split");

  Rng rng(seed);
  SplitIndices out;
  const auto cut = [&](std::vector<std::size_t>& idx) {
    rng.shuffle(idx);
    const auto k = static_cast<std::size_t>(
        std::llround(test_ratio * static_cast<double>(idx.size())));
    out.test.insert(out.test.end(), idx.begin(), idx.begin() + k);
    out.train.insert(out.train.end(), idx.begin() + k, idx.end());
  };

  if (stratified) {
    for (int cls = 0; cls <= 1; ++cls) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == cls) idx.push_back(i);
      }
      if (!idx.empty()) cut(idx);
    }
  } else {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    cut(idx);
  }
  if (out.train.empty() || out.test.empty()) {
    throw DataError("degenerate split: empty train or test set");
  }
  return out;
}

inline SplitPair split(const Dataset& dataset, double test_ratio,
                       std::uint64_t seed, bool stratified) {
  const auto idx = split_indices(dataset.labels, test_ratio, seed, stratified);
  return {dataset.select(idx.train), dataset.select(idx.test), seed, test_ratio};
}

inline Scaler fit_scaler(const Dataset& train) {
  if (train.n() == 0) throw DataError("cannot fit scaler on empty dataset");
  const std::size_t d = train.dim();
  Scaler s;
  s.mean.assign(d, 0.0);
  s.stddev.assign(d, 0.0);
  const double n = static_cast<double>(train.n());
  for (std::size_t i = 0; i < train.n(); ++i) {
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += train.features(i, j);
  }
  for (std::size_t j = 0; j < d; ++j) s.mean[j] /= n;
  for (std::size_t i = 0; i < train.n(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double dlt = train.features(i, j) - s.mean[j];
      s.stddev[j] += dlt * dlt;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    s.stddev[j] = std::max(std::sqrt(s.stddev[j] / n), 1e-12);
  }
  return s;
}

inline Dataset apply_scaler(const Scaler& scaler, const Dataset& ds) {
  if (scaler.mean.size() != ds.dim()) {
    throw DataError("scaler dimension " + std::to_string(scaler.mean.size()) +
                    " does not match dataset dimension " + std::to_string(ds.dim()));
  }
  Dataset out = ds;
  for (std::size_t i = 0; i < out.n(); ++i) {
    for (std::size_t j = 0; j < out.dim(); ++j) {
      out.features(i, j) = (out.features(i, j) - scaler.mean[j]) / scaler.stddev[j];
    }
  }
  return out;
}

}  // namespace ckdml
