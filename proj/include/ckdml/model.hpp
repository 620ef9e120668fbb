#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ckdml/dataset.hpp"
#include "ckdml/error.hpp"

namespace ckdml {

using json = nlohmann::ordered_json;

/// Per-model hyperparameters with documented defaults. Unknown keys are
/// rejected at construction time, not at fit time.
class Hyperparams {
 public:
  /// Defaults per model name:
  ///   logistic_regression: learning_rate 0.1, epochs 500, l2_lambda 1e-4
  ///   svm:                 lambda 1e-3, epochs 500
  ///   knn:                 k 5
  ///   naive_bayes:         (none)
  ///   decision_tree:       max_depth 8, min_samples_split 2, min_samples_leaf 1
  ///   random_forest:       n_trees 100, max_depth 8, min_samples_split 2,
  ///                        min_samples_leaf 1, features_per_split 0 (0 = ceil(sqrt(d))),
  ///                        bootstrap 1
  ///   adaboost:            rounds 50
  ///   gradient_boosting:   rounds 100, learning_rate 0.3, max_depth 4,
  ///                        l2_lambda 1.0, gamma 0.0
  static Hyperparams defaults_for(std::string_view model) {
    Hyperparams hp;
    hp.model_ = std::string(model);
    if (model == "logistic_regression") {
      hp.values_ = {{"learning_rate", 0.1}, {"epochs", 500}, {"l2_lambda", 1e-4}};
    } else if (model == "svm") {
      hp.values_ = {{"lambda", 1e-3}, {"epochs", 500}};
    } else if (model == "knn") {
      hp.values_ = {{"k", 5}};
    } else if (model == "naive_bayes") {
      hp.values_ = {};
    } else if (model == "decision_tree") {
      hp.values_ = {{"max_depth", 8}, {"min_samples_split", 2}, {"min_samples_leaf", 1}};
    } else if (model == "random_forest") {
      hp.values_ = {{"n_trees", 100},        {"max_depth", 8},
                    {"min_samples_split", 2}, {"min_samples_leaf", 1},
                    {"features_per_split", 0}, {"bootstrap", 1}};
    } else if (model == "adaboost") {
      hp.values_ = {{"rounds", 50}};
    } else if (model == "gradient_boosting") {
      hp.values_ = {{"rounds", 100}, {"learning_rate", 0.3}, {"max_depth", 4},
                    {"l2_lambda", 1.0}, {"gamma", 0.0}};
    } else {
      throw ConfigError("unknown model '" + std::string(model) + "'");
    }
    return hp;
  }

  void set(std::string_view key, double value) {
    const auto it = values_.find(std::string(key));
    if (it == values_.end()) {
      throw ConfigError("model '" + model_ + "' has no hyperparameter '" +
                        std::string(key) + "'");
    }
    it->second = value;
  }

  double get(std::string_view key) const {
    const auto it = values_.find(std::string(key));
    if (it == values_.end()) {
      throw ConfigError("model '" + model_ + "' has no hyperparameter '" +
                        std::string(key) + "'");
    }
    return it->second;
  }

  int get_int(std::string_view key) const { return static_cast<int>(get(key)); }

  const std::map<std::string, double>& values() const { return values_; }
  const std::string& model() const { return model_; }

 private:
  std::string model_;
  std::map<std::string, double> values_;
};

/// Shared fit-input checks: non-empty data, labels in {0,1}, finite features,
/// and (when the model needs per-class statistics) both classes present.
inline void validate_fit_inputs(const Dataset& train, bool require_both_classes,
                                std::string_view model) {
  if (train.n() == 0) {
    throw TrainError(std::string(model) + ": empty training set");
  }
  if (train.dim() == 0) {
    throw TrainError(std::string(model) + ": training set has no features");
  }
  bool seen[2] = {false, false};
  for (const int y : train.labels) {
    if (y != 0 && y != 1) {
      throw TrainError(std::string(model) + ": label " + std::to_string(y) +
                       " outside {0,1}");
    }
    seen[y] = true;
  }
  if (require_both_classes && !(seen[0] && seen[1])) {
    throw TrainError(std::string(model) +
                     ": single-class training set (both classes required)");
  }
  for (const double v : train.features.data()) {
    if (!std::isfinite(v)) {
      throw TrainError(std::string(model) + ": non-finite feature value");
    }
  }
}

/// Uniform contract implemented by all eight classifiers.
///
/// score is oriented so that higher means more likely class 1 (notckd).
/// Probability-scaled models threshold score at 0.5; margin models at 0.
/// Tie handling at the exact threshold is documented per model.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::string_view name() const = 0;

  /// True when score values are probabilities of class 1 (in [0,1]).
  virtual bool score_is_probability() const = 0;

  virtual bool needs_both_classes() const { return false; }

  void fit(const Dataset& train, std::uint64_t seed) {
    validate_fit_inputs(train, needs_both_classes(), name());
    do_fit(train, seed);
    dim_ = train.dim();
    fitted_ = true;
  }

  std::vector<double> score(const Matrix& X) const {
    ensure_ready(X);
    std::vector<double> out;
    out.reserve(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) out.push_back(score_one(X.row(i)));
    return out;
  }

  std::vector<int> predict(const Matrix& X) const {
    ensure_ready(X);
    std::vector<int> out;
    out.reserve(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) out.push_back(predict_one(X.row(i)));
    return out;
  }

  bool is_fitted() const { return fitted_; }

  /// Read-only view of the fitted parameters (weights, trees, Gaussian
  /// tables), for serialization and tests.
  virtual json params() const = 0;

 protected:
  virtual void do_fit(const Dataset& train, std::uint64_t seed) = 0;
  virtual double score_one(std::span<const double> x) const = 0;

  /// Default decision rule: probability >= 0.5 is class 1. Models with other
  /// thresholds or tie rules override.
  virtual int predict_one(std::span<const double> x) const {
    return score_one(x) >= 0.5 ? 1 : 0;
  }

  void ensure_ready(const Matrix& X) const {
    if (!fitted_) {
      throw NotFittedError(std::string(name()) + ": predict/score before fit");
    }
    if (X.cols() != dim_) {
      throw DataError(std::string(name()) + ": feature dimension " +
                      std::to_string(X.cols()) + " does not match fit dimension " +
                      std::to_string(dim_));
    }
  }

 private:
  bool fitted_ = false;
  std::size_t dim_ = 0;
};

}  // namespace ckdml
