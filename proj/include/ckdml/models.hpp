#pragma once

#include <array>
#include <memory>
#include <string_view>

#include "ckdml/adaboost.hpp"
#include "ckdml/forest.hpp"
#include "ckdml/gbt.hpp"
#include "ckdml/knn.hpp"
#include "ckdml/linear.hpp"
#include "ckdml/naive_bayes.hpp"
#include "ckdml/tree.hpp"

namespace ckdml {

/// Canonical model names, in default benchmark order.
inline constexpr std::array<std::string_view, 8> kModelNames = {
    "decision_tree", "knn",           "logistic_regression", "naive_bayes",
    "svm",           "random_forest", "gradient_boosting",   "adaboost",
};

inline std::unique_ptr<Classifier> make_classifier(std::string_view model,
                                                   Hyperparams hp) {
  if (model == "decision_tree") return std::make_unique<DecisionTree>(std::move(hp));
  if (model == "knn") return std::make_unique<KnnClassifier>(std::move(hp));
  if (model == "logistic_regression") {
    return std::make_unique<LogisticRegression>(std::move(hp));
  }
  if (model == "naive_bayes") return std::make_unique<GaussianNb>(std::move(hp));
  if (model == "svm") return std::make_unique<LinearSvm>(std::move(hp));
  if (model == "random_forest") return std::make_unique<RandomForest>(std::move(hp));
  if (model == "gradient_boosting") {
    return std::make_unique<GradientBoosting>(std::move(hp));
  }
  if (model == "adaboost") return std::make_unique<AdaBoost>(std::move(hp));
  throw ConfigError("unknown model '" + std::string(model) + "'");
}

inline std::unique_ptr<Classifier> make_classifier(std::string_view model) {
  return make_classifier(model, Hyperparams::defaults_for(model));
}

}  // namespace ckdml
