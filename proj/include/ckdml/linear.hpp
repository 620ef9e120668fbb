#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "ckdml/model.hpp"
#include "ckdml/preprocess.hpp"
#include "ckdml/rng.hpp"

namespace ckdml {

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// Mean binary cross-entropy plus (l2/2)*||w||^2. Computed from logits in the
/// overflow-safe form max(z,0) - z*y + log(1+exp(-|z|)).
inline double logistic_loss(const Matrix& X, std::span<const int> y,
                            std::span<const double> w, double bias, double l2) {
  double loss = 0.0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double z = bias;
    const auto row = X.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) z += w[j] * row[j];
    loss += std::max(z, 0.0) - z * y[i] + std::log1p(std::exp(-std::abs(z)));
  }
  loss /= static_cast<double>(X.rows());
  double reg = 0.0;
  for (const double wj : w) reg += wj * wj;
  return loss + 0.5 * l2 * reg;
}

/// Gradient of logistic_loss: grad_w = X^T(p - y)/n + l2*w, grad_b = mean(p - y).
inline void logistic_gradient(const Matrix& X, std::span<const int> y,
                              std::span<const double> w, double bias, double l2,
                              std::vector<double>& grad_w, double& grad_b) {
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  grad_w.assign(d, 0.0);
  grad_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double z = bias;
    const auto row = X.row(i);
    for (std::size_t j = 0; j < d; ++j) z += w[j] * row[j];
    const double err = sigmoid(z) - static_cast<double>(y[i]);
    for (std::size_t j = 0; j < d; ++j) grad_w[j] += err * row[j];
    grad_b += err;
  }
  for (std::size_t j = 0; j < d; ++j) {
    grad_w[j] = grad_w[j] / static_cast<double>(n) + l2 * w[j];
  }
  grad_b /= static_cast<double>(n);
}

/// Primal objective (lambda/2)*||w||^2 + mean hinge(1 - yt*(x.w+b)), yt in {-1,+1}.
inline double svm_objective(const Matrix& X, std::span<const int> y,
                            std::span<const double> w, double bias, double lambda) {
  double hinge = 0.0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double m = bias;
    const auto row = X.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) m += w[j] * row[j];
    const double yt = y[i] == 1 ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - yt * m);
  }
  hinge /= static_cast<double>(X.rows());
  double reg = 0.0;
  for (const double wj : w) reg += wj * wj;
  return 0.5 * lambda * reg + hinge;
}

/// Subgradient of svm_objective; at the hinge kink (margin exactly 1) the
/// zero branch is taken.
inline void svm_subgradient(const Matrix& X, std::span<const int> y,
                            std::span<const double> w, double bias, double lambda,
                            std::vector<double>& grad_w, double& grad_b) {
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  grad_w.assign(d, 0.0);
  grad_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double m = bias;
    const auto row = X.row(i);
    for (std::size_t j = 0; j < d; ++j) m += w[j] * row[j];
    const double yt = y[i] == 1 ? 1.0 : -1.0;
    if (yt * m < 1.0) {
      for (std::size_t j = 0; j < d; ++j) grad_w[j] -= yt * row[j];
      grad_b -= yt;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    grad_w[j] = grad_w[j] / static_cast<double>(n) + lambda * w[j];
  }
  grad_b /= static_cast<double>(n);
}

namespace detail {

/// Train-fitted standardization folded into a linear model. The gradient
/// defaults (learning_rate 0.1, lambda 1e-3) assume unit-scale features; raw
/// CKD columns span four orders of magnitude, so each linear model conditions
/// its inputs with statistics from its own training rows.
struct Conditioner {
  std::vector<double> mean;
  std::vector<double> stddev;

  void fit(const Dataset& train) {
    const Scaler s = fit_scaler(train);
    mean = s.mean;
    stddev = s.stddev;
  }

  Matrix transform(const Matrix& X) const {
    Matrix Z(X.rows(), X.cols());
    for (std::size_t i = 0; i < X.rows(); ++i) {
      for (std::size_t j = 0; j < X.cols(); ++j) {
        Z(i, j) = (X(i, j) - mean[j]) / stddev[j];
      }
    }
    return Z;
  }

  double dot_transformed(std::span<const double> x, std::span<const double> w) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      acc += w[j] * (x[j] - mean[j]) / stddev[j];
    }
    return acc;
  }
};

}  // namespace detail

/// Binary logistic regression trained by full-batch gradient descent on mean
/// cross-entropy with L2 penalty. Weights start at zero; training is
/// deterministic (the seed is unused). score is the probability of class 1;
/// predict thresholds at 0.5 with >= giving class 1.
class LogisticRegression final : public Classifier {
 public:
  explicit LogisticRegression(Hyperparams hp = Hyperparams::defaults_for("logistic_regression"))
      : hp_(std::move(hp)) {}

  std::string_view name() const override { return "logistic_regression"; }
  bool score_is_probability() const override { return true; }

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

  /// Objective value at initialization and after each epoch.
  const std::vector<double>& loss_history() const { return loss_history_; }

  json params() const override {
    return {{"weights", weights_},
            {"bias", bias_},
            {"input_mean", cond_.mean},
            {"input_stddev", cond_.stddev}};
  }

 protected:
  void do_fit(const Dataset& train, std::uint64_t /*seed*/) override {
    const double lr = hp_.get("learning_rate");
    const int epochs = hp_.get_int("epochs");
    const double l2 = hp_.get("l2_lambda");

    cond_.fit(train);
    const Matrix Z = cond_.transform(train.features);
    weights_.assign(train.dim(), 0.0);
    bias_ = 0.0;
    loss_history_.clear();
    loss_history_.push_back(logistic_loss(Z, train.labels, weights_, bias_, l2));

    std::vector<double> grad_w;
    double grad_b = 0.0;
    for (int e = 0; e < epochs; ++e) {
      logistic_gradient(Z, train.labels, weights_, bias_, l2, grad_w, grad_b);
      for (std::size_t j = 0; j < weights_.size(); ++j) weights_[j] -= lr * grad_w[j];
      bias_ -= lr * grad_b;
      const double loss = logistic_loss(Z, train.labels, weights_, bias_, l2);
      if (!std::isfinite(loss)) {
        throw TrainError("logistic_regression: loss diverged; use a smaller learning_rate");
      }
      loss_history_.push_back(loss);
    }
  }

  double score_one(std::span<const double> x) const override {
    return sigmoid(cond_.dot_transformed(x, weights_) + bias_);
  }

 private:
  Hyperparams hp_;
  detail::Conditioner cond_;
  std::vector<double> weights_;
  double bias_ = 0.0;
  std::vector<double> loss_history_;
};

/// Linear soft-margin SVM trained by Pegasos-style subgradient descent with
/// step 1/(lambda*t) and seeded per-epoch shuffling. The bias is a separate
/// unregularized parameter. score is the raw margin; predict uses margin >= 0
/// as class 1.
class LinearSvm final : public Classifier {
 public:
  explicit LinearSvm(Hyperparams hp = Hyperparams::defaults_for("svm"))
      : hp_(std::move(hp)) {}

  std::string_view name() const override { return "svm"; }
  bool score_is_probability() const override { return false; }

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

  json params() const override {
    return {{"weights", weights_},
            {"bias", bias_},
            {"input_mean", cond_.mean},
            {"input_stddev", cond_.stddev}};
  }

 protected:
  void do_fit(const Dataset& train, std::uint64_t seed) override {
    const double lambda = hp_.get("lambda");
    const int epochs = hp_.get_int("epochs");

    cond_.fit(train);
    const Matrix Z = cond_.transform(train.features);
    const std::size_t n = train.n();
    const std::size_t d = train.dim();
    weights_.assign(d, 0.0);
    bias_ = 0.0;

    Rng rng(seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::uint64_t t = 0;
    for (int e = 0; e < epochs; ++e) {
      rng.shuffle(order);
      for (const std::size_t i : order) {
        ++t;
        const double eta = 1.0 / (lambda * static_cast<double>(t));
        const auto row = Z.row(i);
        double m = bias_;
        for (std::size_t j = 0; j < d; ++j) m += weights_[j] * row[j];
        const double yt = train.labels[i] == 1 ? 1.0 : -1.0;
        const double shrink = 1.0 - eta * lambda;
        if (yt * m < 1.0) {
          for (std::size_t j = 0; j < d; ++j) {
            weights_[j] = shrink * weights_[j] + eta * yt * row[j];
          }
          bias_ += eta * yt;
        } else {
          for (std::size_t j = 0; j < d; ++j) weights_[j] *= shrink;
        }
      }
    }
    for (const double wj : weights_) {
      if (!std::isfinite(wj)) throw TrainError("svm: weights diverged");
    }
    if (!std::isfinite(bias_)) throw TrainError("svm: bias diverged");
  }

  double score_one(std::span<const double> x) const override {
    return cond_.dot_transformed(x, weights_) + bias_;
  }

  int predict_one(std::span<const double> x) const override {
    return score_one(x) >= 0.0 ? 1 : 0;
  }

 private:
  Hyperparams hp_;
  detail::Conditioner cond_;
  std::vector<double> weights_;
  double bias_ = 0.0;
};

}  // namespace ckdml
