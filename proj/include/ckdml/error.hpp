#pragma once

#include <stdexcept>
#include <string>

namespace ckdml {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: bad flag values, unknown hyperparameter keys,
/// malformed schema files. CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Problems with input data: shape mismatches, unknown categories,
/// degenerate splits, missing cells where none are allowed. CLI exit code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

/// CSV ingestion failure; messages carry 1-based line numbers.
class CsvError : public DataError {
 public:
  using DataError::DataError;
};

/// Training-time failure: divergence, degenerate training sets. CLI exit code 4.
class TrainError : public Error {
 public:
  using Error::Error;
};

/// predict/score called on a model that has not been fitted.
class NotFittedError : public TrainError {
 public:
  using TrainError::TrainError;
};

}  // namespace ckdml
