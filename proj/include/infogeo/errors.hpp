#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace infogeo {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point, parameter or argument lies outside the set where the operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operands live on different alphabets or parameter spaces.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A custom escort map produced something that is not a strictly positive distribution.
class EscortRangeError : public Error {
 public:
  using Error::Error;
};

/// α = 1 was passed to an α-only routine; the caller has to use the KL/Shannon branch.
class DispatchError : public Error {
 public:
  using Error::Error;
};

/// A metric came out non-symmetric positive definite even after one jitter retry.
class ExtractionFailure : public Error {
 public:
  ExtractionFailure(const std::string& what, Eigen::MatrixXd raw)
      : Error(what), raw_(std::move(raw)) {}
  const Eigen::MatrixXd& raw() const noexcept { return raw_; }

 private:
  Eigen::MatrixXd raw_;
};

/// Barankin test points produce a singular likelihood-ratio Gram matrix.
class TestPointError : public Error {
 public:
  using Error::Error;
};

/// Invalid suite configuration. `line` is 0 when the source position is unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace infogeo
