#pragma once

#include <stdexcept>
#include <string>

namespace dqlstm {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Register size outside the supported range.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Qubit or angle index out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix dimensions disagree with a declared shape.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class EncodingError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a precondition that is not purely a shape problem.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Configuration rejected before any computation starts.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

/// A metric is mathematically undefined for the given data.
class MetricError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int epoch) : Error(what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

/// A dispatched job came back with an error status.
class JobFailure : public Error {
 public:
  JobFailure(const std::string& what, int partition) : Error(what), partition_(partition) {}
  int partition() const noexcept { return partition_; }

 private:
  int partition_;
};

}  // namespace dqlstm
