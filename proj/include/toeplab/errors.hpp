#pragma once

#include <stdexcept>
#include <string>

namespace toeplab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point lies on or outside the boundary of the model domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A parameter violates an admissibility condition (e.g. beta <= -1).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The requested branch of a diagnostic does not apply to these parameters.
class BranchError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// An integrand or test function produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed the configured memory or work budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An integral that the caller asked for does not converge.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment configuration; the message starts with the field path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace toeplab
