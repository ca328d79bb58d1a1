#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace quasumb {

enum class ErrorKind {
  ZeroVector,
  InvalidFrame,
  SyntaxError,
  UnknownFunction,
  ArityError,
  DomainError,
  QuadratureFailure,
  EvaluationError,
  NotRegular,
  NotTimelike,
  SingularMetric,
  DegenerateSpec,
  DegenerateFrame,
  IntegrationBlowup,
  NoRootInRange,
  IOError,
  UsageError,
};

inline const char* to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::InvalidFrame: return "InvalidFrame";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownFunction: return "UnknownFunction";
    case ErrorKind::ArityError: return "ArityError";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::EvaluationError: return "EvaluationError";
    case ErrorKind::NotRegular: return "NotRegular";
    case ErrorKind::NotTimelike: return "NotTimelike";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::DegenerateSpec: return "DegenerateSpec";
    case ErrorKind::DegenerateFrame: return "DegenerateFrame";
    case ErrorKind::IntegrationBlowup: return "IntegrationBlowup";
    case ErrorKind::NoRootInRange: return "NoRootInRange";
    case ErrorKind::IOError: return "IOError";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "Unknown";
}

/// Base of every error raised by the library. The kind is the stable,
/// machine-checkable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& what)
      : Error(ErrorKind::SyntaxError, what + " at offset " + std::to_string(offset)),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

}  // namespace quasumb
