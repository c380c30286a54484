#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curv4 {

enum class ErrorKind { invalid_input, domain, not_found, integration_failure };

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input:
      return "invalid-input";
    case ErrorKind::domain:
      return "domain-error";
    case ErrorKind::not_found:
      return "not-found";
    case ErrorKind::integration_failure:
      return "integration-failure";
  }
  return "unknown";
}

/// Base of every error thrown by the library; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& detail)
      : Error(ErrorKind::invalid_input, detail) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& detail)
      : Error(ErrorKind::domain, detail) {}
};

class NotFound : public Error {
 public:
  explicit NotFound(const std::string& detail)
      : Error(ErrorKind::not_found, detail) {}
};

}  // namespace curv4
