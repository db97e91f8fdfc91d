#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace redistrib {

enum class ErrorKind {
  invalid_argument,
  precondition,
  cap_exceeded,
  malformed_input,
  undefined_bound,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::cap_exceeded: return "cap_exceeded";
    case ErrorKind::malformed_input: return "malformed_input";
    case ErrorKind::undefined_bound: return "undefined_bound";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) {
    throw Error(kind, message);
  }
}

}  // namespace redistrib
