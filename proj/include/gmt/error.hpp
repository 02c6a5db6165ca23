#pragma once

#include <stdexcept>
#include <string>

namespace gmt {

enum class ErrorKind {
  invalid_argument,
  empty_domain,
  empty_cloud,
  resolution,
  no_trace,
  no_modulus,
  support,
  degenerate_start,
  parse,
  validation,
  io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::empty_domain: return "empty-domain";
    case ErrorKind::empty_cloud: return "empty-cloud";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::no_trace: return "no-trace";
    case ErrorKind::no_modulus: return "no-modulus";
    case ErrorKind::support: return "support";
    case ErrorKind::degenerate_start: return "degenerate-start";
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the suite runner) can tell precondition failures apart.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace gmt
