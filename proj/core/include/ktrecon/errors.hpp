#pragma once

#include <stdexcept>
#include <string>

namespace ktr {

enum class ErrorKind {
  Io,       // missing/unreadable/unwritable file
  Format,   // bad magic, unsupported version, truncated payload, malformed JSON
  Domain,   // wrong domain tag, axis or extent mismatch
  Config,   // invalid configuration value or violated invariant
  Numeric,  // non-finite data, divergence
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Io: return "io";
    case ErrorKind::Format: return "format";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Config: return "config";
    case ErrorKind::Numeric: return "numeric";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

}  // namespace ktr
