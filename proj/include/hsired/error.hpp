#pragma once

#include <stdexcept>
#include <string>

namespace hsired {

enum class ErrorKind {
  Dimension,
  Domain,
  Convergence,
  Degenerate,
  Parse,
  SizeMismatch,
  NonFinite,
  Io,
  MismatchedSplit,
  Usage,
  Resource,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Convergence: return "convergence error";
    case ErrorKind::Degenerate: return "degenerate input";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::SizeMismatch: return "size mismatch";
    case ErrorKind::NonFinite: return "non-finite value";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::MismatchedSplit: return "mismatched split";
    case ErrorKind::Usage: return "usage error";
    case ErrorKind::Resource: return "resource error";
  }
  return "error";
}

/// Every failure raised by the toolkit carries a kind so the CLI can map it
/// onto an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// 0 success, 1 usage, 2 data error, 3 numerical failure.
inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
    case ErrorKind::Domain:
      return 1;
    case ErrorKind::Convergence:
    case ErrorKind::Resource:
      return 3;
    default:
      return 2;
  }
}

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace hsired
