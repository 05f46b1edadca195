#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hbc {

enum class Errc {
  InvalidNetlist,
  SingularSystem,
  InvalidArgument,  // non-positive / negative / non-finite scalar inputs
  CodeOutOfRange,
  InvalidConfig,
  SafetyViolation,
  GridMismatch,
  MissingDistance,
  ZeroVariance,
  EmptyInput,
  IoError,
  FormatError,
  AllEvaluationsFailed,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Malformed CSV input; `line()` is 1-based and counts the header.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hbc
