#include "hbc/error.hpp"

namespace hbc {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidNetlist: return "InvalidNetlist";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::CodeOutOfRange: return "CodeOutOfRange";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::SafetyViolation: return "SafetyViolation";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::MissingDistance: return "MissingDistance";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::IoError: return "IoError";
    case Errc::FormatError: return "FormatError";
    case Errc::AllEvaluationsFailed: return "AllEvaluationsFailed";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

FormatError::FormatError(std::size_t line, const std::string& message)
    : Error(Errc::FormatError, "line " + std::to_string(line) + ": " + message), line_(line) {}

}  // namespace hbc
