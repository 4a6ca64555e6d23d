/**
 * @file error.hpp
 * @brief Error type shared by every dtns module.
 *
 * Every failure carries a stable machine-readable name (`EmptyImage`,
 * `OffsetOutOfRange`, ...) which the CLI prints verbatim on stderr.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dtns {

enum class ErrorCode {
  SyntaxError,
  EmptyImage,
  UnknownLetter,
  NoGrowingLetter,
  InvalidSeed,
  InvalidResidue,
  OffsetOutOfRange,
  SideMissing,
  SignRequired,
  DigitOutOfRange,
  NotFixedPointSeed,
  CapExceeded,
  NotPositionalSystem,
  NotLengthUniform,
  ShapeMismatch,
};

constexpr std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::EmptyImage: return "EmptyImage";
    case ErrorCode::UnknownLetter: return "UnknownLetter";
    case ErrorCode::NoGrowingLetter: return "NoGrowingLetter";
    case ErrorCode::InvalidSeed: return "InvalidSeed";
    case ErrorCode::InvalidResidue: return "InvalidResidue";
    case ErrorCode::OffsetOutOfRange: return "OffsetOutOfRange";
    case ErrorCode::SideMissing: return "SideMissing";
    case ErrorCode::SignRequired: return "SignRequired";
    case ErrorCode::DigitOutOfRange: return "DigitOutOfRange";
    case ErrorCode::NotFixedPointSeed: return "NotFixedPointSeed";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::NotPositionalSystem: return "NotPositionalSystem";
    case ErrorCode::NotLengthUniform: return "NotLengthUniform";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace dtns
