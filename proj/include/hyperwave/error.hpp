#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperwave {

enum class ErrorCode {
  MaskInconsistent,
  DimensionMismatch,
  LevelTooCoarse,
  LevelBelowCoarsest,
  WrongSystem,
  UnsupportedDimension,
  InvalidExponent,
  ExponentOutOfRange,
  InsufficientPoints,
  DivisionByZero,
  SizeTooLarge,
  UnknownKind,
  IoError,
  ParseError,
  BasisMismatch,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::MaskInconsistent: return "MaskInconsistent";
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::LevelTooCoarse: return "LevelTooCoarse";
  case ErrorCode::LevelBelowCoarsest: return "LevelBelowCoarsest";
  case ErrorCode::WrongSystem: return "WrongSystem";
  case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
  case ErrorCode::InvalidExponent: return "InvalidExponent";
  case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
  case ErrorCode::InsufficientPoints: return "InsufficientPoints";
  case ErrorCode::DivisionByZero: return "DivisionByZero";
  case ErrorCode::SizeTooLarge: return "SizeTooLarge";
  case ErrorCode::UnknownKind: return "UnknownKind";
  case ErrorCode::IoError: return "IoError";
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::BasisMismatch: return "BasisMismatch";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable error code.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string &what) {
  if (!condition)
    throw Error(code, what);
}

// Literal messages skip the std::string construction on the success path.
inline void require(bool condition, ErrorCode code, const char *what) {
  if (!condition)
    throw Error(code, what);
}

} // namespace hyperwave
