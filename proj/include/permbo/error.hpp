#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace permbo {

enum class ErrorKind {
  Empty,
  DuplicateElement,
  OutOfRange,
  LengthMismatch,
  DuplicateValues,
  WindowTooLarge,
  InvalidArgument,
  NotPositiveDefinite,
  DegenerateData,
  SearchSpaceExhausted,
  IndexOutOfRange,
  BlockTooWide,
  ParseError,
  DimensionMismatch,
  TooLarge,
  MissingOptimum,
  ConfigError,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Empty: return "Empty";
    case ErrorKind::DuplicateElement: return "DuplicateElement";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::DuplicateValues: return "DuplicateValues";
    case ErrorKind::WindowTooLarge: return "WindowTooLarge";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::SearchSpaceExhausted: return "SearchSpaceExhausted";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::BlockTooWide: return "BlockTooWide";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::MissingOptimum: return "MissingOptimum";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace permbo
