#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ptv {

/// Failure categories raised by the library. Each maps to a distinct CLI exit code.
enum class ErrorCode {
  InvalidArgument,
  ChannelMismatch,
  RateMismatch,
  DimensionMismatch,
  IncommensurateRate,
  WindowTooSmall,
  IncommensuratePeriods,
  CyclicGraph,
  NotSiso,
  NotSquare,
  IndivisiblePeriod,
  NotInvertible,
  GridTooSmall,
  EmptySignal,
  FormatError,
  IoError,
};

std::string_view error_name(ErrorCode code) noexcept;

/// Process exit status used by the CLI for `code`. IncommensurateRate is 2 and
/// WindowTooSmall is 3; the rest follow from 4 upwards.
int exit_code(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace ptv
