#include "ptv/error.hpp"

namespace ptv {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ChannelMismatch: return "ChannelMismatch";
    case ErrorCode::RateMismatch: return "RateMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IncommensurateRate: return "IncommensurateRate";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::IncommensuratePeriods: return "IncommensuratePeriods";
    case ErrorCode::CyclicGraph: return "CyclicGraph";
    case ErrorCode::NotSiso: return "NotSiso";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::IndivisiblePeriod: return "IndivisiblePeriod";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::EmptySignal: return "EmptySignal";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_code(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IncommensurateRate: return 2;
    case ErrorCode::WindowTooSmall: return 3;
    case ErrorCode::InvalidArgument: return 4;
    case ErrorCode::ChannelMismatch: return 5;
    case ErrorCode::RateMismatch: return 6;
    case ErrorCode::DimensionMismatch: return 7;
    case ErrorCode::IncommensuratePeriods: return 8;
    case ErrorCode::CyclicGraph: return 9;
    case ErrorCode::NotSiso: return 10;
    case ErrorCode::NotSquare: return 11;
    case ErrorCode::IndivisiblePeriod: return 12;
    case ErrorCode::NotInvertible: return 13;
    case ErrorCode::GridTooSmall: return 14;
    case ErrorCode::EmptySignal: return 15;
    case ErrorCode::FormatError: return 16;
    case ErrorCode::IoError: return 17;
  }
  return 1;
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace ptv
