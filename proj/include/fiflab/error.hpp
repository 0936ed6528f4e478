#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fiflab {

enum class ErrorCode {
  NotStrictlyIncreasing,
  TooFewKnots,
  DegenerateInterval,
  NotContractive,
  InvalidScaling,
  InvalidModulus,
  EmptySample,
  NotInCarrier,
  LengthMismatch,
  SeedMismatch,
  BaseEndpointMismatch,
  BaseEqualsSeed,
  EmptyCloud,
  GridMismatch,
  NoConvergence,
  OutOfDomain,
  InvalidRatios,
  DegenerateRange,
  BadHeader,
  BadRow,
  OrderViolation,
  TooFewRows,
  SinkWriteFailure,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; `code()` distinguishes the cause and
// `index()` carries the offending position (knot index, CSV line) when known.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace fiflab
