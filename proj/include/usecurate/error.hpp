#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace usecurate {

enum class ErrorCode {
  // distribution / pool validation
  NonFiniteInput,
  NegativeProbability,
  SumOutOfRange,
  TooFewClasses,
  MixedClassCounts,
  EmptyPool,
  // density
  DegenerateScores,
  BandwidthNonPositive,
  ScoreOutOfSupport,
  OutOfSupport,
  InvalidGrid,
  // threshold
  UnsupportedKind,
  GridMismatch,
  // filter
  ClassCountMismatch,
  LengthMismatch,
  NoIdSamples,
  // robustness
  DegenerateAbscissa,
  NonIncreasingAbscissa,
  AccuracyOutOfRange,
  // synthetic
  InvalidWeights,
  InvalidMixture,
  // io
  MalformedInput,
  MissingThreshold,
  MismatchedIds,
  InvalidConfig,
  IoFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Process exit status for a failure of this kind:
/// 2 input validation, 3 degenerate data, 4 I/O failure.
int exit_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace usecurate
