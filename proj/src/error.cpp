#include "usecurate/error.hpp"

namespace usecurate {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::SumOutOfRange: return "SumOutOfRange";
    case ErrorCode::TooFewClasses: return "TooFewClasses";
    case ErrorCode::MixedClassCounts: return "MixedClassCounts";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::DegenerateScores: return "DegenerateScores";
    case ErrorCode::BandwidthNonPositive: return "BandwidthNonPositive";
    case ErrorCode::ScoreOutOfSupport: return "ScoreOutOfSupport";
    case ErrorCode::OutOfSupport: return "OutOfSupport";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ClassCountMismatch: return "ClassCountMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NoIdSamples: return "NoIdSamples";
    case ErrorCode::DegenerateAbscissa: return "DegenerateAbscissa";
    case ErrorCode::NonIncreasingAbscissa: return "NonIncreasingAbscissa";
    case ErrorCode::AccuracyOutOfRange: return "AccuracyOutOfRange";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::InvalidMixture: return "InvalidMixture";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::MissingThreshold: return "MissingThreshold";
    case ErrorCode::MismatchedIds: return "MismatchedIds";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

int exit_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateScores:
    case ErrorCode::DegenerateAbscissa:
      return 3;
    case ErrorCode::IoFailure:
      return 4;
    default:
      return 2;
  }
}

}  // namespace usecurate
