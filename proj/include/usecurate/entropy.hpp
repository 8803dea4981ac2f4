#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace usecurate {

/// One sample's k-class probability vector. Only constructible through
/// validate_distribution(), so every instance satisfies the simplex checks.
class PredictiveDistribution {
 public:
  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t k() const noexcept { return probs_.size(); }

 private:
  explicit PredictiveDistribution(std::vector<double> probs) : probs_(std::move(probs)) {}
  friend PredictiveDistribution validate_distribution(std::span<const double>, bool);

  std::vector<double> probs_;
};

/// Entropy scores (nats) of an unlabeled pool, aligned with sample ids.
struct EntropyScoreSet {
  std::vector<double> scores;
  std::vector<std::string> sample_ids;
  std::size_t k = 0;

  std::size_t size() const noexcept { return scores.size(); }
  double max_entropy() const;  // ln k
};

inline constexpr double kSumTolerance = 1e-6;
inline constexpr double kRenormalizeLow = 0.99;
inline constexpr double kRenormalizeHigh = 1.01;
inline constexpr double kNegativeClamp = 1e-9;

/// Checks a raw probability vector. Entries in [-1e-9, 0) are clamped to 0.
/// With `renormalize`, a vector whose sum lies in [0.99, 1.01] is divided
/// by its sum; otherwise the sum must already be 1 within 1e-6.
PredictiveDistribution validate_distribution(std::span<const double> raw, bool renormalize);

/// Shannon entropy in nats with 0 ln 0 = 0, clamped to [0, ln k].
double entropy(const PredictiveDistribution& d);

using PoolEntry = std::pair<std::string, PredictiveDistribution>;

/// Scores every entry; order of the pool is preserved.
EntropyScoreSet score_pool(std::span<const PoolEntry> pool);

/// Constructs a score set after checking alignment and that each score lies
/// in [0, ln k].
EntropyScoreSet make_score_set(std::vector<std::string> ids, std::vector<double> scores,
                               std::size_t k);

}  // namespace usecurate
