#include "usecurate/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "usecurate/error.hpp"

namespace usecurate {

double EntropyScoreSet::max_entropy() const { return std::log(static_cast<double>(k)); }

PredictiveDistribution validate_distribution(std::span<const double> raw, bool renormalize) {
  if (raw.size() < 2) {
    throw Error(ErrorCode::TooFewClasses,
                "need at least 2 classes, got " + std::to_string(raw.size()));
  }
  std::vector<double> probs(raw.begin(), raw.end());
  for (std::size_t c = 0; c < probs.size(); ++c) {
    double& p = probs[c];
    if (!std::isfinite(p)) {
      throw Error(ErrorCode::NonFiniteInput, "entry " + std::to_string(c) + " is not finite");
    }
    if (p < 0.0) {
      if (p < -kNegativeClamp) {
        std::ostringstream os;
        os << "entry " << c << " is " << p;
        throw Error(ErrorCode::NegativeProbability, os.str());
      }
      p = 0.0;
    }
    if (p > 1.0 + kSumTolerance) {
      std::ostringstream os;
      os << "entry " << c << " is " << p << " > 1";
      throw Error(ErrorCode::SumOutOfRange, os.str());
    }
  }

  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(sum - 1.0) > kSumTolerance) {
    if (!renormalize || sum < kRenormalizeLow || sum > kRenormalizeHigh) {
      std::ostringstream os;
      os << "probabilities sum to " << sum;
      throw Error(ErrorCode::SumOutOfRange, os.str());
    }
    for (double& p : probs) p /= sum;
  }
  for (double& p : probs) p = std::min(p, 1.0);
  return PredictiveDistribution(std::move(probs));
}

double entropy(const PredictiveDistribution& d) {
  double h = 0.0;
  for (double p : d.probs()) {
    if (p > 0.0) h -= p * std::log(p);
  }
  const double hmax = std::log(static_cast<double>(d.k()));
  return std::clamp(h, 0.0, hmax);
}

EntropyScoreSet score_pool(std::span<const PoolEntry> pool) {
  if (pool.empty()) throw Error(ErrorCode::EmptyPool, "pool has no samples");
  const std::size_t k = pool.front().second.k();
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].second.k() != k) {
      throw Error(ErrorCode::MixedClassCounts,
                  "sample " + std::to_string(i) + " has " + std::to_string(pool[i].second.k()) +
                      " classes, expected " + std::to_string(k));
    }
  }

  EntropyScoreSet out;
  out.k = k;
  out.scores.resize(pool.size());
  out.sample_ids.reserve(pool.size());
  for (const auto& entry : pool) out.sample_ids.push_back(entry.first);

  const auto n = static_cast<std::ptrdiff_t>(pool.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out.scores[static_cast<std::size_t>(i)] = entropy(pool[static_cast<std::size_t>(i)].second);
  }
  return out;
}

EntropyScoreSet make_score_set(std::vector<std::string> ids, std::vector<double> scores,
                               std::size_t k) {
  if (k < 2) throw Error(ErrorCode::TooFewClasses, "k must be at least 2");
  if (scores.empty()) throw Error(ErrorCode::EmptyPool, "no scores");
  if (ids.size() != scores.size()) {
    throw Error(ErrorCode::LengthMismatch, "ids and scores differ in length");
  }
  const double hmax = std::log(static_cast<double>(k));
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double u = scores[i];
    if (!std::isfinite(u)) {
      throw Error(ErrorCode::NonFiniteInput, "score " + std::to_string(i) + " is not finite");
    }
    if (u < 0.0 || u > hmax) {
      std::ostringstream os;
      os << "score " << i << " = " << u << " outside [0, ln " << k << "]";
      throw Error(ErrorCode::ScoreOutOfSupport, os.str());
    }
  }
  return EntropyScoreSet{std::move(scores), std::move(ids), k};
}

}  // namespace usecurate
