#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "usecurate/density.hpp"
#include "usecurate/entropy.hpp"
#include "usecurate/filter.hpp"
#include "usecurate/threshold.hpp"

namespace usecurate {

/// Three-component entropy mixture on [0, ln k]. Means and standard
/// deviations are given as fractions of ln k.
///   ID:       normal(mu_id, sd_id) truncated to the support
///   near-OOD: uniform over the support
///   far-OOD:  normal(mu_far, sd_far) truncated to the support
struct MixtureSpec {
  std::size_t k = 100;
  std::size_t n = 10000;
  std::array<double, 3> weights{0.5, 0.0, 0.5};  // id, near, far
  double mu_id = 0.2;
  double sd_id = 0.05;
  double mu_far = 0.95;
  double sd_far = 0.03;
  std::uint64_t seed = 20240901;

  void validate() const;
};

struct LabeledPool {
  EntropyScoreSet scores;
  std::vector<Truth> truth;
  MixtureSpec spec;
};

/// Samples are generated in fixed blocks of kSampleBlock indices, each with
/// its own engine seeded from (seed, block), so the pool is identical for
/// any thread count.
inline constexpr std::size_t kSampleBlock = 4096;

LabeledPool sample_pool(const MixtureSpec& spec);

struct ScenarioOptions {
  std::optional<double> bandwidth;
  std::size_t grid_points = kDefaultGridPoints;
  ReferenceKind reference = ReferenceKind::UniformEntropyAxis;
};

struct ScenarioResult {
  LabeledPool pool;
  DensityEstimate estimate;
  UseThreshold threshold;
  FilterMask mask;
  FilterQuality quality;
};

/// sample_pool -> fit_kde -> find_threshold -> apply_threshold -> filter_quality.
ScenarioResult run_scenario(const MixtureSpec& spec, const ScenarioOptions& options = {});

}  // namespace usecurate
