#include "usecurate/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "usecurate/error.hpp"

namespace usecurate {

void MixtureSpec::validate() const {
  if (k < 2) throw Error(ErrorCode::TooFewClasses, "mixture needs k >= 2");
  if (n == 0) throw Error(ErrorCode::EmptyPool, "mixture needs n >= 1");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::InvalidWeights, "mixture weights must be non-negative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "mixture weights sum to " << total;
    throw Error(ErrorCode::InvalidWeights, os.str());
  }
  if (!(mu_id >= 0.0 && mu_id < mu_far && mu_far <= 1.0)) {
    throw Error(ErrorCode::InvalidMixture, "need 0 <= mu_id < mu_far <= 1");
  }
  if (!(sd_id > 0.0) || !(sd_far > 0.0)) {
    throw Error(ErrorCode::InvalidMixture, "component standard deviations must be positive");
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

template <class Engine>
double truncated_normal(Engine& rng, double mean, double sd, double upper) {
  std::normal_distribution<double> normal(mean, sd);
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    const double x = normal(rng);
    if (x >= 0.0 && x <= upper) return x;
  }
  throw Error(ErrorCode::InvalidMixture, "truncated normal rejection sampler did not accept");
}

}  // namespace

LabeledPool sample_pool(const MixtureSpec& spec) {
  spec.validate();
  const double upper = std::log(static_cast<double>(spec.k));
  const double cut_id = spec.weights[0];
  const double cut_near = spec.weights[0] + spec.weights[1];

  std::vector<double> scores(spec.n);
  std::vector<Truth> truth(spec.n);
  const auto blocks = static_cast<std::ptrdiff_t>((spec.n + kSampleBlock - 1) / kSampleBlock);

  // Exceptions must not escape an OpenMP region; rejection failure is
  // recorded and rethrown afterwards.
  bool failed = false;
#pragma omp parallel for schedule(static) reduction(|| : failed)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    try {
      std::mt19937_64 rng(splitmix64(spec.seed ^ splitmix64(static_cast<std::uint64_t>(b))));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::uniform_real_distribution<double> support(0.0, upper);
      const std::size_t begin = static_cast<std::size_t>(b) * kSampleBlock;
      const std::size_t end = std::min(begin + kSampleBlock, spec.n);
      for (std::size_t i = begin; i < end; ++i) {
        const double pick = unit(rng);
        if (pick < cut_id) {
          truth[i] = Truth::ID;
          scores[i] = truncated_normal(rng, spec.mu_id * upper, spec.sd_id * upper, upper);
        } else if (pick < cut_near) {
          truth[i] = Truth::NearOOD;
          scores[i] = std::min(support(rng), upper);
        } else {
          truth[i] = Truth::FarOOD;
          scores[i] = truncated_normal(rng, spec.mu_far * upper, spec.sd_far * upper, upper);
        }
      }
    } catch (const Error&) {
      failed = true;
    }
  }
  if (failed) throw Error(ErrorCode::InvalidMixture, "truncated normal rejection sampler failed");

  std::vector<std::string> ids(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) ids[i] = "s" + std::to_string(i);

  LabeledPool pool;
  pool.scores = make_score_set(std::move(ids), std::move(scores), spec.k);
  pool.truth = std::move(truth);
  pool.spec = spec;
  return pool;
}

ScenarioResult run_scenario(const MixtureSpec& spec, const ScenarioOptions& options) {
  ScenarioResult out;
  out.pool = sample_pool(spec);
  const double h = options.bandwidth ? *options.bandwidth : silverman_bandwidth(out.pool.scores);
  const DensityGrid grid = DensityGrid::make(spec.k, options.grid_points);
  out.estimate = fit_kde(out.pool.scores, h, grid);
  const ReferenceCurve ref = make_reference(options.reference, spec.k, grid);
  out.threshold = find_threshold(out.estimate, ref);
  out.mask = apply_threshold(out.pool.scores, out.threshold);
  out.quality = filter_quality(out.mask, out.pool.truth);
  return out;
}

}  // namespace usecurate
