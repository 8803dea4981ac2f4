#include "usecurate/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "usecurate/error.hpp"
#include "usecurate/kernels.hpp"

namespace usecurate {

DensityGrid DensityGrid::make(std::size_t k, std::size_t points) {
  if (k < 2) throw Error(ErrorCode::TooFewClasses, "k must be at least 2");
  if (points < kMinGridPoints) {
    throw Error(ErrorCode::InvalidGrid, "grid needs at least " + std::to_string(kMinGridPoints) +
                                            " points, got " + std::to_string(points));
  }
  DensityGrid g;
  g.lo = 0.0;
  g.hi = std::log(static_cast<double>(k));
  g.u_values.resize(points);
  const double step = (g.hi - g.lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g.u_values[i] = g.lo + static_cast<double>(i) * step;
  g.u_values.back() = g.hi;
  return g;
}

bool DensityGrid::same_as(const DensityGrid& other) const noexcept {
  return lo == other.lo && hi == other.hi && u_values == other.u_values;
}

double quantile_linear(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto below = static_cast<std::size_t>(std::floor(pos));
  const std::size_t above = std::min(below + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(below);
  return sorted[below] + frac * (sorted[above] - sorted[below]);
}

double silverman_bandwidth(const EntropyScoreSet& scores) {
  const std::size_t n = scores.size();
  if (n < 2) throw Error(ErrorCode::DegenerateScores, "need at least 2 scores for Silverman's rule");
  const auto [mn, mx] = std::minmax_element(scores.scores.begin(), scores.scores.end());
  if (*mn == *mx) {
    throw Error(ErrorCode::DegenerateScores,
                "all scores are identical; pass an explicit bandwidth");
  }

  const double mean =
      std::accumulate(scores.scores.begin(), scores.scores.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double u : scores.scores) ss += (u - mean) * (u - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  std::vector<double> sorted = scores.scores;
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_linear(sorted, 0.75) - quantile_linear(sorted, 0.25);

  const double spread = std::min(sd, iqr / 1.34);
  const double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
  return std::max(h, 1e-4 * scores.max_entropy());
}

DensityEstimate fit_kde(const EntropyScoreSet& scores, double bandwidth, const DensityGrid& grid,
                        Execution exec) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    std::ostringstream os;
    os << "bandwidth " << bandwidth << " must be positive";
    throw Error(ErrorCode::BandwidthNonPositive, os.str());
  }
  if (scores.size() == 0) throw Error(ErrorCode::EmptyPool, "no scores to fit");
  const double upper = scores.max_entropy();
  if (grid.points() < 2 || grid.hi != upper || grid.lo != 0.0) {
    throw Error(ErrorCode::GridMismatch, "grid does not span [0, ln k]");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double u = scores.scores[i];
    if (!(u >= 0.0 && u <= upper)) {
      std::ostringstream os;
      os << "score " << i << " = " << u << " outside [0, " << upper << "]";
      throw Error(ErrorCode::ScoreOutOfSupport, os.str());
    }
  }

  DensityEstimate est;
  est.grid = grid;
  est.bandwidth = bandwidth;
  est.n = scores.size();
  est.k = scores.k;
  est.samples = std::make_shared<const std::vector<double>>(scores.scores);

  const std::size_t m = grid.points();
  est.density.resize(m);
  est.density_deriv.resize(m);
  if (exec == Execution::Serial) {
    kernels::reflected_kde_serial(*est.samples, bandwidth, upper, grid.u_values, est.density,
                                  est.density_deriv);
  } else {
    kernels::reflected_kde_parallel(*est.samples, bandwidth, upper, grid.u_values, est.density,
                                    est.density_deriv);
  }

  // cumulative trapezoid
  est.cdf.assign(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) {
    const double du = grid.u_values[i] - grid.u_values[i - 1];
    est.cdf[i] = est.cdf[i - 1] + 0.5 * du * (est.density[i] + est.density[i - 1]);
  }
  est.raw_mass = est.cdf.back();

  const double inv_mass = 1.0 / est.raw_mass;
  for (std::size_t i = 0; i < m; ++i) {
    est.density[i] *= inv_mass;
    est.density_deriv[i] *= inv_mass;
    est.cdf[i] *= inv_mass;
  }
  est.cdf.back() = 1.0;
  return est;
}

double eval_density(const DensityEstimate& est, double u) {
  const auto& g = est.grid;
  if (!(u >= g.lo && u <= g.hi)) {
    std::ostringstream os;
    os << "u = " << u << " outside [" << g.lo << ", " << g.hi << "]";
    throw Error(ErrorCode::OutOfSupport, os.str());
  }
  const double step = g.step();
  auto i = static_cast<std::size_t>(std::floor((u - g.lo) / step));
  i = std::min(i, g.points() - 2);
  // floating-point floor can land one cell off
  if (u < g.u_values[i] && i > 0) --i;
  if (u > g.u_values[i + 1] && i + 2 < g.points()) ++i;
  const double u0 = g.u_values[i];
  const double u1 = g.u_values[i + 1];
  if (u == u0) return est.density[i];
  if (u == u1) return est.density[i + 1];
  const double t = (u - u0) / (u1 - u0);
  return est.density[i] + t * (est.density[i + 1] - est.density[i]);
}

namespace {

kernels::KernelSum exact_at(const DensityEstimate& est, double u) {
  if (!(u >= est.grid.lo && u <= est.grid.hi)) {
    std::ostringstream os;
    os << "u = " << u << " outside [" << est.grid.lo << ", " << est.grid.hi << "]";
    throw Error(ErrorCode::OutOfSupport, os.str());
  }
  return kernels::reflected_gaussian_at(*est.samples, u, est.bandwidth, est.upper());
}

}  // namespace

double density_at(const DensityEstimate& est, double u) {
  return exact_at(est, u).density * (1.0 / est.raw_mass);
}

double density_deriv_at(const DensityEstimate& est, double u) {
  return exact_at(est, u).deriv * (1.0 / est.raw_mass);
}

}  // namespace usecurate
