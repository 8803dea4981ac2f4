#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "usecurate/entropy.hpp"

namespace usecurate {

inline constexpr std::size_t kDefaultGridPoints = 1024;
inline constexpr std::size_t kMinGridPoints = 64;

/// Uniform grid over the entropy support [0, ln k].
struct DensityGrid {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> u_values;

  static DensityGrid make(std::size_t k, std::size_t points = kDefaultGridPoints);

  std::size_t points() const noexcept { return u_values.size(); }
  double step() const noexcept { return (hi - lo) / static_cast<double>(points() - 1); }
  bool same_as(const DensityGrid& other) const noexcept;
};

enum class Execution { Serial, Parallel };

/// Reflected Gaussian KDE tabulated on a grid. Immutable once built by
/// fit_kde(); safe to share between threads.
struct DensityEstimate {
  DensityGrid grid;
  std::vector<double> density;        // 1/nats, renormalized
  std::vector<double> density_deriv;  // 1/nats^2, same normalization
  std::vector<double> cdf;            // cdf.front() == 0, cdf.back() == 1
  double bandwidth = 0.0;
  std::size_t n = 0;
  std::size_t k = 0;
  double raw_mass = 0.0;  // trapezoid mass before renormalization
  std::shared_ptr<const std::vector<double>> samples;

  double upper() const noexcept { return grid.hi; }
};

/// 0.9 * min(sd, IQR/1.34) * n^(-1/5), floored at 1e-4 ln k. IQR uses
/// linearly interpolated quartiles. Throws DegenerateScores when n < 2 or
/// every score is identical.
double silverman_bandwidth(const EntropyScoreSet& scores);

/// Quantile with linear interpolation between order statistics.
double quantile_linear(std::span<const double> sorted, double q);

DensityEstimate fit_kde(const EntropyScoreSet& scores, double bandwidth, const DensityGrid& grid,
                        Execution exec = Execution::Parallel);

/// Linear interpolation of the tabulated density.
double eval_density(const DensityEstimate& est, double u);

/// Exact reflected-kernel density and its derivative at an arbitrary u,
/// carrying the same normalization as the tabulated arrays.
double density_at(const DensityEstimate& est, double u);
double density_deriv_at(const DensityEstimate& est, double u);

}  // namespace usecurate
