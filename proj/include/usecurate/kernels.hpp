#pragma once

// Reflected Gaussian KDE kernels on [0, upper].
//
// Each sample u_i contributes kernels centred at u_i, -u_i and 2*upper - u_i.
// The serial and OpenMP entry points evaluate every grid point with the same
// per-point routine and the same summation order, so their outputs are
// bitwise identical; the serial one is kept as the reference for tests and
// for the benchmark.

#include <cmath>
#include <numbers>
#include <span>

namespace usecurate::kernels {

struct KernelSum {
  double density = 0.0;  // sum of K(z)/(n h)
  double deriv = 0.0;    // d/du of the same sum
};

inline constexpr double kInvSqrt2Pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;

inline KernelSum reflected_gaussian_at(std::span<const double> samples, double u, double h,
                                       double upper) noexcept {
  const double inv_h = 1.0 / h;
  double dens = 0.0;
  double slope = 0.0;
  for (const double s : samples) {
    const double centres[3] = {s, -s, 2.0 * upper - s};
    for (const double c : centres) {
      const double z = (u - c) * inv_h;
      const double phi = std::exp(-0.5 * z * z);
      dens += phi;
      slope -= z * phi;
    }
  }
  const double norm = kInvSqrt2Pi / (static_cast<double>(samples.size()) * h);
  return {dens * norm, slope * norm * inv_h};
}

/// Reference implementation: one grid point after another.
void reflected_kde_serial(std::span<const double> samples, double h, double upper,
                          std::span<const double> grid, std::span<double> density,
                          std::span<double> deriv);

/// Grid points distributed over OpenMP threads.
void reflected_kde_parallel(std::span<const double> samples, double h, double upper,
                            std::span<const double> grid, std::span<double> density,
                            std::span<double> deriv);

}  // namespace usecurate::kernels
