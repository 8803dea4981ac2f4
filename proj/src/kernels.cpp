#include "usecurate/kernels.hpp"

#include <cstddef>

namespace usecurate::kernels {

void reflected_kde_serial(std::span<const double> samples, double h, double upper,
                          std::span<const double> grid, std::span<double> density,
                          std::span<double> deriv) {
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const KernelSum k = reflected_gaussian_at(samples, grid[j], h, upper);
    density[j] = k.density;
    deriv[j] = k.deriv;
  }
}

void reflected_kde_parallel(std::span<const double> samples, double h, double upper,
                            std::span<const double> grid, std::span<double> density,
                            std::span<double> deriv) {
  const auto m = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < m; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    const KernelSum k = reflected_gaussian_at(samples, grid[idx], h, upper);
    density[idx] = k.density;
    deriv[idx] = k.deriv;
  }
}

}  // namespace usecurate::kernels
