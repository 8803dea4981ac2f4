#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "usecurate/density.hpp"

namespace usecurate {

/// Structureless reference curves. Only the uniform law on the entropy axis
/// exists today.
enum class ReferenceKind { UniformEntropyAxis };

std::string_view to_string(ReferenceKind kind) noexcept;
ReferenceKind parse_reference_kind(std::string_view name);

struct ReferenceCurve {
  ReferenceKind kind = ReferenceKind::UniformEntropyAxis;
  std::size_t k = 0;
  DensityGrid grid;
  std::vector<double> cdf;    // F0
  std::vector<double> slope;  // F0'
};

ReferenceCurve make_reference(ReferenceKind kind, std::size_t k, const DensityGrid& grid);

/// delta = F_hat - F0 and delta_deriv = p_hat - F0' on the shared grid.
struct DiscrepancyProfile {
  DensityGrid grid;
  std::vector<double> delta;
  std::vector<double> delta_deriv;

  std::size_t argmax_delta() const;
};

DiscrepancyProfile discrepancy(const DensityEstimate& est, const ReferenceCurve& ref);

enum class Fallback { None, KeepAll };

std::string_view to_string(Fallback f) noexcept;

inline constexpr double kCrossingTolerance = 1e-8;
inline constexpr int kMaxBisectionIters = 100;
inline constexpr double kSlopeTolerance = 1e-9;

struct UseThreshold {
  double u_star = 0.0;
  std::size_t k = 0;
  bool crossing_found = false;
  Fallback fallback = Fallback::KeepAll;
  int refinement_iters = 0;
  std::optional<std::size_t> bracket_index;  // left grid index of the crossing cell
  double residual = 0.0;                     // p_hat(u*) - F0'(u*)
  double slope_at_crossing = 0.0;            // dp_hat/du at u*
  std::size_t rejected_crossings = 0;        // sign changes failing the slope test
  std::size_t argmax_delta_index = 0;        // diagnostic only
  double argmax_delta_u = 0.0;
};

/// First downward crossing of the density through the reference slope.
/// Grid cells are scanned left to right for g = p_hat - F0' going from
/// g >= 0 to g < 0; the first such cell is refined by bisection on the exact
/// kernel sum until |g| < 1e-8 (at most 100 halvings). The crossing is
/// accepted when dp_hat/du <= 1e-9 there, otherwise the scan resumes. With no
/// accepted crossing the result keeps every sample: u* = ln k and
/// fallback = KeepAll.
UseThreshold find_threshold(const DensityEstimate& est, const ReferenceCurve& ref);

/// Threshold that keeps everything, for callers that skip estimation.
UseThreshold keep_all_threshold(std::size_t k);

}  // namespace usecurate
