#include "usecurate/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "usecurate/error.hpp"

namespace usecurate {

std::string_view to_string(ReferenceKind kind) noexcept {
  switch (kind) {
    case ReferenceKind::UniformEntropyAxis: return "uniform_entropy_axis";
  }
  return "unknown";
}

ReferenceKind parse_reference_kind(std::string_view name) {
  if (name == "uniform_entropy_axis" || name == "UniformEntropyAxis" || name == "uniform") {
    return ReferenceKind::UniformEntropyAxis;
  }
  throw Error(ErrorCode::UnsupportedKind, "unknown reference curve '" + std::string(name) + "'");
}

std::string_view to_string(Fallback f) noexcept {
  return f == Fallback::None ? "None" : "KeepAll";
}

ReferenceCurve make_reference(ReferenceKind kind, std::size_t k, const DensityGrid& grid) {
  if (k < 2) throw Error(ErrorCode::TooFewClasses, "k must be at least 2");
  if (kind != ReferenceKind::UniformEntropyAxis) {
    throw Error(ErrorCode::UnsupportedKind, "unsupported reference curve");
  }
  const double log_k = std::log(static_cast<double>(k));
  if (grid.hi != log_k || grid.lo != 0.0) {
    throw Error(ErrorCode::GridMismatch, "grid does not span [0, ln k]");
  }
  ReferenceCurve ref;
  ref.kind = kind;
  ref.k = k;
  ref.grid = grid;
  ref.cdf.resize(grid.points());
  ref.slope.assign(grid.points(), 1.0 / log_k);
  for (std::size_t i = 0; i < grid.points(); ++i) ref.cdf[i] = grid.u_values[i] / log_k;
  ref.cdf.back() = 1.0;
  return ref;
}

std::size_t DiscrepancyProfile::argmax_delta() const {
  return static_cast<std::size_t>(std::distance(delta.begin(),
                                                std::max_element(delta.begin(), delta.end())));
}

DiscrepancyProfile discrepancy(const DensityEstimate& est, const ReferenceCurve& ref) {
  if (!est.grid.same_as(ref.grid)) {
    throw Error(ErrorCode::GridMismatch, "density estimate and reference use different grids");
  }
  DiscrepancyProfile p;
  p.grid = est.grid;
  const std::size_t m = est.grid.points();
  p.delta.resize(m);
  p.delta_deriv.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    p.delta[i] = est.cdf[i] - ref.cdf[i];
    p.delta_deriv[i] = est.density[i] - ref.slope[i];
  }
  return p;
}

UseThreshold keep_all_threshold(std::size_t k) {
  UseThreshold t;
  t.k = k;
  t.u_star = std::log(static_cast<double>(k));
  t.crossing_found = false;
  t.fallback = Fallback::KeepAll;
  return t;
}

namespace {

// F0' is constant for the uniform entropy axis, so the reference slope at an
// off-grid point is that constant.
double reference_slope_at(const ReferenceCurve& ref) { return ref.slope.front(); }

struct Refined {
  double u;
  double g;
  int iters;
};

Refined bisect(const DensityEstimate& est, double ref_slope, double lo, double hi) {
  double mid = lo;
  double g_mid = density_at(est, lo) - ref_slope;
  int iters = 0;
  while (iters < kMaxBisectionIters) {
    mid = 0.5 * (lo + hi);
    g_mid = density_at(est, mid) - ref_slope;
    ++iters;
    if (std::abs(g_mid) < kCrossingTolerance) break;
    if (g_mid >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {mid, g_mid, iters};
}

}  // namespace

UseThreshold find_threshold(const DensityEstimate& est, const ReferenceCurve& ref) {
  if (!est.grid.same_as(ref.grid)) {
    throw Error(ErrorCode::GridMismatch, "density estimate and reference use different grids");
  }
  UseThreshold result = keep_all_threshold(ref.k);

  const DiscrepancyProfile profile = discrepancy(est, ref);
  result.argmax_delta_index = profile.argmax_delta();
  result.argmax_delta_u = est.grid.u_values[result.argmax_delta_index];

  const double ref_slope = reference_slope_at(ref);
  const auto& g = profile.delta_deriv;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    if (!(g[i] >= 0.0 && g[i + 1] < 0.0)) continue;
    const Refined r = bisect(est, ref_slope, est.grid.u_values[i], est.grid.u_values[i + 1]);
    const double slope = density_deriv_at(est, r.u);
    if (slope <= kSlopeTolerance) {
      result.u_star = r.u;
      result.crossing_found = true;
      result.fallback = Fallback::None;
      result.refinement_iters = r.iters;
      result.bracket_index = i;
      result.residual = r.g;
      result.slope_at_crossing = slope;
      return result;
    }
    ++result.rejected_crossings;
  }
  return result;
}

}  // namespace usecurate
