#include "usecurate/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "usecurate/error.hpp"

namespace usecurate {

AccuracySeries::AccuracySeries(std::string name, std::vector<AccuracyPoint> points)
    : name_(std::move(name)), points_(std::move(points)) {
  if (points_.size() < 2) {
    throw Error(ErrorCode::DegenerateAbscissa,
                "series '" + name_ + "' needs at least 2 points, got " +
                    std::to_string(points_.size()));
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.r) || !std::isfinite(p.accuracy)) {
      throw Error(ErrorCode::NonFiniteInput, "series '" + name_ + "' has a non-finite value");
    }
    if (p.r < 0.0 || p.r >= 1.0) {
      std::ostringstream os;
      os << "series '" << name_ << "': r = " << p.r << " outside [0, 1)";
      throw Error(ErrorCode::MalformedInput, os.str());
    }
    if (p.accuracy < 0.0 || p.accuracy > 1.0) {
      std::ostringstream os;
      os << "series '" << name_ << "': accuracy " << p.accuracy << " outside [0, 1]";
      throw Error(ErrorCode::AccuracyOutOfRange, os.str());
    }
    if (i > 0 && !(p.r > points_[i - 1].r)) {
      std::ostringstream os;
      os << "series '" << name_ << "': r not strictly increasing at " << p.r;
      throw Error(ErrorCode::NonIncreasingAbscissa, os.str());
    }
  }
}

double avg(const AccuracySeries& s) {
  double sum = 0.0;
  for (const auto& p : s.points()) sum += p.accuracy;
  return sum / static_cast<double>(s.size());
}

double rslope(const AccuracySeries& s) {
  double r_mean = 0.0;
  for (const auto& p : s.points()) r_mean += p.r;
  r_mean /= static_cast<double>(s.size());
  const double a_mean = avg(s);

  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& p : s.points()) {
    sxy += (p.r - r_mean) * (p.accuracy - a_mean);
    sxx += (p.r - r_mean) * (p.r - r_mean);
  }
  if (sxx == 0.0) throw Error(ErrorCode::DegenerateAbscissa, "all r values are equal");
  return sxy / sxx;
}

double gm(const AccuracySeries& s) {
  const double mean = avg(s);
  double total = 0.0;
  for (const auto& p : s.points()) total += std::abs(p.accuracy - mean);
  return total;
}

AdjacentDrops adjacent_drops(const AccuracySeries& s) {
  const auto pts = s.points();
  AdjacentDrops out;
  std::size_t non_decreasing = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double dr = pts[i + 1].r - pts[i].r;
    if (!(dr > 0.0)) throw Error(ErrorCode::DegenerateAbscissa, "adjacent r values coincide");
    const double da = pts[i + 1].accuracy - pts[i].accuracy;
    const double slope = da / dr;
    if (i == 0) {
      out.bad = out.wad = slope;
    } else {
      out.bad = std::max(out.bad, slope);
      out.wad = std::min(out.wad, slope);
    }
    if (da >= 0.0) ++non_decreasing;
  }
  out.p_ad = static_cast<double>(non_decreasing) / static_cast<double>(pts.size() - 1);
  return out;
}

RobustnessReport robustness_report(const AccuracySeries& s) {
  const AdjacentDrops d = adjacent_drops(s);
  return {avg(s), rslope(s), gm(s), d.bad, d.wad, d.p_ad};
}

double round_half_away(double x, int digits) {
  const double scale = std::pow(10.0, digits);
  const double r = std::round(x * scale) / scale;  // std::round is half-away-from-zero
  return r == 0.0 ? 0.0 : r;
}

}  // namespace usecurate
