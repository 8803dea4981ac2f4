#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace usecurate {

struct AccuracyPoint {
  double r = 0.0;
  double accuracy = 0.0;
};

/// Accuracy measured at increasing contamination ratios.
/// Invariants: at least 2 points, r strictly increasing in [0, 1),
/// accuracy in [0, 1].
class AccuracySeries {
 public:
  AccuracySeries(std::string name, std::vector<AccuracyPoint> points);

  const std::string& name() const noexcept { return name_; }
  std::span<const AccuracyPoint> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

 private:
  std::string name_;
  std::vector<AccuracyPoint> points_;
};

struct AdjacentDrops {
  double bad = 0.0;   // largest  (a[i+1]-a[i])/(r[i+1]-r[i])
  double wad = 0.0;   // smallest of the same slopes
  double p_ad = 0.0;  // share of steps with a[i+1]-a[i] >= 0
};

struct RobustnessReport {
  double avg = 0.0;
  double rslope = 0.0;
  double gm = 0.0;
  double bad = 0.0;
  double wad = 0.0;
  double p_ad = 0.0;
};

/// Ordinary least-squares slope of accuracy on r.
double rslope(const AccuracySeries& s);

/// Sum of absolute deviations from the mean accuracy.
double gm(const AccuracySeries& s);

AdjacentDrops adjacent_drops(const AccuracySeries& s);

double avg(const AccuracySeries& s);

RobustnessReport robustness_report(const AccuracySeries& s);

/// Rounds half away from zero at `digits` decimals; never returns -0.
double round_half_away(double x, int digits);

}  // namespace usecurate
