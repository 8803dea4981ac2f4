#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "usecurate/entropy.hpp"
#include "usecurate/threshold.hpp"

namespace usecurate {

enum class Decision : std::uint8_t { Keep, Discard };
enum class Truth : std::uint8_t { ID, NearOOD, FarOOD };

std::string_view to_string(Decision d) noexcept;
std::string_view to_string(Truth t) noexcept;
Truth parse_truth(std::string_view name);

struct FilterMask {
  std::vector<Decision> decisions;
  std::vector<std::string> sample_ids;
  double u_star = 0.0;
  std::size_t kept_count = 0;
  std::size_t discarded_count = 0;

  std::size_t size() const noexcept { return decisions.size(); }
};

/// Discards exactly the samples with u > u*; u == u* is kept.
FilterMask apply_threshold(const EntropyScoreSet& scores, const UseThreshold& t);

/// r = d_ood / (d_id + d_ood).
double contamination_ratio(std::uint64_t d_id, std::uint64_t d_ood);

struct ContaminationSpec {
  std::uint64_t d_id = 0;
  std::uint64_t d_ood = 0;

  double r() const { return contamination_ratio(d_id, d_ood); }
};

/// Filter evaluated against known labels. OOD (near or far) is the positive
/// class; a discard is a true positive when truth != ID. Ratios with a zero
/// denominator are 1 by convention.
struct FilterQuality {
  double precision = 1.0;
  double recall = 1.0;
  double recall_near = 1.0;
  double recall_far = 1.0;
  double id_discard_fraction = 0.0;
};

FilterQuality filter_quality(const FilterMask& mask, std::span<const Truth> truth);

}  // namespace usecurate
