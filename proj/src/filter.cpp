#include "usecurate/filter.hpp"

#include <string>

#include "usecurate/error.hpp"

namespace usecurate {

std::string_view to_string(Decision d) noexcept { return d == Decision::Keep ? "keep" : "discard"; }

std::string_view to_string(Truth t) noexcept {
  switch (t) {
    case Truth::ID: return "id";
    case Truth::NearOOD: return "near_ood";
    case Truth::FarOOD: return "far_ood";
  }
  return "unknown";
}

Truth parse_truth(std::string_view name) {
  if (name == "id" || name == "ID") return Truth::ID;
  if (name == "near_ood" || name == "NearOOD") return Truth::NearOOD;
  if (name == "far_ood" || name == "FarOOD") return Truth::FarOOD;
  throw Error(ErrorCode::MalformedInput, "unknown truth label '" + std::string(name) + "'");
}

FilterMask apply_threshold(const EntropyScoreSet& scores, const UseThreshold& t) {
  if (scores.k != t.k) {
    throw Error(ErrorCode::ClassCountMismatch, "scores have k = " + std::to_string(scores.k) +
                                                   ", threshold has k = " + std::to_string(t.k));
  }
  FilterMask mask;
  mask.u_star = t.u_star;
  mask.sample_ids = scores.sample_ids;
  mask.decisions.resize(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool discard = scores.scores[i] > t.u_star;
    mask.decisions[i] = discard ? Decision::Discard : Decision::Keep;
    if (discard) {
      ++mask.discarded_count;
    } else {
      ++mask.kept_count;
    }
  }
  return mask;
}

double contamination_ratio(std::uint64_t d_id, std::uint64_t d_ood) {
  if (d_id == 0) throw Error(ErrorCode::NoIdSamples, "contamination ratio needs d_id >= 1");
  return static_cast<double>(d_ood) / (static_cast<double>(d_id) + static_cast<double>(d_ood));
}

namespace {

double ratio_or_one(std::size_t num, std::size_t den) {
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

FilterQuality filter_quality(const FilterMask& mask, std::span<const Truth> truth) {
  if (truth.size() != mask.size()) {
    throw Error(ErrorCode::LengthMismatch, "mask has " + std::to_string(mask.size()) +
                                               " entries, truth has " +
                                               std::to_string(truth.size()));
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  std::size_t near_total = 0, near_hit = 0, far_total = 0, far_hit = 0;
  std::size_t id_total = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool discarded = mask.decisions[i] == Decision::Discard;
    switch (truth[i]) {
      case Truth::ID:
        ++id_total;
        if (discarded) ++fp;
        break;
      case Truth::NearOOD:
        ++near_total;
        if (discarded) ++near_hit;
        break;
      case Truth::FarOOD:
        ++far_total;
        if (discarded) ++far_hit;
        break;
    }
  }
  tp = near_hit + far_hit;
  fn = (near_total + far_total) - tp;

  FilterQuality q;
  q.precision = ratio_or_one(tp, tp + fp);
  q.recall = ratio_or_one(tp, tp + fn);
  q.recall_near = ratio_or_one(near_hit, near_total);
  q.recall_far = ratio_or_one(far_hit, far_total);
  q.id_discard_fraction = id_total == 0 ? 0.0 : static_cast<double>(fp) / static_cast<double>(id_total);
  return q;
}

}  // namespace usecurate
