#pragma once

#include <doctest.h>

#include <string>
#include <vector>

#include "usecurate/entropy.hpp"
#include "usecurate/error.hpp"

namespace testing {

template <class Fn>
usecurate::ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const usecurate::Error& e) {
    return e.code();
  }
  FAIL("expected a usecurate::Error");
  return usecurate::ErrorCode::IoFailure;
}

inline usecurate::EntropyScoreSet scores_of(std::vector<double> values, std::size_t k) {
  std::vector<std::string> ids(values.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = "s" + std::to_string(i);
  return usecurate::make_score_set(std::move(ids), std::move(values), k);
}

}  // namespace testing
