#pragma once

#include <cstdint>

#include "dgner/eval.hpp"

namespace dgner {

struct SignificanceResult {
  double p_value = 1.0;
  double delta = 0.0;  // observed F1(a) - F1(b), percent
  int resamples = 0;
  std::uint64_t seed = 0;
};

// Paired bootstrap over sentences: B resamples with replacement; p is the
// share of resamples whose delta lies beyond twice the observed delta, on
// the observed side (the standard shifted-null reading). A zero observed
// delta short-circuits to p = 1. Each resample draws from its own derived
// RNG stream, so the parallel and serial variants agree bit-for-bit.
SignificanceResult bootstrap_test(const TagCorpus& gold, const TagCorpus& a,
                                  const TagCorpus& b, int resamples = 10000,
                                  std::uint64_t seed = 42);
SignificanceResult bootstrap_test_serial(const TagCorpus& gold,
                                         const TagCorpus& a,
                                         const TagCorpus& b,
                                         int resamples = 10000,
                                         std::uint64_t seed = 42);

}  // namespace dgner
