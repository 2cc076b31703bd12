/*
 * Copyright 2026 The uqeval Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "uqeval/scoring.h"

#include <algorithm>
#include <cmath>

namespace uqeval {

absl::StatusOr<double> MaxSoftmaxConfidence(const std::vector<double>& probs) {
  if (probs.empty()) {
    return absl::InvalidArgumentError("empty probability vector");
  }
  return *std::max_element(probs.begin(), probs.end());
}

double CrossEntropy(const OutcomeSet& outcomes) {
  double total = 0.0;
  for (const Outcome& outcome : outcomes.entries()) {
    const double s = std::clamp(outcome.confidence, kLogClamp, 1.0 - kLogClamp);
    total -= outcome.correct ? std::log(s) : std::log1p(-s);
  }
  return total / static_cast<double>(outcomes.size());
}

double BrierScore(const OutcomeSet& outcomes) {
  double total = 0.0;
  for (const Outcome& outcome : outcomes.entries()) {
    const double diff = outcome.confidence - (outcome.correct ? 1.0 : 0.0);
    total += diff * diff;
  }
  return total / static_cast<double>(outcomes.size());
}

ScoreReport Score(const OutcomeSet& outcomes) {
  return {CrossEntropy(outcomes), BrierScore(outcomes),
          static_cast<int64_t>(outcomes.size())};
}

}  // namespace uqeval
