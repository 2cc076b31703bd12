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

// Baseline confidence extraction and the proper scoring rules (cross entropy,
// Brier score) over accurate/inaccurate outcomes. Unlike AUCCC, both scores
// change when every confidence is shifted by the same margin.

#ifndef UQEVAL_SCORING_H_
#define UQEVAL_SCORING_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "uqeval/records.h"

namespace uqeval {

// Confidences are clamped to [kLogClamp, 1 - kLogClamp] before taking logs.
inline constexpr double kLogClamp = 1e-7;

struct ScoreReport {
  double cross_entropy = 0.0;
  double brier = 0.0;
  int64_t n = 0;
};

absl::StatusOr<double> MaxSoftmaxConfidence(const std::vector<double>& probs);

// Mean of -[c log(s) + (1 - c) log(1 - s)], c = 1 for accurate results.
double CrossEntropy(const OutcomeSet& outcomes);

// Mean of (s - c)^2.
double BrierScore(const OutcomeSet& outcomes);

ScoreReport Score(const OutcomeSet& outcomes);

}  // namespace uqeval

#endif  // UQEVAL_SCORING_H_
