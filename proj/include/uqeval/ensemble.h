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

// Deep-ensemble post-processing: member averaging, temperature scaling of the
// averaged distribution, and the softened probability of the actual class
// that serves as the distillation target.

#ifndef UQEVAL_ENSEMBLE_H_
#define UQEVAL_ENSEMBLE_H_

#include <cstddef>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace uqeval {

// Entries are clamped to at least this value before the log in
// TemperatureScale.
inline constexpr double kProbFloor = 1e-12;

// Temperatures used by the CLI when none is given.
inline constexpr double kDefaultEvalTemperature = 3.0;
inline constexpr double kDefaultTrainTemperature = 8.0;

struct EnsembleOutput {
  std::vector<std::vector<double>> members;
  std::vector<double> mean;
  std::vector<double> softened;
  double temperature = 1.0;
};

// Non-empty, entries in [0, 1], sum within kProbSumTolerance of 1.
absl::Status ValidateDistribution(const std::vector<double>& probs);

// Element-wise arithmetic mean of the members.
absl::StatusOr<std::vector<double>> AverageProbs(
    const std::vector<std::vector<double>>& members);

// softmax(log(p) / T). Equivalent to p_i^(1/T) / sum_j p_j^(1/T).
absl::StatusOr<std::vector<double>> TemperatureScale(
    const std::vector<double>& probs, double temperature);

absl::StatusOr<double> ActualClassConfidence(
    const std::vector<double>& softened, int true_label);

absl::StatusOr<EnsembleOutput> CombineEnsemble(
    std::vector<std::vector<double>> members, double temperature);

}  // namespace uqeval

#endif  // UQEVAL_ENSEMBLE_H_
