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

#include "uqeval/ensemble.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_format.h"
#include "uqeval/records.h"

namespace uqeval {

absl::Status ValidateDistribution(const std::vector<double>& probs) {
  if (probs.empty()) {
    return absl::InvalidArgumentError("empty probability vector");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("probability %g out of range [0, 1]", p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "probability sum %g %s tolerance", sum,
        sum > 1.0 ? "exceeds" : "falls below"));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> AverageProbs(
    const std::vector<std::vector<double>>& members) {
  if (members.empty()) {
    return absl::InvalidArgumentError("ensemble has no members");
  }
  const size_t num_classes = members.front().size();
  std::vector<double> mean(num_classes, 0.0);
  for (size_t m = 0; m < members.size(); ++m) {
    if (members[m].size() != num_classes) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "member %d has %d classes, member 0 has %d", m, members[m].size(),
          num_classes));
    }
    if (auto status = ValidateDistribution(members[m]); !status.ok()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("member %d: %s", m, status.message()));
    }
    for (size_t k = 0; k < num_classes; ++k) mean[k] += members[m][k];
  }
  const double count = static_cast<double>(members.size());
  for (double& value : mean) value /= count;
  return mean;
}

absl::StatusOr<std::vector<double>> TemperatureScale(
    const std::vector<double>& probs, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("temperature %g must be positive", temperature));
  }
  if (auto status = ValidateDistribution(probs); !status.ok()) return status;

  std::vector<double> clamped(probs.size());
  double clamped_sum = 0.0;
  for (size_t k = 0; k < probs.size(); ++k) {
    clamped[k] = std::max(probs[k], kProbFloor);
    clamped_sum += clamped[k];
  }

  std::vector<double> logits(probs.size());
  for (size_t k = 0; k < probs.size(); ++k) {
    logits[k] = std::log(clamped[k] / clamped_sum) / temperature;
  }
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double& logit : logits) {
    logit = std::exp(logit - max_logit);
    total += logit;
  }
  for (double& value : logits) value /= total;
  return logits;
}

absl::StatusOr<double> ActualClassConfidence(
    const std::vector<double>& softened, int true_label) {
  if (true_label < 0 || static_cast<size_t>(true_label) >= softened.size()) {
    return absl::OutOfRangeError(absl::StrFormat(
        "true label %d out of range for %d classes", true_label,
        softened.size()));
  }
  return softened[static_cast<size_t>(true_label)];
}

absl::StatusOr<EnsembleOutput> CombineEnsemble(
    std::vector<std::vector<double>> members, double temperature) {
  EnsembleOutput output;
  auto mean = AverageProbs(members);
  if (!mean.ok()) return mean.status();
  if (mean->size() < 2) {
    return absl::InvalidArgumentError("ensemble needs at least two classes");
  }
  auto softened = TemperatureScale(*mean, temperature);
  if (!softened.ok()) return softened.status();
  output.members = std::move(members);
  output.mean = *std::move(mean);
  output.softened = *std::move(softened);
  output.temperature = temperature;
  return output;
}

}  // namespace uqeval
