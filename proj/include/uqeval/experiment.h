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

// End-to-end uncertainty distillation on a synthetic task: ensemble average,
// temperature scaling, confidence-model training against the actual-class
// probability, and held-out AUCCC against the max-softmax baseline.

#ifndef UQEVAL_EXPERIMENT_H_
#define UQEVAL_EXPERIMENT_H_

#include <vector>

#include "absl/status/statusor.h"
#include "uqeval/distill.h"
#include "uqeval/records.h"
#include "uqeval/synth.h"

namespace uqeval {

struct UdistExperimentConfig {
  SynthUdistConfig task;
  TrainConfig train;
  // Temperature applied to held-out ensemble outputs, both for the cascade
  // input and for the baseline.
  double test_temperature = 3.0;
};

UdistExperimentConfig DefaultUdistExperiment();

struct UdistExperimentResult {
  double udist_auccc = 0.0;
  double baseline_auccc = 0.0;
  double test_accuracy = 0.0;
  std::vector<double> epoch_losses;
  OutcomeSet udist_outcomes;
  OutcomeSet baseline_outcomes;
};

absl::StatusOr<std::vector<CascadeExample>> BuildCascadeExamples(
    const UdistSplit& split, double temperature);

absl::StatusOr<UdistExperimentResult> RunUdistExperiment(
    const UdistExperimentConfig& config);

}  // namespace uqeval

#endif  // UQEVAL_EXPERIMENT_H_
