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

#include "uqeval/experiment.h"

#include <algorithm>
#include <utility>

#include "uqeval/ccc.h"
#include "uqeval/ensemble.h"

namespace uqeval {

UdistExperimentConfig DefaultUdistExperiment() {
  UdistExperimentConfig config;
  config.task = DefaultUdistConfig();
  config.train.train_temperature = kDefaultTrainTemperature;
  config.test_temperature = kDefaultEvalTemperature;
  return config;
}

absl::StatusOr<std::vector<CascadeExample>> BuildCascadeExamples(
    const UdistSplit& split, double temperature) {
  std::vector<CascadeExample> examples;
  examples.reserve(split.examples.size());
  for (size_t i = 0; i < split.examples.size(); ++i) {
    auto example =
        MakeCascadeExample(split.examples[i].features, split.ensemble_probs[i],
                           split.examples[i].label, temperature);
    if (!example.ok()) return example.status();
    examples.push_back(*std::move(example));
  }
  return examples;
}

absl::StatusOr<UdistExperimentResult> RunUdistExperiment(
    const UdistExperimentConfig& config) {
  auto task = GenUdistTask(config.task);
  if (!task.ok()) return task.status();

  auto train = BuildCascadeExamples(task->train, config.train.train_temperature);
  if (!train.ok()) return train.status();
  auto trained = TrainConfidenceModel(*train, config.train);
  if (!trained.ok()) return trained.status();

  std::vector<Outcome> udist;
  std::vector<Outcome> baseline;
  size_t num_correct = 0;
  for (size_t i = 0; i < task->test.examples.size(); ++i) {
    const LabeledFeatures& example = task->test.examples[i];
    auto mean = AverageProbs(task->test.ensemble_probs[i]);
    if (!mean.ok()) return mean.status();
    auto softened = TemperatureScale(*mean, config.test_temperature);
    if (!softened.ok()) return softened.status();
    const bool correct =
        ArgMax(*softened) == static_cast<size_t>(example.label);
    num_correct += correct;

    auto input = BuildCascadeInput(example.features, *softened);
    if (!input.ok()) return input.status();
    auto confidence = PredictConfidence(trained->model, *input);
    if (!confidence.ok()) return confidence.status();
    udist.push_back({correct, *confidence});
    baseline.push_back(
        {correct, *std::max_element(softened->begin(), softened->end())});
  }

  auto udist_set = OutcomeSet::Create(std::move(udist));
  if (!udist_set.ok()) return udist_set.status();
  auto baseline_set = OutcomeSet::Create(std::move(baseline));
  if (!baseline_set.ok()) return baseline_set.status();
  auto udist_auccc = AucccRank(*udist_set);
  if (!udist_auccc.ok()) return udist_auccc.status();
  auto baseline_auccc = AucccRank(*baseline_set);
  if (!baseline_auccc.ok()) return baseline_auccc.status();

  return UdistExperimentResult{
      *udist_auccc,
      *baseline_auccc,
      static_cast<double>(num_correct) /
          static_cast<double>(task->test.examples.size()),
      std::move(trained->epoch_losses),
      *std::move(udist_set),
      *std::move(baseline_set),
  };
}

}  // namespace uqeval
