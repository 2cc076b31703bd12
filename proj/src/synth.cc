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

#include "uqeval/synth.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"

namespace uqeval {

namespace {

std::vector<double> Softmax(const std::vector<double>& logits) {
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] - max_logit);
    total += out[k];
  }
  for (double& p : out) p /= total;
  return out;
}

absl::Status CheckCount(int64_t value, const char* name) {
  if (value < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s must be at least 1, got %d", name, value));
  }
  return absl::OkStatus();
}

OutcomeSet MakeSet(const std::vector<double>& correct,
                   const std::vector<double>& incorrect) {
  std::vector<Outcome> entries;
  for (double c : correct) entries.push_back({true, c});
  for (double c : incorrect) entries.push_back({false, c});
  return *OutcomeSet::Create(std::move(entries));
}

}  // namespace

absl::Status ValidateConfDist(const ConfDist& dist) {
  switch (dist.kind) {
    case ConfDist::Kind::kUniform:
      if (!(dist.a >= 0.0 && dist.a < dist.b && dist.b <= 1.0)) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "uniform(%g, %g) needs 0 <= low < high <= 1", dist.a, dist.b));
      }
      return absl::OkStatus();
    case ConfDist::Kind::kBeta:
      if (!(dist.a > 0.0 && dist.b > 0.0) || !std::isfinite(dist.a) ||
          !std::isfinite(dist.b)) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "beta(%g, %g) needs positive finite parameters", dist.a, dist.b));
      }
      return absl::OkStatus();
    case ConfDist::Kind::kConstant:
      if (!(dist.a >= 0.0 && dist.a <= 1.0)) {
        return absl::InvalidArgumentError(
            absl::StrFormat("constant(%g) must lie in [0, 1]", dist.a));
      }
      return absl::OkStatus();
  }
  return absl::InvalidArgumentError("unknown distribution kind");
}

absl::StatusOr<ConfDist> ParseConfDist(absl::string_view text) {
  std::vector<absl::string_view> parts = absl::StrSplit(text, ':');
  if (parts.size() != 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bad distribution \"", text,
        "\"; expected uniform:A,B, beta:ALPHA,BETA or constant:C"));
  }
  std::vector<double> params;
  for (absl::string_view item : absl::StrSplit(parts[1], ',')) {
    double value = 0.0;
    if (!absl::SimpleAtod(item, &value)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad distribution parameter \"", item, "\""));
    }
    params.push_back(value);
  }
  ConfDist dist;
  if (parts[0] == "uniform" && params.size() == 2) {
    dist = ConfDist::Uniform(params[0], params[1]);
  } else if (parts[0] == "beta" && params.size() == 2) {
    dist = ConfDist::Beta(params[0], params[1]);
  } else if (parts[0] == "constant" && params.size() == 1) {
    dist = ConfDist::Constant(params[0]);
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        "bad distribution \"", text,
        "\"; expected uniform:A,B, beta:ALPHA,BETA or constant:C"));
  }
  if (auto status = ValidateConfDist(dist); !status.ok()) return status;
  return dist;
}

double SampleConfidence(const ConfDist& dist, Rng& rng) {
  switch (dist.kind) {
    case ConfDist::Kind::kUniform:
      return rng.Uniform(dist.a, dist.b);
    case ConfDist::Kind::kBeta:
      return rng.Beta(dist.a, dist.b);
    case ConfDist::Kind::kConstant:
      return dist.a;
  }
  return 0.0;
}

absl::StatusOr<OutcomeSet> GenOutcomes(const SynthOutcomeConfig& config) {
  if (auto s = CheckCount(config.n_correct, "n_correct"); !s.ok()) return s;
  if (auto s = CheckCount(config.n_incorrect, "n_incorrect"); !s.ok()) return s;
  if (auto s = ValidateConfDist(config.correct_dist); !s.ok()) return s;
  if (auto s = ValidateConfDist(config.incorrect_dist); !s.ok()) return s;

  Rng rng(config.seed);
  std::vector<Outcome> entries;
  entries.reserve(static_cast<size_t>(config.n_correct + config.n_incorrect));
  for (int64_t i = 0; i < config.n_correct; ++i) {
    entries.push_back({true, SampleConfidence(config.correct_dist, rng)});
  }
  for (int64_t i = 0; i < config.n_incorrect; ++i) {
    entries.push_back({false, SampleConfidence(config.incorrect_dist, rng)});
  }
  return OutcomeSet::Create(std::move(entries));
}

std::vector<PredictionRecord> OutcomesToRecords(const OutcomeSet& outcomes) {
  std::vector<PredictionRecord> records;
  records.reserve(outcomes.size());
  for (size_t i = 0; i < outcomes.size(); ++i) {
    const Outcome& outcome = outcomes.entries()[i];
    PredictionRecord record;
    record.instance_id = absl::StrFormat("s%06d", i);
    record.pred_label = 0;
    record.true_label = outcome.correct ? 0 : 1;
    record.confidence = outcome.confidence;
    records.push_back(std::move(record));
  }
  return records;
}

absl::StatusOr<std::vector<PredictionRecord>> GenOodMixture(
    const SynthOodConfig& config) {
  if (auto s = CheckCount(config.n_id_correct, "n_id_correct"); !s.ok()) return s;
  if (auto s = CheckCount(config.n_id_incorrect, "n_id_incorrect"); !s.ok()) {
    return s;
  }
  if (auto s = CheckCount(config.n_ood, "n_ood"); !s.ok()) return s;
  for (const ConfDist* dist :
       {&config.id_correct_dist, &config.id_incorrect_dist, &config.ood_dist}) {
    if (auto s = ValidateConfDist(*dist); !s.ok()) return s;
  }

  Rng rng(config.seed);
  std::vector<PredictionRecord> records;
  auto add = [&](std::string prefix, int64_t count, const ConfDist& dist,
                 std::optional<int> true_label, DistTag tag) {
    for (int64_t i = 0; i < count; ++i) {
      PredictionRecord record;
      record.instance_id = absl::StrFormat("%s%06d", prefix, i);
      record.pred_label = 0;
      record.true_label = true_label;
      record.confidence = SampleConfidence(dist, rng);
      record.dist_tag = tag;
      records.push_back(std::move(record));
    }
  };
  add("idc", config.n_id_correct, config.id_correct_dist, 0,
      DistTag::kInDistribution);
  add("idi", config.n_id_incorrect, config.id_incorrect_dist, 1,
      DistTag::kInDistribution);
  add("ood", config.n_ood, config.ood_dist, std::nullopt,
      DistTag::kOutOfDistribution);
  return records;
}

SynthUdistConfig DefaultUdistConfig() { return SynthUdistConfig(); }

absl::Status ValidateUdistConfig(const SynthUdistConfig& config) {
  if (auto s = CheckCount(config.n_train, "n_train"); !s.ok()) return s;
  if (auto s = CheckCount(config.n_test, "n_test"); !s.ok()) return s;
  if (auto s = CheckCount(config.ensemble_size, "ensemble_size"); !s.ok()) {
    return s;
  }
  if (config.feature_dim < 2) {
    return absl::InvalidArgumentError(
        "feature_dim must be at least 2 (class coordinates plus the signal)");
  }
  if (config.n_classes < 2) {
    return absl::InvalidArgumentError("n_classes must be at least 2");
  }
  if (!(config.noise_scale >= 0.0) || !(config.error_signal_strength >= 0.0) ||
      !(config.class_separation >= 0.0)) {
    return absl::InvalidArgumentError(
        "noise_scale, error_signal_strength and class_separation must be >= 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<UdistTask> GenUdistTask(const SynthUdistConfig& config) {
  if (auto status = ValidateUdistConfig(config); !status.ok()) return status;

  Rng rng(config.seed);
  const int class_dims = config.feature_dim - 1;
  const int num_classes = config.n_classes;

  std::vector<std::vector<double>> centres(num_classes,
                                           std::vector<double>(class_dims));
  for (auto& centre : centres) {
    for (double& c : centre) c = rng.Normal(0.0, config.class_separation);
  }

  auto generate = [&](int64_t count, UdistSplit* split) {
    split->examples.reserve(static_cast<size_t>(count));
    split->ensemble_probs.reserve(static_cast<size_t>(count));
    for (int64_t n = 0; n < count; ++n) {
      LabeledFeatures example;
      example.label = static_cast<int>(rng.UniformInt(num_classes));
      example.features.resize(config.feature_dim);
      for (int j = 0; j < class_dims; ++j) {
        example.features[j] = centres[example.label][j] + rng.Normal();
      }
      const double signal = rng.Normal();
      example.features[class_dims] = signal;

      // Log-posterior of the class coordinates up to a constant.
      std::vector<double> bayes_logits(num_classes);
      for (int k = 0; k < num_classes; ++k) {
        double dist2 = 0.0;
        for (int j = 0; j < class_dims; ++j) {
          const double d = example.features[j] - centres[k][j];
          dist2 += d * d;
        }
        bayes_logits[k] = -0.5 * dist2;
      }
      const size_t bayes_pred = ArgMax(bayes_logits);
      const size_t decoy = (bayes_pred + 1) % static_cast<size_t>(num_classes);
      bayes_logits[decoy] += config.error_signal_strength * signal * signal;

      std::vector<std::vector<double>> members;
      members.reserve(config.ensemble_size);
      for (int m = 0; m < config.ensemble_size; ++m) {
        std::vector<double> logits = bayes_logits;
        for (double& logit : logits) logit += config.noise_scale * rng.Normal();
        members.push_back(Softmax(logits));
      }
      split->examples.push_back(std::move(example));
      split->ensemble_probs.push_back(std::move(members));
    }
  };

  UdistTask task;
  task.signal_index = class_dims;
  generate(config.n_train, &task.train);
  generate(config.n_test, &task.test);
  return task;
}

ShiftPerturbTriplet MakeShiftPerturbTriplet() {
  const std::vector<double> correct = {0.35, 0.5, 0.6, 0.65, 0.7, 0.8};
  const std::vector<double> incorrect = {0.1, 0.2, 0.3, 0.45, 0.55};
  constexpr double kShift = 0.15;

  std::vector<double> shifted_correct = correct;
  std::vector<double> shifted_incorrect = incorrect;
  for (double& c : shifted_correct) c += kShift;
  for (double& c : shifted_incorrect) c += kShift;

  // Lowest (an inaccurate result) moves down, highest (accurate) moves up.
  std::vector<double> perturbed_correct = correct;
  std::vector<double> perturbed_incorrect = incorrect;
  perturbed_incorrect.front() = 0.02;
  perturbed_correct.back() = 0.97;

  return {MakeSet(correct, incorrect),
          MakeSet(shifted_correct, shifted_incorrect),
          MakeSet(perturbed_correct, perturbed_incorrect)};
}

}  // namespace uqeval
