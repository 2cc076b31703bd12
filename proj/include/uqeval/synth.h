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

// Seeded generators for outcome sets and toy distillation tasks with known
// structure. All output is a pure function of the config (see random.h).

#ifndef UQEVAL_SYNTH_H_
#define UQEVAL_SYNTH_H_

#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "uqeval/random.h"
#include "uqeval/records.h"

namespace uqeval {

// Confidence distribution with support inside [0, 1].
struct ConfDist {
  enum class Kind { kUniform, kBeta, kConstant };
  Kind kind = Kind::kUniform;
  double a = 0.0;  // uniform low, beta alpha, or the constant
  double b = 1.0;  // uniform high or beta beta

  static ConfDist Uniform(double low, double high) {
    return {Kind::kUniform, low, high};
  }
  static ConfDist Beta(double alpha, double beta) {
    return {Kind::kBeta, alpha, beta};
  }
  static ConfDist Constant(double value) { return {Kind::kConstant, value, 0.0}; }
};

absl::Status ValidateConfDist(const ConfDist& dist);

// "uniform:A,B", "beta:ALPHA,BETA" or "constant:C".
absl::StatusOr<ConfDist> ParseConfDist(absl::string_view text);

double SampleConfidence(const ConfDist& dist, Rng& rng);

struct SynthOutcomeConfig {
  int64_t n_correct = 1000;
  int64_t n_incorrect = 1000;
  ConfDist correct_dist = ConfDist::Uniform(0.0, 1.0);
  ConfDist incorrect_dist = ConfDist::Uniform(0.0, 1.0);
  uint64_t seed = 0;
};

// n_correct accurate outcomes followed by n_incorrect inaccurate ones.
absl::StatusOr<OutcomeSet> GenOutcomes(const SynthOutcomeConfig& config);

// Records whose derived outcomes equal `outcomes`: accurate results predict
// their true label, inaccurate ones do not. Confidence goes in the explicit
// field; no probabilities are attached.
std::vector<PredictionRecord> OutcomesToRecords(const OutcomeSet& outcomes);

struct SynthOodConfig {
  int64_t n_id_correct = 1000;
  int64_t n_id_incorrect = 250;
  int64_t n_ood = 1250;
  ConfDist id_correct_dist = ConfDist::Beta(5.0, 2.0);
  ConfDist id_incorrect_dist = ConfDist::Beta(2.0, 3.0);
  ConfDist ood_dist = ConfDist::Beta(2.0, 4.0);
  uint64_t seed = 0;
};

// In-distribution records (accurate and inaccurate) followed by
// out-of-distribution records without a true label.
absl::StatusOr<std::vector<PredictionRecord>> GenOodMixture(
    const SynthOodConfig& config);

// Toy stand-in for a trained deep ensemble.
//
// Features are class-conditional unit-variance Gaussians around random class
// centres in the first feature_dim - 1 coordinates. The last coordinate, the
// error signal e ~ N(0, 1), is independent of the class. Each simulated member
// starts from the Bayes logits of the class coordinates, adds
// error_signal_strength * e^2 to the logit of the class that cyclically
// follows the Bayes prediction, then adds N(0, noise_scale^2) noise per
// class. Large |e| therefore yields confidently wrong predictions
// that max-softmax cannot flag but a model reading e can.
struct SynthUdistConfig {
  int64_t n_train = 2000;
  int64_t n_test = 2000;
  int feature_dim = 4;
  int n_classes = 3;
  int ensemble_size = 4;
  double noise_scale = 0.5;
  double error_signal_strength = 1.5;
  double class_separation = 1.2;
  uint64_t seed = 9;
};

// The configuration the distillation acceptance experiment runs on.
SynthUdistConfig DefaultUdistConfig();

absl::Status ValidateUdistConfig(const SynthUdistConfig& config);

struct LabeledFeatures {
  std::vector<double> features;
  int label = 0;
};

struct UdistSplit {
  std::vector<LabeledFeatures> examples;
  // [instance][member] -> probability vector over classes.
  std::vector<std::vector<std::vector<double>>> ensemble_probs;
};

struct UdistTask {
  UdistSplit train;
  UdistSplit test;
  int signal_index = 0;
};

absl::StatusOr<UdistTask> GenUdistTask(const SynthUdistConfig& config);

// The shift/perturbation illustration: `upper` is a small outcome set,
// `middle` shifts every confidence of `upper` by the same margin and `bottom`
// nudges the lowest and highest confidences of `upper` without changing the
// order. All three rank accurate and inaccurate results identically.
struct ShiftPerturbTriplet {
  OutcomeSet upper;
  OutcomeSet middle;
  OutcomeSet bottom;
};

ShiftPerturbTriplet MakeShiftPerturbTriplet();

}  // namespace uqeval

#endif  // UQEVAL_SYNTH_H_
