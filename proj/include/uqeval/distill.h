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

// Uncertainty distillation: a small feed-forward confidence model trained on
// the concatenation of instance features and softened ensemble probabilities,
// against the softened probability of the actual class.
//
// The confidence loss is the binary cross entropy
//   loss(s, t) = -[t log(s) + (1 - t) log(1 - s)],
// minimized at s = t. Multi-label models average it over classes.

#ifndef UQEVAL_DISTILL_H_
#define UQEVAL_DISTILL_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace uqeval {

// Model output s is clamped to [kConfidenceClamp, 1 - kConfidenceClamp]
// inside the loss.
inline constexpr double kConfidenceClamp = 1e-7;

// Distillation targets are clamped to [kTargetClamp, 1 - kTargetClamp].
inline constexpr double kTargetClamp = 1e-4;

inline constexpr char kModelFormatVersion[] = "udist-model-v1";

absl::StatusOr<double> ConfidenceLoss(double s, double target);

// d loss / d s at the clamped s: -t / s + (1 - t) / (1 - s).
absl::StatusOr<double> ConfidenceLossGrad(double s, double target);

absl::StatusOr<double> MultiLabelConfidenceLoss(std::span<const double> s,
                                                std::span<const double> target);

// features followed by softened probabilities.
absl::StatusOr<std::vector<double>> BuildCascadeInput(
    std::span<const double> features, std::span<const double> softened_probs);

struct CascadeExample {
  std::vector<double> features;
  std::vector<double> softened_probs;
  // One target per model output: {P_t} for single-label models.
  std::vector<double> targets;
};

// Averages the members, softens at `temperature` and takes the actual-class
// probability as the target.
absl::StatusOr<CascadeExample> MakeCascadeExample(
    std::vector<double> features,
    const std::vector<std::vector<double>>& members, int true_label,
    double temperature);

struct DenseLayer {
  int inputs = 0;
  int outputs = 0;
  std::vector<double> weights;  // row-major, outputs x inputs
  std::vector<double> biases;
};

// Fully connected network: tanh hidden layers, sigmoid outputs.
class ConfidenceModel {
 public:
  // Glorot-uniform weights drawn from `seed`, zero biases. layer_sizes lists
  // the input width, the hidden widths and the output width.
  static absl::StatusOr<ConfidenceModel> Create(std::vector<int> layer_sizes,
                                                uint64_t seed);
  static absl::StatusOr<ConfidenceModel> Zeros(std::vector<int> layer_sizes);

  static absl::StatusOr<ConfidenceModel> FromJson(absl::string_view text);
  std::string ToJson() const;

  const std::vector<int>& layer_sizes() const { return layer_sizes_; }
  int input_size() const { return layer_sizes_.front(); }
  int output_size() const { return layer_sizes_.back(); }

  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& mutable_layers() { return layers_; }

  absl::StatusOr<std::vector<double>> Forward(
      std::span<const double> input) const;

  // Sum of per-example mean confidence losses over `batch`, divided by the
  // batch size, and the gradient of that value with respect to every
  // parameter (same shapes as layers()).
  double LossAndGradient(std::span<const CascadeExample* const> batch,
                         std::vector<DenseLayer>* gradient) const;

  bool operator==(const ConfidenceModel& other) const;

 private:
  explicit ConfidenceModel(std::vector<int> layer_sizes);

  std::vector<int> layer_sizes_;
  std::vector<DenseLayer> layers_;
};

// Single-output forward pass.
absl::StatusOr<double> PredictConfidence(const ConfidenceModel& model,
                                         std::span<const double> input);

struct TrainConfig {
  double learning_rate = 0.5;
  int epochs = 60;
  int batch_size = 32;
  uint64_t seed = 1;
  double train_temperature = 8.0;
  std::vector<int> hidden_sizes = {32, 32};
  // Multiply the learning rate by 0.1 at 1/2 and again at 3/4 of the epochs.
  bool step_decay = true;
};

absl::Status ValidateTrainConfig(const TrainConfig& config);

struct TrainResult {
  ConfidenceModel model;
  // Mean minibatch loss of each epoch, measured before each update.
  std::vector<double> epoch_losses;
};

// Mini-batch gradient descent on the mean confidence loss. Deterministic for
// a given seed, config and data.
absl::StatusOr<TrainResult> TrainConfidenceModel(
    const std::vector<CascadeExample>& data, const TrainConfig& config);

}  // namespace uqeval

#endif  // UQEVAL_DISTILL_H_
