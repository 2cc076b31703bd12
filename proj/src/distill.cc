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

#include "uqeval/distill.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "uqeval/ensemble.h"
#include "uqeval/random.h"

namespace uqeval {

using json = nlohmann::json;

namespace {

absl::Status CheckUnitInterval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s %g outside [0, 1]", name, value));
  }
  return absl::OkStatus();
}

double ClampConfidence(double s) {
  return std::clamp(s, kConfidenceClamp, 1.0 - kConfidenceClamp);
}

double UncheckedLoss(double s, double target) {
  s = ClampConfidence(s);
  return -(target * std::log(s) + (1.0 - target) * std::log1p(-s));
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

absl::Status ValidateLayerSizes(const std::vector<int>& layer_sizes) {
  if (layer_sizes.size() < 2) {
    return absl::InvalidArgumentError(
        "a model needs at least an input and an output layer");
  }
  for (int width : layer_sizes) {
    if (width < 1) {
      return absl::InvalidArgumentError(
          absl::StrFormat("layer width %d must be positive", width));
    }
  }
  return absl::OkStatus();
}

// Activations of every layer, input included.
std::vector<std::vector<double>> ForwardAll(const std::vector<DenseLayer>& layers,
                                            std::vector<double> input) {
  std::vector<std::vector<double>> activations;
  activations.reserve(layers.size() + 1);
  activations.push_back(std::move(input));
  for (size_t l = 0; l < layers.size(); ++l) {
    const DenseLayer& layer = layers[l];
    const std::vector<double>& in = activations.back();
    std::vector<double> out(layer.outputs);
    const bool is_output = l + 1 == layers.size();
    for (int o = 0; o < layer.outputs; ++o) {
      const double* row = layer.weights.data() + static_cast<size_t>(o) * layer.inputs;
      double z = layer.biases[o];
      for (int i = 0; i < layer.inputs; ++i) z += row[i] * in[i];
      out[o] = is_output ? Sigmoid(z) : std::tanh(z);
    }
    activations.push_back(std::move(out));
  }
  return activations;
}

std::vector<double> Concat(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

absl::Status ValidateExamples(const std::vector<CascadeExample>& data,
                              const ConfidenceModel& model) {
  for (size_t i = 0; i < data.size(); ++i) {
    const CascadeExample& example = data[i];
    const size_t width = example.features.size() + example.softened_probs.size();
    if (example.features.empty() || example.softened_probs.empty()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("example %d: empty features or probabilities", i));
    }
    if (width != static_cast<size_t>(model.input_size())) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "example %d: cascade input width %d, expected %d", i, width,
          model.input_size()));
    }
    if (example.targets.size() != static_cast<size_t>(model.output_size())) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "example %d: %d targets, expected %d", i, example.targets.size(),
          model.output_size()));
    }
    if (example.targets.size() == 1) {
      if (auto status = ValidateDistribution(example.softened_probs);
          !status.ok()) {
        return absl::InvalidArgumentError(
            absl::StrFormat("example %d: %s", i, status.message()));
      }
    }
    for (double target : example.targets) {
      if (auto status = CheckUnitInterval(target, "target"); !status.ok()) {
        return absl::InvalidArgumentError(
            absl::StrFormat("example %d: %s", i, status.message()));
      }
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<double> ConfidenceLoss(double s, double target) {
  if (auto status = CheckUnitInterval(s, "confidence"); !status.ok()) {
    return status;
  }
  if (auto status = CheckUnitInterval(target, "target"); !status.ok()) {
    return status;
  }
  return UncheckedLoss(s, target);
}

absl::StatusOr<double> ConfidenceLossGrad(double s, double target) {
  if (auto status = CheckUnitInterval(s, "confidence"); !status.ok()) {
    return status;
  }
  if (auto status = CheckUnitInterval(target, "target"); !status.ok()) {
    return status;
  }
  s = ClampConfidence(s);
  return -target / s + (1.0 - target) / (1.0 - s);
}

absl::StatusOr<double> MultiLabelConfidenceLoss(
    std::span<const double> s, std::span<const double> target) {
  if (s.size() != target.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%d confidences but %d targets", s.size(), target.size()));
  }
  if (s.empty()) return absl::InvalidArgumentError("no classes");
  double total = 0.0;
  for (size_t k = 0; k < s.size(); ++k) {
    auto loss = ConfidenceLoss(s[k], target[k]);
    if (!loss.ok()) return loss.status();
    total += *loss;
  }
  return total / static_cast<double>(s.size());
}

absl::StatusOr<std::vector<double>> BuildCascadeInput(
    std::span<const double> features, std::span<const double> softened_probs) {
  if (features.empty()) return absl::InvalidArgumentError("empty features");
  if (softened_probs.empty()) {
    return absl::InvalidArgumentError("empty softened probabilities");
  }
  return Concat(features, softened_probs);
}

absl::StatusOr<CascadeExample> MakeCascadeExample(
    std::vector<double> features,
    const std::vector<std::vector<double>>& members, int true_label,
    double temperature) {
  auto mean = AverageProbs(members);
  if (!mean.ok()) return mean.status();
  auto softened = TemperatureScale(*mean, temperature);
  if (!softened.ok()) return softened.status();
  auto target = ActualClassConfidence(*softened, true_label);
  if (!target.ok()) return target.status();
  return CascadeExample{std::move(features), *std::move(softened), {*target}};
}

ConfidenceModel::ConfidenceModel(std::vector<int> layer_sizes)
    : layer_sizes_(std::move(layer_sizes)) {
  for (size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
    DenseLayer layer;
    layer.inputs = layer_sizes_[l];
    layer.outputs = layer_sizes_[l + 1];
    layer.weights.assign(static_cast<size_t>(layer.inputs) * layer.outputs, 0.0);
    layer.biases.assign(layer.outputs, 0.0);
    layers_.push_back(std::move(layer));
  }
}

absl::StatusOr<ConfidenceModel> ConfidenceModel::Zeros(
    std::vector<int> layer_sizes) {
  if (auto status = ValidateLayerSizes(layer_sizes); !status.ok()) {
    return status;
  }
  return ConfidenceModel(std::move(layer_sizes));
}

absl::StatusOr<ConfidenceModel> ConfidenceModel::Create(
    std::vector<int> layer_sizes, uint64_t seed) {
  auto model = Zeros(std::move(layer_sizes));
  if (!model.ok()) return model.status();
  Rng rng(seed);
  for (DenseLayer& layer : model->layers_) {
    const double limit = std::sqrt(6.0 / (layer.inputs + layer.outputs));
    for (double& w : layer.weights) w = rng.Uniform(-limit, limit);
  }
  return model;
}

absl::StatusOr<std::vector<double>> ConfidenceModel::Forward(
    std::span<const double> input) const {
  if (input.size() != static_cast<size_t>(input_size())) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "input width %d does not match model input width %d", input.size(),
        input_size()));
  }
  auto activations =
      ForwardAll(layers_, std::vector<double>(input.begin(), input.end()));
  return std::move(activations.back());
}

double ConfidenceModel::LossAndGradient(
    std::span<const CascadeExample* const> batch,
    std::vector<DenseLayer>* gradient) const {
  gradient->clear();
  for (const DenseLayer& layer : layers_) {
    DenseLayer zero = layer;
    std::fill(zero.weights.begin(), zero.weights.end(), 0.0);
    std::fill(zero.biases.begin(), zero.biases.end(), 0.0);
    gradient->push_back(std::move(zero));
  }

  double total_loss = 0.0;
  for (const CascadeExample* example : batch) {
    const auto activations =
        ForwardAll(layers_, Concat(example->features, example->softened_probs));
    const std::vector<double>& s = activations.back();
    const double num_outputs = static_cast<double>(s.size());

    // Sigmoid followed by cross entropy: d loss / d z = s - t.
    std::vector<double> delta(s.size());
    double loss = 0.0;
    for (size_t k = 0; k < s.size(); ++k) {
      loss += UncheckedLoss(s[k], example->targets[k]);
      delta[k] = (s[k] - example->targets[k]) / num_outputs;
    }
    total_loss += loss / num_outputs;

    for (size_t l = layers_.size(); l-- > 0;) {
      const DenseLayer& layer = layers_[l];
      DenseLayer& grad = (*gradient)[l];
      const std::vector<double>& in = activations[l];
      for (int o = 0; o < layer.outputs; ++o) {
        double* row = grad.weights.data() + static_cast<size_t>(o) * layer.inputs;
        for (int i = 0; i < layer.inputs; ++i) row[i] += delta[o] * in[i];
        grad.biases[o] += delta[o];
      }
      if (l == 0) break;
      std::vector<double> prev(layer.inputs, 0.0);
      for (int o = 0; o < layer.outputs; ++o) {
        const double* row =
            layer.weights.data() + static_cast<size_t>(o) * layer.inputs;
        for (int i = 0; i < layer.inputs; ++i) prev[i] += row[i] * delta[o];
      }
      for (int i = 0; i < layer.inputs; ++i) {
        prev[i] *= 1.0 - in[i] * in[i];  // tanh'
      }
      delta = std::move(prev);
    }
  }

  const double n = static_cast<double>(batch.size());
  for (DenseLayer& grad : *gradient) {
    for (double& w : grad.weights) w /= n;
    for (double& b : grad.biases) b /= n;
  }
  return total_loss / n;
}

bool ConfidenceModel::operator==(const ConfidenceModel& other) const {
  if (layer_sizes_ != other.layer_sizes_) return false;
  for (size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].weights != other.layers_[l].weights ||
        layers_[l].biases != other.layers_[l].biases) {
      return false;
    }
  }
  return true;
}

std::string ConfidenceModel::ToJson() const {
  json layers = json::array();
  for (const DenseLayer& layer : layers_) {
    layers.push_back({{"weights", layer.weights}, {"biases", layer.biases}});
  }
  json object = {
      {"version", kModelFormatVersion},
      {"layer_sizes", layer_sizes_},
      {"hidden_activation", "tanh"},
      {"output_activation", "sigmoid"},
      {"layers", layers},
  };
  return object.dump();
}

absl::StatusOr<ConfidenceModel> ConfidenceModel::FromJson(
    absl::string_view text) {
  json object = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (object.is_discarded() || !object.is_object()) {
    return absl::InvalidArgumentError("model file is not a JSON object");
  }
  if (!object.contains("version") || object["version"] != kModelFormatVersion) {
    return absl::InvalidArgumentError(
        absl::StrCat("unsupported model version, expected ",
                     kModelFormatVersion));
  }
  std::vector<int> layer_sizes;
  try {
    layer_sizes = object.at("layer_sizes").get<std::vector<int>>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad \"layer_sizes\": ", e.what()));
  }
  auto model = Zeros(std::move(layer_sizes));
  if (!model.ok()) return model.status();

  const json& layers = object.contains("layers") ? object["layers"] : json();
  if (!layers.is_array() || layers.size() != model->layers_.size()) {
    return absl::InvalidArgumentError("\"layers\" does not match layer_sizes");
  }
  for (size_t l = 0; l < model->layers_.size(); ++l) {
    DenseLayer& layer = model->layers_[l];
    std::vector<double> weights;
    std::vector<double> biases;
    try {
      weights = layers[l].at("weights").get<std::vector<double>>();
      biases = layers[l].at("biases").get<std::vector<double>>();
    } catch (const json::exception& e) {
      return absl::InvalidArgumentError(
          absl::StrFormat("layer %d: %s", l, e.what()));
    }
    if (weights.size() != layer.weights.size() ||
        biases.size() != layer.biases.size()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("layer %d: parameter count mismatch", l));
    }
    for (double v : weights) {
      if (!std::isfinite(v)) {
        return absl::InvalidArgumentError(
            absl::StrFormat("layer %d: non-finite weight", l));
      }
    }
    for (double v : biases) {
      if (!std::isfinite(v)) {
        return absl::InvalidArgumentError(
            absl::StrFormat("layer %d: non-finite bias", l));
      }
    }
    layer.weights = std::move(weights);
    layer.biases = std::move(biases);
  }
  return model;
}

absl::StatusOr<double> PredictConfidence(const ConfidenceModel& model,
                                         std::span<const double> input) {
  if (model.output_size() != 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "model has %d outputs; use Forward for multi-label models",
        model.output_size()));
  }
  auto output = model.Forward(input);
  if (!output.ok()) return output.status();
  return output->front();
}

absl::Status ValidateTrainConfig(const TrainConfig& config) {
  if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
    return absl::InvalidArgumentError("learning rate must be positive");
  }
  if (config.epochs < 1) return absl::InvalidArgumentError("epochs must be >= 1");
  if (config.batch_size < 1) {
    return absl::InvalidArgumentError("batch size must be >= 1");
  }
  if (!(config.train_temperature > 0.0)) {
    return absl::InvalidArgumentError("train temperature must be positive");
  }
  for (int width : config.hidden_sizes) {
    if (width < 1) {
      return absl::InvalidArgumentError("hidden widths must be positive");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<TrainResult> TrainConfidenceModel(
    const std::vector<CascadeExample>& data, const TrainConfig& config) {
  if (data.empty()) return absl::InvalidArgumentError("no training examples");
  if (auto status = ValidateTrainConfig(config); !status.ok()) return status;

  std::vector<int> layer_sizes;
  layer_sizes.push_back(static_cast<int>(data.front().features.size() +
                                         data.front().softened_probs.size()));
  layer_sizes.insert(layer_sizes.end(), config.hidden_sizes.begin(),
                     config.hidden_sizes.end());
  layer_sizes.push_back(static_cast<int>(data.front().targets.size()));
  if (layer_sizes.back() < 1) {
    return absl::InvalidArgumentError("examples carry no targets");
  }

  Rng rng(config.seed);
  auto model = ConfidenceModel::Create(std::move(layer_sizes), rng.NextU64());
  if (!model.ok()) return model.status();
  if (auto status = ValidateExamples(data, *model); !status.ok()) return status;

  std::vector<CascadeExample> clamped = data;
  for (CascadeExample& example : clamped) {
    for (double& target : example.targets) {
      target = std::clamp(target, kTargetClamp, 1.0 - kTargetClamp);
    }
  }

  std::vector<const CascadeExample*> order(clamped.size());
  for (size_t i = 0; i < clamped.size(); ++i) order[i] = &clamped[i];

  TrainResult result{*std::move(model), {}};
  std::vector<DenseLayer> gradient;
  const size_t batch_size = static_cast<size_t>(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double learning_rate = config.learning_rate;
    if (config.step_decay) {
      if (2 * epoch >= config.epochs) learning_rate *= 0.1;
      if (4 * epoch >= 3 * config.epochs) learning_rate *= 0.1;
    }
    rng.Shuffle(order);

    double epoch_loss = 0.0;
    size_t num_batches = 0;
    for (size_t start = 0; start < order.size(); start += batch_size) {
      const size_t end = std::min(order.size(), start + batch_size);
      std::span<const CascadeExample* const> batch(order.data() + start,
                                                   end - start);
      const double loss = result.model.LossAndGradient(batch, &gradient);
      if (!std::isfinite(loss)) {
        return absl::InternalError(absl::StrFormat(
            "non-finite loss at epoch %d, batch %d (learning rate %g)", epoch,
            num_batches, learning_rate));
      }
      epoch_loss += loss;
      ++num_batches;
      auto& layers = result.model.mutable_layers();
      for (size_t l = 0; l < layers.size(); ++l) {
        for (size_t i = 0; i < layers[l].weights.size(); ++i) {
          layers[l].weights[i] -= learning_rate * gradient[l].weights[i];
        }
        for (size_t i = 0; i < layers[l].biases.size(); ++i) {
          layers[l].biases[i] -= learning_rate * gradient[l].biases[i];
        }
      }
    }
    result.epoch_losses.push_back(epoch_loss / static_cast<double>(num_batches));
  }
  return result;
}

}  // namespace uqeval
