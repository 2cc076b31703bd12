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

// Prediction records: ingestion, validation and reduction to the binary
// (accurate / inaccurate, confidence) outcome sets consumed by CCC analysis.
//
// JSON Lines format, one object per line:
//   {"id": "a", "probs": [0.7, 0.3], "pred": 0, "true": 0, "conf": 0.7,
//    "tag": "id"}
// "probs", "true" and "conf" are optional, "pred" is optional when "probs" is
// given, and "tag" ("id" | "ood") defaults to "id".
//
// CSV format: header "id,pred,true,conf,tag,p0,p1,...,pK"; empty cells denote
// absent optionals.
//
// Multi-label JSON Lines format:
//   {"id": "a", "probs": [0.9, 0.1], "truths": [1, 0], "tag": "id"}

#ifndef UQEVAL_RECORDS_H_
#define UQEVAL_RECORDS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace uqeval {

// Absolute tolerance on the sum of a probability vector.
inline constexpr double kProbSumTolerance = 1e-6;

enum class DistTag { kInDistribution, kOutOfDistribution };

enum class RecordFormat { kJsonLines, kCsv };

enum class ConfidenceSource { kExplicitField, kMaxSoftmax };

struct PredictionRecord {
  std::string instance_id;
  std::optional<std::vector<double>> probs;
  int pred_label = 0;
  std::optional<int> true_label;
  std::optional<double> confidence;
  DistTag dist_tag = DistTag::kInDistribution;

  bool operator==(const PredictionRecord&) const = default;
};

struct MultiLabelRecord {
  std::string instance_id;
  std::vector<double> per_class_probs;
  std::vector<int> true_labels;
  DistTag dist_tag = DistTag::kInDistribution;
};

struct Outcome {
  bool correct = false;
  double confidence = 0.0;

  bool operator==(const Outcome&) const = default;
};

// Non-empty list of outcomes with every confidence in [0, 1].
class OutcomeSet {
 public:
  static absl::StatusOr<OutcomeSet> Create(std::vector<Outcome> entries);

  const std::vector<Outcome>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  size_t num_correct() const { return num_correct_; }
  size_t num_incorrect() const { return entries_.size() - num_correct_; }

 private:
  explicit OutcomeSet(std::vector<Outcome> entries);

  std::vector<Outcome> entries_;
  size_t num_correct_ = 0;
};

// Index of the largest entry; the lowest index wins ties.
size_t ArgMax(const std::vector<double>& values);

// Checks the PredictionRecord invariants.
absl::Status ValidateRecord(const PredictionRecord& record);

absl::StatusOr<std::vector<PredictionRecord>> ParseRecords(
    absl::string_view text, RecordFormat format);

absl::StatusOr<std::vector<MultiLabelRecord>> ParseMultiLabelRecords(
    absl::string_view text);

// Serializes records. Parsing the output yields identical records.
std::string WriteRecords(const std::vector<PredictionRecord>& records,
                         RecordFormat format);
std::string WriteMultiLabelRecords(const std::vector<MultiLabelRecord>& records);

absl::StatusOr<OutcomeSet> DeriveOutcomes(
    const std::vector<PredictionRecord>& records, ConfidenceSource source);

// In/out-of-distribution labeling: an outcome is "correct" iff the record is
// in-distribution. Classification correctness is ignored.
absl::StatusOr<OutcomeSet> DeriveIoOutcomes(
    const std::vector<PredictionRecord>& records,
    ConfidenceSource source = ConfidenceSource::kExplicitField);

// One outcome per (record, class): positive iff prob >= threshold, correct iff
// that matches the truth, confidence max(p, 1 - p).
absl::StatusOr<OutcomeSet> BinarizeMultiLabel(
    const std::vector<MultiLabelRecord>& records, double threshold);

absl::string_view DistTagName(DistTag tag);

}  // namespace uqeval

#endif  // UQEVAL_RECORDS_H_
