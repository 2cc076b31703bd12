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

#include "uqeval/records.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "absl/strings/ascii.h"
#include "json.hpp"

namespace uqeval {

using json = nlohmann::json;

namespace {

absl::Status AtLine(size_t line, const absl::Status& status) {
  return absl::Status(status.code(),
                      absl::StrCat("line ", line, ": ", status.message()));
}

absl::StatusOr<DistTag> ParseTag(absl::string_view value) {
  if (value == "id") return DistTag::kInDistribution;
  if (value == "ood") return DistTag::kOutOfDistribution;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown tag \"", value, "\" (expected \"id\" or \"ood\")"));
}

// Shortest representation that parses back to the same double.
std::string FormatDouble(double value) {
  char buffer[64];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

absl::StatusOr<double> ParseDouble(absl::string_view cell) {
  double value = 0.0;
  auto result = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (result.ec != std::errc() || result.ptr != cell.data() + cell.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot parse number \"", cell, "\""));
  }
  return value;
}

absl::StatusOr<int> ParseInt(absl::string_view cell) {
  int value = 0;
  auto result = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (result.ec != std::errc() || result.ptr != cell.data() + cell.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot parse integer \"", cell, "\""));
  }
  return value;
}

absl::StatusOr<int> JsonInt(const json& value, absl::string_view key) {
  if (!value.is_number_integer()) {
    return absl::InvalidArgumentError(
        absl::StrCat("\"", key, "\" must be an integer"));
  }
  return value.get<int>();
}

absl::StatusOr<double> JsonNumber(const json& value, absl::string_view key) {
  if (!value.is_number()) {
    return absl::InvalidArgumentError(
        absl::StrCat("\"", key, "\" must be a number"));
  }
  return value.get<double>();
}

absl::StatusOr<std::vector<double>> JsonNumberArray(const json& value,
                                                    absl::string_view key) {
  if (!value.is_array()) {
    return absl::InvalidArgumentError(
        absl::StrCat("\"", key, "\" must be an array of numbers"));
  }
  std::vector<double> out;
  out.reserve(value.size());
  for (const auto& item : value) {
    auto number = JsonNumber(item, key);
    if (!number.ok()) return number.status();
    out.push_back(*number);
  }
  return out;
}

bool Present(const json& object, const char* key) {
  auto it = object.find(key);
  return it != object.end() && !it->is_null();
}

absl::StatusOr<PredictionRecord> RecordFromJson(const json& object) {
  if (!object.is_object()) {
    return absl::InvalidArgumentError("expected a JSON object");
  }
  PredictionRecord record;
  if (!Present(object, "id") || !object["id"].is_string()) {
    return absl::InvalidArgumentError("missing string field \"id\"");
  }
  record.instance_id = object["id"].get<std::string>();

  if (Present(object, "probs")) {
    auto probs = JsonNumberArray(object["probs"], "probs");
    if (!probs.ok()) return probs.status();
    record.probs = *std::move(probs);
  }
  if (Present(object, "pred")) {
    auto pred = JsonInt(object["pred"], "pred");
    if (!pred.ok()) return pred.status();
    record.pred_label = *pred;
  } else if (record.probs.has_value() && !record.probs->empty()) {
    record.pred_label = static_cast<int>(ArgMax(*record.probs));
  } else {
    return absl::InvalidArgumentError(
        "\"pred\" is required when \"probs\" is absent");
  }
  if (Present(object, "true")) {
    auto label = JsonInt(object["true"], "true");
    if (!label.ok()) return label.status();
    record.true_label = *label;
  }
  if (Present(object, "conf")) {
    auto conf = JsonNumber(object["conf"], "conf");
    if (!conf.ok()) return conf.status();
    record.confidence = *conf;
  }
  if (Present(object, "tag")) {
    if (!object["tag"].is_string()) {
      return absl::InvalidArgumentError("\"tag\" must be a string");
    }
    auto tag = ParseTag(object["tag"].get<std::string>());
    if (!tag.ok()) return tag.status();
    record.dist_tag = *tag;
  }
  return record;
}

json RecordToJson(const PredictionRecord& record) {
  json object = json::object();
  object["id"] = record.instance_id;
  if (record.probs.has_value()) object["probs"] = *record.probs;
  object["pred"] = record.pred_label;
  if (record.true_label.has_value()) object["true"] = *record.true_label;
  if (record.confidence.has_value()) object["conf"] = *record.confidence;
  object["tag"] = std::string(DistTagName(record.dist_tag));
  return object;
}

// Splits one CSV line, honouring double-quoted cells.
absl::StatusOr<std::vector<std::string>> SplitCsvLine(absl::string_view line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cells.back().push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cells.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else {
      cells.back().push_back(c);
    }
  }
  if (quoted) return absl::InvalidArgumentError("unterminated quoted cell");
  return cells;
}

std::string QuoteCsvCell(absl::string_view cell) {
  if (cell.find_first_of(",\"\n\r") == absl::string_view::npos) {
    return std::string(cell);
  }
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

constexpr int kCsvFixedColumns = 5;

absl::Status CheckCsvHeader(const std::vector<std::string>& header) {
  static const char* kFixed[kCsvFixedColumns] = {"id", "pred", "true", "conf",
                                                 "tag"};
  if (header.size() < kCsvFixedColumns) {
    return absl::InvalidArgumentError(
        "CSV header must start with id,pred,true,conf,tag");
  }
  for (int i = 0; i < kCsvFixedColumns; ++i) {
    if (header[i] != kFixed[i]) {
      return absl::InvalidArgumentError(
          "CSV header must start with id,pred,true,conf,tag");
    }
  }
  for (size_t i = kCsvFixedColumns; i < header.size(); ++i) {
    if (header[i] != absl::StrCat("p", i - kCsvFixedColumns)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "unexpected CSV column \"", header[i], "\", expected p",
          i - kCsvFixedColumns));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<PredictionRecord> RecordFromCsv(
    const std::vector<std::string>& cells, size_t num_columns) {
  if (cells.size() != num_columns) {
    return absl::InvalidArgumentError(absl::StrCat(
        "expected ", num_columns, " cells, found ", cells.size()));
  }
  PredictionRecord record;
  record.instance_id = cells[0];

  // Probability cells: a non-empty prefix, empties allowed only at the end.
  std::vector<double> probs;
  bool seen_empty = false;
  for (size_t i = kCsvFixedColumns; i < cells.size(); ++i) {
    if (cells[i].empty()) {
      seen_empty = true;
      continue;
    }
    if (seen_empty) {
      return absl::InvalidArgumentError("gap in probability columns");
    }
    auto value = ParseDouble(cells[i]);
    if (!value.ok()) return value.status();
    probs.push_back(*value);
  }
  if (!probs.empty()) record.probs = std::move(probs);

  if (!cells[1].empty()) {
    auto pred = ParseInt(cells[1]);
    if (!pred.ok()) return pred.status();
    record.pred_label = *pred;
  } else if (record.probs.has_value()) {
    record.pred_label = static_cast<int>(ArgMax(*record.probs));
  } else {
    return absl::InvalidArgumentError(
        "\"pred\" is required when probabilities are absent");
  }
  if (!cells[2].empty()) {
    auto label = ParseInt(cells[2]);
    if (!label.ok()) return label.status();
    record.true_label = *label;
  }
  if (!cells[3].empty()) {
    auto conf = ParseDouble(cells[3]);
    if (!conf.ok()) return conf.status();
    record.confidence = *conf;
  }
  if (!cells[4].empty()) {
    auto tag = ParseTag(cells[4]);
    if (!tag.ok()) return tag.status();
    record.dist_tag = *tag;
  }
  return record;
}

bool IsBlank(absl::string_view line) {
  return absl::StripAsciiWhitespace(line).empty();
}

absl::StatusOr<std::vector<PredictionRecord>> ParseJsonLines(
    absl::string_view text) {
  std::vector<PredictionRecord> records;
  size_t line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    if (IsBlank(line)) continue;
    json object = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (object.is_discarded()) {
      return AtLine(line_number,
                    absl::InvalidArgumentError("malformed JSON"));
    }
    auto record = RecordFromJson(object);
    if (!record.ok()) return AtLine(line_number, record.status());
    if (auto status = ValidateRecord(*record); !status.ok()) {
      return AtLine(line_number, status);
    }
    records.push_back(*std::move(record));
  }
  return records;
}

absl::StatusOr<std::vector<PredictionRecord>> ParseCsv(absl::string_view text) {
  std::vector<PredictionRecord> records;
  size_t line_number = 0;
  size_t num_columns = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    line = absl::StripSuffix(line, "\r");
    if (IsBlank(line)) continue;
    auto cells = SplitCsvLine(line);
    if (!cells.ok()) return AtLine(line_number, cells.status());
    if (num_columns == 0) {
      if (auto status = CheckCsvHeader(*cells); !status.ok()) {
        return AtLine(line_number, status);
      }
      num_columns = cells->size();
      continue;
    }
    auto record = RecordFromCsv(*cells, num_columns);
    if (!record.ok()) return AtLine(line_number, record.status());
    if (auto status = ValidateRecord(*record); !status.ok()) {
      return AtLine(line_number, status);
    }
    records.push_back(*std::move(record));
  }
  if (num_columns == 0) {
    return absl::InvalidArgumentError("missing CSV header");
  }
  return records;
}

absl::Status RecordError(const PredictionRecord& record, size_t index,
                         absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat(
      "record \"", record.instance_id, "\" (index ", index, "): ", message));
}

absl::StatusOr<double> RecordConfidence(const PredictionRecord& record,
                                        size_t index,
                                        ConfidenceSource source) {
  switch (source) {
    case ConfidenceSource::kExplicitField:
      if (!record.confidence.has_value()) {
        return RecordError(record, index, "no explicit confidence");
      }
      return *record.confidence;
    case ConfidenceSource::kMaxSoftmax:
      if (!record.probs.has_value() || record.probs->empty()) {
        return RecordError(record, index,
                           "no probabilities for max-softmax confidence");
      }
      return *std::max_element(record.probs->begin(), record.probs->end());
  }
  return RecordError(record, index, "unknown confidence source");
}

}  // namespace

OutcomeSet::OutcomeSet(std::vector<Outcome> entries)
    : entries_(std::move(entries)) {
  num_correct_ = static_cast<size_t>(
      std::count_if(entries_.begin(), entries_.end(),
                    [](const Outcome& o) { return o.correct; }));
}

absl::StatusOr<OutcomeSet> OutcomeSet::Create(std::vector<Outcome> entries) {
  if (entries.empty()) {
    return absl::InvalidArgumentError("outcome set is empty");
  }
  for (size_t i = 0; i < entries.size(); ++i) {
    const double c = entries[i].confidence;
    if (!(c >= 0.0 && c <= 1.0)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "outcome %d: confidence %g out of range [0, 1]", i, c));
    }
  }
  return OutcomeSet(std::move(entries));
}

size_t ArgMax(const std::vector<double>& values) {
  return static_cast<size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
}

absl::string_view DistTagName(DistTag tag) {
  return tag == DistTag::kInDistribution ? "id" : "ood";
}

absl::Status ValidateRecord(const PredictionRecord& record) {
  if (record.pred_label < 0) {
    return absl::InvalidArgumentError("negative predicted label");
  }
  if (record.true_label.has_value() && *record.true_label < 0) {
    return absl::InvalidArgumentError("negative true label");
  }
  if (record.probs.has_value()) {
    const auto& probs = *record.probs;
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
    const int k = static_cast<int>(probs.size());
    if (record.pred_label >= k) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "predicted label %d out of range for %d classes", record.pred_label,
          k));
    }
    if (static_cast<size_t>(record.pred_label) != ArgMax(probs)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "predicted label %d is not the argmax %d of probs",
          record.pred_label, ArgMax(probs)));
    }
    if (record.true_label.has_value() && *record.true_label >= k) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "true label %d out of range for %d classes", *record.true_label, k));
    }
  }
  if (record.confidence.has_value()) {
    const double c = *record.confidence;
    if (!(c >= 0.0 && c <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("confidence out of range: %g", c));
    }
  }
  if (record.dist_tag == DistTag::kInDistribution &&
      !record.true_label.has_value()) {
    return absl::InvalidArgumentError(
        "missing true label on an in-distribution record");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<PredictionRecord>> ParseRecords(
    absl::string_view text, RecordFormat format) {
  switch (format) {
    case RecordFormat::kJsonLines:
      return ParseJsonLines(text);
    case RecordFormat::kCsv:
      return ParseCsv(text);
  }
  return absl::InvalidArgumentError("unknown record format");
}

absl::StatusOr<std::vector<MultiLabelRecord>> ParseMultiLabelRecords(
    absl::string_view text) {
  std::vector<MultiLabelRecord> records;
  size_t line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    if (IsBlank(line)) continue;
    json object = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (object.is_discarded() || !object.is_object()) {
      return AtLine(line_number,
                    absl::InvalidArgumentError("malformed JSON"));
    }
    MultiLabelRecord record;
    if (!Present(object, "id") || !object["id"].is_string()) {
      return AtLine(line_number, absl::InvalidArgumentError(
                                     "missing string field \"id\""));
    }
    record.instance_id = object["id"].get<std::string>();
    if (!Present(object, "probs") || !Present(object, "truths")) {
      return AtLine(line_number,
                    absl::InvalidArgumentError(
                        "multi-label records need \"probs\" and \"truths\""));
    }
    auto probs = JsonNumberArray(object["probs"], "probs");
    if (!probs.ok()) return AtLine(line_number, probs.status());
    record.per_class_probs = *std::move(probs);
    if (!object["truths"].is_array()) {
      return AtLine(line_number, absl::InvalidArgumentError(
                                     "\"truths\" must be an array"));
    }
    for (const auto& truth : object["truths"]) {
      auto value = JsonInt(truth, "truths");
      if (!value.ok()) return AtLine(line_number, value.status());
      if (*value != 0 && *value != 1) {
        return AtLine(line_number, absl::InvalidArgumentError(
                                       "\"truths\" entries must be 0 or 1"));
      }
      record.true_labels.push_back(*value);
    }
    if (Present(object, "tag")) {
      if (!object["tag"].is_string()) {
        return AtLine(line_number,
                      absl::InvalidArgumentError("\"tag\" must be a string"));
      }
      auto tag = ParseTag(object["tag"].get<std::string>());
      if (!tag.ok()) return AtLine(line_number, tag.status());
      record.dist_tag = *tag;
    }
    if (record.per_class_probs.size() != record.true_labels.size()) {
      return AtLine(line_number,
                    absl::InvalidArgumentError(
                        "\"probs\" and \"truths\" differ in length"));
    }
    for (double p : record.per_class_probs) {
      if (!(p >= 0.0 && p <= 1.0)) {
        return AtLine(line_number,
                      absl::InvalidArgumentError(absl::StrFormat(
                          "probability %g out of range [0, 1]", p)));
      }
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::string WriteRecords(const std::vector<PredictionRecord>& records,
                         RecordFormat format) {
  std::string out;
  if (format == RecordFormat::kJsonLines) {
    for (const auto& record : records) {
      absl::StrAppend(&out, RecordToJson(record).dump(), "\n");
    }
    return out;
  }

  size_t num_classes = 0;
  for (const auto& record : records) {
    if (record.probs.has_value()) {
      num_classes = std::max(num_classes, record.probs->size());
    }
  }
  out = "id,pred,true,conf,tag";
  for (size_t k = 0; k < num_classes; ++k) absl::StrAppend(&out, ",p", k);
  out.push_back('\n');
  for (const auto& record : records) {
    absl::StrAppend(&out, QuoteCsvCell(record.instance_id), ",",
                    record.pred_label, ",");
    if (record.true_label.has_value()) absl::StrAppend(&out, *record.true_label);
    out.push_back(',');
    if (record.confidence.has_value()) {
      out += FormatDouble(*record.confidence);
    }
    absl::StrAppend(&out, ",", DistTagName(record.dist_tag));
    for (size_t k = 0; k < num_classes; ++k) {
      out.push_back(',');
      if (record.probs.has_value() && k < record.probs->size()) {
        out += FormatDouble((*record.probs)[k]);
      }
    }
    out.push_back('\n');
  }
  return out;
}

std::string WriteMultiLabelRecords(
    const std::vector<MultiLabelRecord>& records) {
  std::string out;
  for (const auto& record : records) {
    json object = json::object();
    object["id"] = record.instance_id;
    object["probs"] = record.per_class_probs;
    object["truths"] = record.true_labels;
    object["tag"] = std::string(DistTagName(record.dist_tag));
    absl::StrAppend(&out, object.dump(), "\n");
  }
  return out;
}

absl::StatusOr<OutcomeSet> DeriveOutcomes(
    const std::vector<PredictionRecord>& records, ConfidenceSource source) {
  std::vector<Outcome> entries;
  entries.reserve(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& record = records[i];
    auto confidence = RecordConfidence(record, i, source);
    if (!confidence.ok()) return confidence.status();
    const bool correct = record.dist_tag == DistTag::kInDistribution &&
                         record.true_label.has_value() &&
                         *record.true_label == record.pred_label;
    entries.push_back({correct, *confidence});
  }
  return OutcomeSet::Create(std::move(entries));
}

absl::StatusOr<OutcomeSet> DeriveIoOutcomes(
    const std::vector<PredictionRecord>& records, ConfidenceSource source) {
  std::vector<Outcome> entries;
  entries.reserve(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& record = records[i];
    auto confidence = RecordConfidence(record, i, source);
    if (!confidence.ok()) return confidence.status();
    entries.push_back(
        {record.dist_tag == DistTag::kInDistribution, *confidence});
  }
  return OutcomeSet::Create(std::move(entries));
}

absl::StatusOr<OutcomeSet> BinarizeMultiLabel(
    const std::vector<MultiLabelRecord>& records, double threshold) {
  if (records.empty()) {
    return absl::InvalidArgumentError("no multi-label records");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("threshold %g must lie in (0, 1)", threshold));
  }
  std::vector<Outcome> entries;
  for (const auto& record : records) {
    if (record.per_class_probs.size() != record.true_labels.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "record \"", record.instance_id,
          "\": probabilities and truths differ in length"));
    }
    for (size_t k = 0; k < record.per_class_probs.size(); ++k) {
      const double p = record.per_class_probs[k];
      const bool predicted_positive = p >= threshold;
      const bool truth_positive = record.true_labels[k] != 0;
      entries.push_back(
          {predicted_positive == truth_positive, std::max(p, 1.0 - p)});
    }
  }
  return OutcomeSet::Create(std::move(entries));
}

}  // namespace uqeval
