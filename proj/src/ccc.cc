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

#include "uqeval/ccc.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"

namespace uqeval {

namespace {

absl::Status DegenerateError(const OutcomeSet& outcomes) {
  return absl::FailedPreconditionError(absl::StrCat(
      "degenerate outcomes: ", outcomes.num_correct(), " accurate and ",
      outcomes.num_incorrect(),
      " inaccurate results; CCC analysis needs at least one of each"));
}

absl::Status CheckNonDegenerate(const OutcomeSet& outcomes) {
  if (outcomes.num_correct() == 0 || outcomes.num_incorrect() == 0) {
    return DegenerateError(outcomes);
  }
  return absl::OkStatus();
}

std::vector<Outcome> SortedByConfidence(const OutcomeSet& outcomes,
                                        bool descending) {
  std::vector<Outcome> sorted = outcomes.entries();
  if (descending) {
    std::sort(sorted.begin(), sorted.end(),
              [](const Outcome& a, const Outcome& b) {
                return a.confidence > b.confidence;
              });
  } else {
    std::sort(sorted.begin(), sorted.end(),
              [](const Outcome& a, const Outcome& b) {
                return a.confidence < b.confidence;
              });
  }
  return sorted;
}

std::string FormatDouble(double value) {
  char buffer[64];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace

bool IsDegenerateOutcomes(const absl::Status& status) {
  return status.code() == absl::StatusCode::kFailedPrecondition;
}

ConfidenceConfusion ConfusionAtThreshold(const OutcomeSet& outcomes,
                                         double threshold) {
  ConfidenceConfusion confusion;
  confusion.threshold = threshold;
  for (const Outcome& outcome : outcomes.entries()) {
    const bool accepted = outcome.confidence >= threshold;
    if (outcome.correct) {
      ++(accepted ? confusion.c_acc : confusion.i_rej);
    } else {
      ++(accepted ? confusion.i_acc : confusion.c_rej);
    }
  }
  return confusion;
}

absl::StatusOr<CccCurve> ComputeCccCurve(const OutcomeSet& outcomes) {
  if (auto status = CheckNonDegenerate(outcomes); !status.ok()) return status;
  const double n_correct = static_cast<double>(outcomes.num_correct());
  const double n_incorrect = static_cast<double>(outcomes.num_incorrect());

  const std::vector<Outcome> sorted =
      SortedByConfidence(outcomes, /*descending=*/true);

  CccCurve curve;
  curve.points.push_back(
      {0.0, 0.0, std::numeric_limits<double>::infinity()});

  // Lowering the threshold past each group of tied confidences accepts the
  // whole group at once.
  int64_t c_acc = 0;
  int64_t i_acc = 0;
  size_t i = 0;
  while (i < sorted.size()) {
    const double threshold = sorted[i].confidence;
    for (; i < sorted.size() && sorted[i].confidence == threshold; ++i) {
      ++(sorted[i].correct ? c_acc : i_acc);
    }
    // 1 - CRejR = IAcc / (IAcc + CRej); CAccR = CAcc / (CAcc + IRej).
    curve.points.push_back({static_cast<double>(i_acc) / n_incorrect,
                            static_cast<double>(c_acc) / n_correct,
                            threshold});
  }
  return curve;
}

double AucccTrapezoid(const CccCurve& curve) {
  double area = 0.0;
  for (size_t i = 1; i < curve.points.size(); ++i) {
    const CccPoint& prev = curve.points[i - 1];
    const CccPoint& cur = curve.points[i];
    area += (cur.one_minus_crejr - prev.one_minus_crejr) *
            (cur.caccr + prev.caccr) / 2;
  }
  return area;
}

absl::StatusOr<double> AucccRank(const OutcomeSet& outcomes) {
  if (auto status = CheckNonDegenerate(outcomes); !status.ok()) return status;
  const std::vector<Outcome> sorted =
      SortedByConfidence(outcomes, /*descending=*/false);

  // Twice the Mann-Whitney U statistic: every (correct, incorrect) pair where
  // the correct result has higher confidence counts 2, every tie counts 1.
  uint64_t twice_u = 0;
  uint64_t incorrect_below = 0;
  size_t i = 0;
  while (i < sorted.size()) {
    const double value = sorted[i].confidence;
    uint64_t group_correct = 0;
    uint64_t group_incorrect = 0;
    for (; i < sorted.size() && sorted[i].confidence == value; ++i) {
      ++(sorted[i].correct ? group_correct : group_incorrect);
    }
    twice_u += 2 * group_correct * incorrect_below +
               group_correct * group_incorrect;
    incorrect_below += group_incorrect;
  }
  const uint64_t twice_pairs = 2 * static_cast<uint64_t>(outcomes.num_correct()) *
                               static_cast<uint64_t>(outcomes.num_incorrect());
  return static_cast<double>(twice_u) / static_cast<double>(twice_pairs);
}

absl::StatusOr<AucccReport> Evaluate(const OutcomeSet& outcomes) {
  auto curve = ComputeCccCurve(outcomes);
  if (!curve.ok()) return curve.status();
  auto rank = AucccRank(outcomes);
  if (!rank.ok()) return rank.status();

  AucccReport report;
  report.auccc = AucccTrapezoid(*curve);
  report.n_correct = static_cast<int64_t>(outcomes.num_correct());
  report.n_incorrect = static_cast<int64_t>(outcomes.num_incorrect());
  report.curve = *std::move(curve);
  if (std::abs(report.auccc - *rank) > kAucccAgreementTolerance) {
    return absl::InternalError(absl::StrFormat(
        "trapezoidal AUCCC %.17g disagrees with rank AUCCC %.17g",
        report.auccc, *rank));
  }
  return report;
}

std::string CurveToCsv(const CccCurve& curve) {
  std::string out = "threshold,one_minus_crejr,caccr\n";
  for (const CccPoint& point : curve.points) {
    if (std::isfinite(point.threshold)) out += FormatDouble(point.threshold);
    absl::StrAppend(&out, ",", FormatDouble(point.one_minus_crejr), ",",
                    FormatDouble(point.caccr), "\n");
  }
  return out;
}

std::string ReportToJson(const AucccReport& report) {
  nlohmann::json points = nlohmann::json::array();
  for (const CccPoint& point : report.curve.points) {
    points.push_back({point.one_minus_crejr, point.caccr});
  }
  nlohmann::json object = {
      {"auccc", report.auccc},
      {"n_correct", report.n_correct},
      {"n_incorrect", report.n_incorrect},
      {"points", points},
  };
  return object.dump();
}

}  // namespace uqeval
