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

// Confidence-Classification Characteristic (CCC) analysis.
//
// CCC is ROC analysis where "accurate classification" is the positive class
// and the confidence score ranks instances. At a threshold tau a result is
// accepted iff confidence >= tau, which yields the 2x2 confidence confusion
// matrix:
//
//                    accepted   rejected
//   accurate         CAcc       IRej
//   inaccurate       IAcc       CRej
//
// CAccR = CAcc / (CAcc + IRej) and CRejR = CRej / (CRej + IAcc). The CCC curve
// plots CAccR against 1 - CRejR; AUCCC is its area.

#ifndef UQEVAL_CCC_H_
#define UQEVAL_CCC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "uqeval/records.h"

namespace uqeval {

struct ConfidenceConfusion {
  int64_t c_acc = 0;
  int64_t c_rej = 0;
  int64_t i_acc = 0;
  int64_t i_rej = 0;
  double threshold = 0.0;

  int64_t total() const { return c_acc + c_rej + i_acc + i_rej; }
  bool operator==(const ConfidenceConfusion&) const = default;
};

struct CccPoint {
  double one_minus_crejr = 0.0;  // x
  double caccr = 0.0;            // y
  // Acceptance threshold producing the point. The (0, 0) start point carries
  // +infinity (nothing accepted).
  double threshold = 0.0;
};

// Points in increasing-x order, from (0, 0) to (1, 1).
struct CccCurve {
  std::vector<CccPoint> points;
};

struct AucccReport {
  double auccc = 0.0;
  int64_t n_correct = 0;
  int64_t n_incorrect = 0;
  CccCurve curve;
};

// True for the error returned when the outcome set holds a single class and
// CAccR or CRejR is undefined.
bool IsDegenerateOutcomes(const absl::Status& status);

ConfidenceConfusion ConfusionAtThreshold(const OutcomeSet& outcomes,
                                         double threshold);

// One point per distinct confidence value (descending thresholds) plus the
// (0, 0) start. Tied confidences collapse to one diagonal segment.
absl::StatusOr<CccCurve> ComputeCccCurve(const OutcomeSet& outcomes);

// Trapezoidal area under the curve.
double AucccTrapezoid(const CccCurve& curve);

// Mann-Whitney form: P(conf_correct > conf_incorrect) + 0.5 P(tie), computed
// in O(n log n) with exact integer pair counts.
absl::StatusOr<double> AucccRank(const OutcomeSet& outcomes);

// Curve, trapezoidal AUCCC and counts. Fails with an internal error if the
// trapezoidal and rank AUCCC disagree by more than kAucccAgreementTolerance.
absl::StatusOr<AucccReport> Evaluate(const OutcomeSet& outcomes);

inline constexpr double kAucccAgreementTolerance = 1e-12;

// "threshold,one_minus_crejr,caccr" with one row per point; infinite
// thresholds are rendered as empty cells.
std::string CurveToCsv(const CccCurve& curve);

// {"auccc", "n_correct", "n_incorrect", "points": [[x, y], ...]}
std::string ReportToJson(const AucccReport& report);

}  // namespace uqeval

#endif  // UQEVAL_CCC_H_
