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

// Command-line front end. Subcommands:
//
//   eval      AUCCC report plus cross entropy and Brier score
//   curve     CCC curve points
//   ensemble  merge member record files into softened ensemble records
//   distill   train a confidence model, or predict with one (--predict)
//   synth     generate outcome, OOD-mixture or distillation-task files
//
// Reports go to the output stream, diagnostics to the error stream. Exit
// codes: 0 success, 1 usage, I/O or parse error, 2 degenerate outcomes.

#ifndef UQEVAL_CLI_H_
#define UQEVAL_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace uqeval {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitDegenerate = 2;

// Feature file rows: {"id": "...", "features": [...], "true": 3}.
struct FeatureRecord {
  std::string instance_id;
  std::vector<double> features;
  int true_label = 0;
};

absl::StatusOr<std::vector<FeatureRecord>> ParseFeatureRecords(
    absl::string_view text);
std::string WriteFeatureRecords(const std::vector<FeatureRecord>& records);

// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace uqeval

#endif  // UQEVAL_CLI_H_
