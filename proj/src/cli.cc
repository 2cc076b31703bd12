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

#include "uqeval/cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "uqeval/ccc.h"
#include "uqeval/distill.h"
#include "uqeval/ensemble.h"
#include "uqeval/records.h"
#include "uqeval/scoring.h"
#include "uqeval/synth.h"

namespace uqeval {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
  std::string format = "json";
  uint64_t seed = 0;
  bool seed_given = false;
};

struct InputOptions {
  std::vector<std::string> paths;
  std::string input_format = "auto";
  std::string confidence_source = "explicit";
  std::string mode = "standard";
  double threshold = 0.5;
};

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) return absl::DataLossError(absl::StrCat("cannot read ", path));
  return buffer.str();
}

// Empty path or "-" writes to `out`.
absl::Status WriteOutput(const std::string& path, const std::string& content,
                         std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return absl::OkStatus();
  }
  const fs::path parent = fs::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) fs::create_directories(parent, ec);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  file << content;
  file.close();
  if (!file) return absl::DataLossError(absl::StrCat("failed writing ", path));
  return absl::OkStatus();
}

absl::Status Annotate(const absl::Status& status, absl::string_view context) {
  return absl::Status(status.code(),
                      absl::StrCat(context, ": ", status.message()));
}

int Fail(const absl::Status& status, std::ostream& err) {
  err << "error: " << status.message() << "\n";
  return IsDegenerateOutcomes(status) ? kExitDegenerate : kExitError;
}

RecordFormat OutputRecordFormat(const GlobalOptions& global) {
  return global.format == "csv" ? RecordFormat::kCsv : RecordFormat::kJsonLines;
}

RecordFormat InputRecordFormat(const std::string& path,
                               const std::string& choice) {
  if (choice == "csv") return RecordFormat::kCsv;
  if (choice == "jsonl") return RecordFormat::kJsonLines;
  return fs::path(path).extension() == ".csv" ? RecordFormat::kCsv
                                               : RecordFormat::kJsonLines;
}

absl::StatusOr<std::vector<PredictionRecord>> LoadRecords(
    const std::string& path, const std::string& input_format) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  auto records = ParseRecords(*text, InputRecordFormat(path, input_format));
  if (!records.ok()) return Annotate(records.status(), path);
  return records;
}

absl::StatusOr<std::vector<PredictionRecord>> LoadAllRecords(
    const InputOptions& options) {
  std::vector<PredictionRecord> all;
  for (const std::string& path : options.paths) {
    auto records = LoadRecords(path, options.input_format);
    if (!records.ok()) return records.status();
    all.insert(all.end(), std::make_move_iterator(records->begin()),
               std::make_move_iterator(records->end()));
  }
  return all;
}

absl::StatusOr<OutcomeSet> LoadOutcomes(const InputOptions& options) {
  if (options.mode == "multilabel") {
    std::vector<MultiLabelRecord> all;
    for (const std::string& path : options.paths) {
      auto text = ReadFile(path);
      if (!text.ok()) return text.status();
      auto records = ParseMultiLabelRecords(*text);
      if (!records.ok()) return Annotate(records.status(), path);
      all.insert(all.end(), records->begin(), records->end());
    }
    return BinarizeMultiLabel(all, options.threshold);
  }

  auto records = LoadAllRecords(options);
  if (!records.ok()) return records.status();
  const ConfidenceSource source = options.confidence_source == "max-softmax"
                                      ? ConfidenceSource::kMaxSoftmax
                                      : ConfidenceSource::kExplicitField;
  if (options.mode == "io-auroc") return DeriveIoOutcomes(*records, source);
  if (options.mode == "standard") {
    // Standard evaluation covers in-distribution records only.
    std::erase_if(*records, [](const PredictionRecord& r) {
      return r.dist_tag == DistTag::kOutOfDistribution;
    });
    if (records->empty()) {
      return absl::InvalidArgumentError("no in-distribution records");
    }
  }
  return DeriveOutcomes(*records, source);
}

void AddInputOptions(CLI::App* command, InputOptions* options) {
  command->add_option("inputs", options->paths, "Record files")
      ->required()
      ->check(CLI::ExistingFile);
  command->add_option("--input-format", options->input_format,
                      "Record file format; auto picks CSV for *.csv")
      ->check(CLI::IsMember({"auto", "jsonl", "csv"}))
      ->capture_default_str();
  command->add_option("--confidence-source", options->confidence_source,
                      "Confidence taken from the conf field or max(probs)")
      ->check(CLI::IsMember({"explicit", "max-softmax"}))
      ->capture_default_str();
  command
      ->add_option("--mode", options->mode,
                   "standard: in-distribution records only; ood-unified: "
                   "out-of-distribution records count as inaccurate; "
                   "io-auroc: in- vs out-of-distribution; multilabel: "
                   "multi-label records pooled per class")
      ->check(CLI::IsMember({"standard", "ood-unified", "io-auroc",
                             "multilabel"}))
      ->capture_default_str();
  command
      ->add_option("--threshold", options->threshold,
                   "Positive-prediction threshold for multilabel mode")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

// ---------------------------------------------------------------------------
// eval / curve

int RunEval(const GlobalOptions& global, const InputOptions& options,
            const std::string& curve_out, std::ostream& out,
            std::ostream& err) {
  auto outcomes = LoadOutcomes(options);
  if (!outcomes.ok()) return Fail(outcomes.status(), err);
  auto report = Evaluate(*outcomes);
  if (!report.ok()) return Fail(report.status(), err);
  const ScoreReport scores = Score(*outcomes);

  if (!curve_out.empty()) {
    if (auto status = WriteOutput(curve_out, CurveToCsv(report->curve), out);
        !status.ok()) {
      return Fail(status, err);
    }
  }

  if (global.format == "csv") {
    out << "mode,auccc,n_correct,n_incorrect,cross_entropy,brier\n";
    out << absl::StrFormat("%s,%.17g,%d,%d,%.17g,%.17g\n", options.mode,
                           report->auccc, report->n_correct,
                           report->n_incorrect, scores.cross_entropy,
                           scores.brier);
    return kExitOk;
  }
  json object = json::parse(ReportToJson(*report));
  object["cross_entropy"] = scores.cross_entropy;
  object["brier"] = scores.brier;
  object["mode"] = options.mode;
  out << object.dump() << "\n";
  return kExitOk;
}

int RunCurve(const GlobalOptions& global, const InputOptions& options,
             std::ostream& out, std::ostream& err) {
  auto outcomes = LoadOutcomes(options);
  if (!outcomes.ok()) return Fail(outcomes.status(), err);
  auto curve = ComputeCccCurve(*outcomes);
  if (!curve.ok()) return Fail(curve.status(), err);
  if (global.format == "csv") {
    out << CurveToCsv(*curve);
    return kExitOk;
  }
  json points = json::array();
  json thresholds = json::array();
  for (const CccPoint& point : curve->points) {
    points.push_back({point.one_minus_crejr, point.caccr});
    thresholds.push_back(std::isfinite(point.threshold) ? json(point.threshold)
                                                        : json(nullptr));
  }
  out << json{{"points", points}, {"thresholds", thresholds}}.dump() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// ensemble

// Member record files: each path is a file, or a directory whose *.jsonl and
// *.csv files are taken in name order.
absl::StatusOr<std::vector<std::string>> ExpandMemberPaths(
    const std::vector<std::string>& paths) {
  std::vector<std::string> files;
  for (const std::string& path : paths) {
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(path)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".jsonl" || ext == ".csv")) {
          found.push_back(entry.path().string());
        }
      }
      std::sort(found.begin(), found.end());
      if (found.empty()) {
        return absl::NotFoundError(
            absl::StrCat("no member record files in ", path));
      }
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(path, ec)) {
      files.push_back(path);
    } else {
      return absl::NotFoundError(absl::StrCat("no such file or directory: ", path));
    }
  }
  if (files.empty()) return absl::InvalidArgumentError("no ensemble members");
  return files;
}

using MemberIndex = std::unordered_map<std::string, size_t>;

struct Member {
  std::string path;
  std::vector<PredictionRecord> records;
  MemberIndex index;
};

absl::StatusOr<std::vector<Member>> LoadMembers(
    const std::vector<std::string>& paths, const std::string& input_format) {
  auto files = ExpandMemberPaths(paths);
  if (!files.ok()) return files.status();
  std::vector<Member> members;
  for (const std::string& file : *files) {
    auto records = LoadRecords(file, input_format);
    if (!records.ok()) return records.status();
    Member member{file, *std::move(records), {}};
    for (size_t i = 0; i < member.records.size(); ++i) {
      const PredictionRecord& record = member.records[i];
      if (!record.probs.has_value()) {
        return absl::InvalidArgumentError(absl::StrCat(
            file, ": record \"", record.instance_id, "\" has no probabilities"));
      }
      if (!member.index.emplace(record.instance_id, i).second) {
        return absl::InvalidArgumentError(absl::StrCat(
            file, ": duplicate instance id \"", record.instance_id, "\""));
      }
    }
    members.push_back(std::move(member));
  }
  return members;
}

// Probability vectors of every member for `instance_id`.
absl::StatusOr<std::vector<std::vector<double>>> MemberProbs(
    const std::vector<Member>& members, const std::string& instance_id) {
  std::vector<std::vector<double>> probs;
  probs.reserve(members.size());
  for (const Member& member : members) {
    auto it = member.index.find(instance_id);
    if (it == member.index.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          member.path, ": missing instance id \"", instance_id, "\""));
    }
    probs.push_back(*member.records[it->second].probs);
  }
  return probs;
}

int RunEnsemble(const GlobalOptions& global,
                const std::vector<std::string>& paths,
                const std::string& input_format, double temperature,
                const std::string& out_path, std::ostream& out,
                std::ostream& err) {
  auto members = LoadMembers(paths, input_format);
  if (!members.ok()) return Fail(members.status(), err);
  const Member& first = members->front();
  for (const Member& member : *members) {
    if (member.records.size() != first.records.size()) {
      return Fail(absl::InvalidArgumentError(absl::StrFormat(
                      "%s has %d records, %s has %d", member.path,
                      member.records.size(), first.path, first.records.size())),
                  err);
    }
  }

  std::vector<PredictionRecord> merged;
  merged.reserve(first.records.size());
  for (const PredictionRecord& base : first.records) {
    auto probs = MemberProbs(*members, base.instance_id);
    if (!probs.ok()) return Fail(probs.status(), err);
    for (const Member& member : *members) {
      const PredictionRecord& other =
          member.records[member.index.at(base.instance_id)];
      if (other.true_label != base.true_label ||
          other.dist_tag != base.dist_tag) {
        return Fail(absl::InvalidArgumentError(absl::StrCat(
                        member.path, ": labels or tag of \"", base.instance_id,
                        "\" disagree with ", first.path)),
                    err);
      }
    }
    auto combined = CombineEnsemble(*std::move(probs), temperature);
    if (!combined.ok()) {
      return Fail(Annotate(combined.status(), base.instance_id), err);
    }
    PredictionRecord record;
    record.instance_id = base.instance_id;
    record.pred_label = static_cast<int>(ArgMax(combined->softened));
    record.true_label = base.true_label;
    record.confidence = combined->softened[record.pred_label];
    record.dist_tag = base.dist_tag;
    record.probs = std::move(combined->softened);
    merged.push_back(std::move(record));
  }
  if (auto status = WriteOutput(
          out_path, WriteRecords(merged, OutputRecordFormat(global)), out);
      !status.ok()) {
    return Fail(status, err);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// distill

struct DistillOptions {
  std::string train_path;
  std::string features_path;
  std::vector<std::string> ensemble_paths;
  std::string input_format = "auto";
  double temperature_train = kDefaultTrainTemperature;
  double temperature = kDefaultEvalTemperature;
  int epochs = TrainConfig().epochs;
  double learning_rate = TrainConfig().learning_rate;
  int batch_size = TrainConfig().batch_size;
  std::vector<int> hidden = TrainConfig().hidden_sizes;
  bool no_decay = false;
  bool predict = false;
  std::string model_path;
  std::string out_path;
};

absl::StatusOr<std::vector<FeatureRecord>> LoadFeatures(const std::string& path) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  auto records = ParseFeatureRecords(*text);
  if (!records.ok()) return Annotate(records.status(), path);
  return records;
}

int RunDistillTrain(const GlobalOptions& global, const DistillOptions& options,
                    std::ostream& out, std::ostream& err) {
  if (options.train_path.empty() || options.out_path.empty()) {
    return Fail(absl::InvalidArgumentError(
                    "training needs --train and --out (or use --predict)"),
                err);
  }
  auto features = LoadFeatures(options.train_path);
  if (!features.ok()) return Fail(features.status(), err);
  auto members = LoadMembers(options.ensemble_paths, options.input_format);
  if (!members.ok()) return Fail(members.status(), err);

  std::vector<CascadeExample> examples;
  examples.reserve(features->size());
  for (FeatureRecord& record : *features) {
    auto probs = MemberProbs(*members, record.instance_id);
    if (!probs.ok()) return Fail(probs.status(), err);
    auto example =
        MakeCascadeExample(std::move(record.features), *probs,
                           record.true_label, options.temperature_train);
    if (!example.ok()) {
      return Fail(Annotate(example.status(), record.instance_id), err);
    }
    examples.push_back(*std::move(example));
  }

  TrainConfig config;
  config.learning_rate = options.learning_rate;
  config.epochs = options.epochs;
  config.batch_size = options.batch_size;
  config.train_temperature = options.temperature_train;
  config.hidden_sizes = options.hidden;
  config.step_decay = !options.no_decay;
  if (global.seed_given) config.seed = global.seed;

  auto trained = TrainConfidenceModel(examples, config);
  if (!trained.ok()) return Fail(trained.status(), err);
  if (auto status =
          WriteOutput(options.out_path, trained->model.ToJson() + "\n", out);
      !status.ok()) {
    return Fail(status, err);
  }
  json summary = {
      {"examples", examples.size()},
      {"epochs", config.epochs},
      {"seed", config.seed},
      {"final_loss", trained->epoch_losses.back()},
      {"epoch_losses", trained->epoch_losses},
  };
  out << summary.dump() << "\n";
  return kExitOk;
}

int RunDistillPredict(const GlobalOptions& global,
                      const DistillOptions& options, std::ostream& out,
                      std::ostream& err) {
  if (options.model_path.empty() || options.features_path.empty()) {
    return Fail(absl::InvalidArgumentError(
                    "--predict needs --model and --features"),
                err);
  }
  auto model_text = ReadFile(options.model_path);
  if (!model_text.ok()) return Fail(model_text.status(), err);
  auto model = ConfidenceModel::FromJson(*model_text);
  if (!model.ok()) return Fail(Annotate(model.status(), options.model_path), err);
  auto features = LoadFeatures(options.features_path);
  if (!features.ok()) return Fail(features.status(), err);
  auto members = LoadMembers(options.ensemble_paths, options.input_format);
  if (!members.ok()) return Fail(members.status(), err);

  std::vector<PredictionRecord> records;
  records.reserve(features->size());
  for (const FeatureRecord& feature : *features) {
    auto probs = MemberProbs(*members, feature.instance_id);
    if (!probs.ok()) return Fail(probs.status(), err);
    auto combined = CombineEnsemble(*std::move(probs), options.temperature);
    if (!combined.ok()) {
      return Fail(Annotate(combined.status(), feature.instance_id), err);
    }
    auto input = BuildCascadeInput(feature.features, combined->softened);
    if (!input.ok()) return Fail(input.status(), err);
    auto confidence = PredictConfidence(*model, *input);
    if (!confidence.ok()) {
      return Fail(Annotate(confidence.status(), feature.instance_id), err);
    }
    PredictionRecord record;
    record.instance_id = feature.instance_id;
    record.pred_label = static_cast<int>(ArgMax(combined->softened));
    record.true_label = feature.true_label;
    record.confidence = *confidence;
    record.probs = std::move(combined->softened);
    records.push_back(std::move(record));
  }
  if (auto status = WriteOutput(
          options.out_path, WriteRecords(records, OutputRecordFormat(global)),
          out);
      !status.ok()) {
    return Fail(status, err);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
  std::string out_path;
  // outcomes
  int64_t n_correct = 1000;
  int64_t n_incorrect = 1000;
  std::string correct_dist = "uniform:0,1";
  std::string incorrect_dist = "uniform:0,1";
  // ood
  SynthOodConfig ood;
  std::string id_correct_dist = "beta:5,2";
  std::string id_incorrect_dist = "beta:2,3";
  std::string ood_dist = "beta:2,4";
  // udist
  SynthUdistConfig udist = DefaultUdistConfig();
  std::string out_dir;
};

int RunSynthOutcomes(const GlobalOptions& global, const SynthOptions& options,
                     std::ostream& out, std::ostream& err) {
  SynthOutcomeConfig config;
  config.n_correct = options.n_correct;
  config.n_incorrect = options.n_incorrect;
  config.seed = global.seed;
  auto correct = ParseConfDist(options.correct_dist);
  if (!correct.ok()) return Fail(correct.status(), err);
  auto incorrect = ParseConfDist(options.incorrect_dist);
  if (!incorrect.ok()) return Fail(incorrect.status(), err);
  config.correct_dist = *correct;
  config.incorrect_dist = *incorrect;
  auto outcomes = GenOutcomes(config);
  if (!outcomes.ok()) return Fail(outcomes.status(), err);
  if (auto status = WriteOutput(
          options.out_path,
          WriteRecords(OutcomesToRecords(*outcomes), OutputRecordFormat(global)),
          out);
      !status.ok()) {
    return Fail(status, err);
  }
  return kExitOk;
}

int RunSynthOod(const GlobalOptions& global, const SynthOptions& options,
                std::ostream& out, std::ostream& err) {
  SynthOodConfig config = options.ood;
  config.seed = global.seed;
  for (auto [text, dist] :
       {std::pair{&options.id_correct_dist, &config.id_correct_dist},
        std::pair{&options.id_incorrect_dist, &config.id_incorrect_dist},
        std::pair{&options.ood_dist, &config.ood_dist}}) {
    auto parsed = ParseConfDist(*text);
    if (!parsed.ok()) return Fail(parsed.status(), err);
    *dist = *parsed;
  }
  auto records = GenOodMixture(config);
  if (!records.ok()) return Fail(records.status(), err);
  if (auto status = WriteOutput(
          options.out_path, WriteRecords(*records, OutputRecordFormat(global)),
          out);
      !status.ok()) {
    return Fail(status, err);
  }
  return kExitOk;
}

absl::Status WriteUdistSplit(const UdistSplit& split, const std::string& name,
                             const fs::path& dir, RecordFormat format,
                             std::ostream& out) {
  std::vector<FeatureRecord> features;
  features.reserve(split.examples.size());
  for (size_t i = 0; i < split.examples.size(); ++i) {
    features.push_back({absl::StrFormat("%s-%06d", name, i),
                        split.examples[i].features, split.examples[i].label});
  }
  if (auto status = WriteOutput((dir / name / "features.jsonl").string(),
                                WriteFeatureRecords(features), out);
      !status.ok()) {
    return status;
  }
  const size_t num_members =
      split.ensemble_probs.empty() ? 0 : split.ensemble_probs.front().size();
  for (size_t m = 0; m < num_members; ++m) {
    std::vector<PredictionRecord> records;
    records.reserve(split.examples.size());
    for (size_t i = 0; i < split.examples.size(); ++i) {
      PredictionRecord record;
      record.instance_id = features[i].instance_id;
      record.probs = split.ensemble_probs[i][m];
      record.pred_label = static_cast<int>(ArgMax(*record.probs));
      record.true_label = split.examples[i].label;
      records.push_back(std::move(record));
    }
    const std::string file = absl::StrFormat(
        "member_%02d.%s", m, format == RecordFormat::kCsv ? "csv" : "jsonl");
    if (auto status = WriteOutput((dir / name / "members" / file).string(),
                                  WriteRecords(records, format), out);
        !status.ok()) {
      return status;
    }
  }
  return absl::OkStatus();
}

int RunSynthUdist(const GlobalOptions& global, const SynthOptions& options,
                  std::ostream& out, std::ostream& err) {
  if (options.out_dir.empty()) {
    return Fail(absl::InvalidArgumentError("--out-dir is required"), err);
  }
  SynthUdistConfig config = options.udist;
  if (global.seed_given) config.seed = global.seed;
  auto task = GenUdistTask(config);
  if (!task.ok()) return Fail(task.status(), err);
  const fs::path dir(options.out_dir);
  const RecordFormat format = OutputRecordFormat(global);
  for (auto [split, name] : {std::pair{&task->train, "train"},
                             std::pair{&task->test, "test"}}) {
    if (auto status = WriteUdistSplit(*split, name, dir, format, out);
        !status.ok()) {
      return Fail(status, err);
    }
  }
  return kExitOk;
}

}  // namespace

absl::StatusOr<std::vector<FeatureRecord>> ParseFeatureRecords(
    absl::string_view text) {
  std::vector<FeatureRecord> records;
  size_t line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == absl::string_view::npos) continue;
    json object = json::parse(line.begin(), line.end(), nullptr,
                              /*allow_exceptions=*/false);
    auto error = [&](absl::string_view message) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": ", message));
    };
    if (object.is_discarded() || !object.is_object()) {
      return error("malformed JSON");
    }
    FeatureRecord record;
    if (!object.contains("id") || !object["id"].is_string()) {
      return error("missing string field \"id\"");
    }
    record.instance_id = object["id"].get<std::string>();
    if (!object.contains("features") || !object["features"].is_array() ||
        object["features"].empty()) {
      return error("\"features\" must be a non-empty array of numbers");
    }
    for (const auto& value : object["features"]) {
      if (!value.is_number()) return error("\"features\" must hold numbers");
      record.features.push_back(value.get<double>());
    }
    if (!object.contains("true") || !object["true"].is_number_integer() ||
        object["true"].get<int>() < 0) {
      return error("\"true\" must be a non-negative integer");
    }
    record.true_label = object["true"].get<int>();
    records.push_back(std::move(record));
  }
  return records;
}

std::string WriteFeatureRecords(const std::vector<FeatureRecord>& records) {
  std::string out;
  for (const FeatureRecord& record : records) {
    json object = {{"id", record.instance_id},
                   {"features", record.features},
                   {"true", record.true_label}};
    absl::StrAppend(&out, object.dump(), "\n");
  }
  return out;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Uncertainty-quantification evaluation (CCC / AUCCC) and "
               "uncertainty distillation toolkit",
               "uqeval"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--format", global.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  CLI::Option* seed_option =
      app.add_option("--seed", global.seed, "Random seed");

  // eval
  InputOptions eval_options;
  std::string curve_out;
  CLI::App* eval = app.add_subcommand("eval", "Report AUCCC, cross entropy "
                                              "and Brier score");
  AddInputOptions(eval, &eval_options);
  eval->add_option("--curve-out", curve_out, "Also write the CCC curve CSV");

  // curve
  InputOptions curve_options;
  CLI::App* curve = app.add_subcommand("curve", "Print the CCC curve");
  AddInputOptions(curve, &curve_options);

  // ensemble
  std::vector<std::string> member_paths;
  std::string ensemble_input_format = "auto";
  double temperature = kDefaultEvalTemperature;
  std::string ensemble_out;
  CLI::App* ensemble = app.add_subcommand(
      "ensemble", "Average member records and apply temperature scaling");
  ensemble->add_option("members", member_paths, "Member record files")
      ->required()
      ->check(CLI::ExistingFile);
  ensemble->add_option("--input-format", ensemble_input_format)
      ->check(CLI::IsMember({"auto", "jsonl", "csv"}))
      ->capture_default_str();
  ensemble->add_option("--temperature", temperature, "Softening temperature")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ensemble->add_option("--out", ensemble_out, "Output file (default stdout)");

  // distill
  DistillOptions distill_options;
  CLI::App* distill = app.add_subcommand(
      "distill", "Train a confidence model or predict with one");
  distill->add_option("--train", distill_options.train_path,
                      "Training feature file");
  distill->add_option("--features", distill_options.features_path,
                      "Feature file to predict on (with --predict)");
  distill
      ->add_option("--ensemble-dirs", distill_options.ensemble_paths,
                   "Ensemble member record files or directories")
      ->required();
  distill->add_option("--input-format", distill_options.input_format)
      ->check(CLI::IsMember({"auto", "jsonl", "csv"}))
      ->capture_default_str();
  distill
      ->add_option("--temperature-train", distill_options.temperature_train,
                   "Temperature for training inputs and targets")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  distill
      ->add_option("--temperature", distill_options.temperature,
                   "Temperature for prediction inputs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  distill->add_option("--epochs", distill_options.epochs)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  distill->add_option("--lr", distill_options.learning_rate, "Learning rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  distill->add_option("--batch-size", distill_options.batch_size)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  distill->add_option("--hidden", distill_options.hidden, "Hidden widths")
      ->delimiter(',')
      ->capture_default_str();
  distill->add_flag("--no-decay", distill_options.no_decay,
                    "Keep the learning rate fixed");
  distill->add_flag("--predict", distill_options.predict,
                    "Emit records with conf set to the model output");
  distill->add_option("--model", distill_options.model_path,
                      "Model file to predict with");
  distill->add_option("--out", distill_options.out_path,
                      "Model output (training) or record output (predict)");

  // synth
  SynthOptions synth_options;
  CLI::App* synth = app.add_subcommand("synth", "Generate synthetic data");
  synth->require_subcommand(1);
  CLI::App* synth_outcomes =
      synth->add_subcommand("outcomes", "Outcome records from two confidence "
                                        "distributions");
  synth_outcomes->add_option("--n-correct", synth_options.n_correct)
      ->capture_default_str();
  synth_outcomes->add_option("--n-incorrect", synth_options.n_incorrect)
      ->capture_default_str();
  synth_outcomes
      ->add_option("--correct-dist", synth_options.correct_dist,
                   "uniform:A,B | beta:ALPHA,BETA | constant:C")
      ->capture_default_str();
  synth_outcomes->add_option("--incorrect-dist", synth_options.incorrect_dist)
      ->capture_default_str();
  synth_outcomes->add_option("--out", synth_options.out_path);

  CLI::App* synth_ood = synth->add_subcommand(
      "ood", "In-distribution plus out-of-distribution records");
  synth_ood->add_option("--n-id-correct", synth_options.ood.n_id_correct)
      ->capture_default_str();
  synth_ood->add_option("--n-id-incorrect", synth_options.ood.n_id_incorrect)
      ->capture_default_str();
  synth_ood->add_option("--n-ood", synth_options.ood.n_ood)
      ->capture_default_str();
  synth_ood->add_option("--id-correct-dist", synth_options.id_correct_dist)
      ->capture_default_str();
  synth_ood->add_option("--id-incorrect-dist", synth_options.id_incorrect_dist)
      ->capture_default_str();
  synth_ood->add_option("--ood-dist", synth_options.ood_dist)
      ->capture_default_str();
  synth_ood->add_option("--out", synth_options.out_path);

  CLI::App* synth_udist = synth->add_subcommand(
      "udist", "Toy distillation task: feature files and one record file per "
               "simulated ensemble member");
  SynthUdistConfig& udist = synth_options.udist;
  synth_udist->add_option("--out-dir", synth_options.out_dir)->required();
  synth_udist->add_option("--n-train", udist.n_train)->capture_default_str();
  synth_udist->add_option("--n-test", udist.n_test)->capture_default_str();
  synth_udist->add_option("--feature-dim", udist.feature_dim)
      ->capture_default_str();
  synth_udist->add_option("--classes", udist.n_classes)->capture_default_str();
  synth_udist->add_option("--members", udist.ensemble_size)
      ->capture_default_str();
  synth_udist->add_option("--noise", udist.noise_scale)->capture_default_str();
  synth_udist->add_option("--signal-strength", udist.error_signal_strength)
      ->capture_default_str();
  synth_udist->add_option("--class-separation", udist.class_separation)
      ->capture_default_str();

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("uqeval");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& arg : argv_storage) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }
  global.seed_given = seed_option->count() > 0;

  if (eval->parsed()) {
    return RunEval(global, eval_options, curve_out, out, err);
  }
  if (curve->parsed()) return RunCurve(global, curve_options, out, err);
  if (ensemble->parsed()) {
    return RunEnsemble(global, member_paths, ensemble_input_format,
                       temperature, ensemble_out, out, err);
  }
  if (distill->parsed()) {
    return distill_options.predict
               ? RunDistillPredict(global, distill_options, out, err)
               : RunDistillTrain(global, distill_options, out, err);
  }
  if (synth_outcomes->parsed()) {
    return RunSynthOutcomes(global, synth_options, out, err);
  }
  if (synth_ood->parsed()) return RunSynthOod(global, synth_options, out, err);
  if (synth_udist->parsed()) {
    return RunSynthUdist(global, synth_options, out, err);
  }
  err << app.help();
  return kExitError;
}

}  // namespace uqeval
