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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
//
// Usage: acceptance_test <path-to-uqeval-binary> <scratch-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "test_oracles.h"
#include "uqeval/ccc.h"
#include "uqeval/distill.h"
#include "uqeval/ensemble.h"
#include "uqeval/experiment.h"
#include "uqeval/random.h"
#include "uqeval/records.h"
#include "uqeval/scoring.h"
#include "uqeval/synth.h"

namespace uqeval {
namespace {

namespace fs = std::filesystem;
using testing::BruteForceAuccc;
using testing::CentralDifference;
using testing::ClosedFormTemperature;
using testing::ForwardLoss;
using testing::GradientError;
using testing::RandomOutcomes;

struct Verdict {
  bool pass = true;
  std::string detail;

  void Require(bool condition, const std::string& what) {
    if (!condition && pass) {
      pass = false;
      detail = what;
    }
  }
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

OutcomeSet MustSet(std::vector<Outcome> entries) {
  auto set = OutcomeSet::Create(std::move(entries));
  if (!set.ok()) {
    std::fprintf(stderr, "invalid outcome set: %s\n",
                 set.status().ToString().c_str());
    std::abort();
  }
  return *std::move(set);
}

double Rank(const std::vector<Outcome>& entries) {
  auto value = AucccRank(MustSet(entries));
  return value.ok() ? *value : std::nan("");
}

// 1. Trapezoid, rank and brute force agree on random sets.
Verdict OracleEquivalence() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  Rng rng(101);
  double worst = 0.0;
  const int kSets = 1000;
  for (int trial = 0; trial < kSets; ++trial) {
    const int levels = trial % 3 == 0 ? 1 + static_cast<int>(rng.UniformInt(10))
                                      : 1000000;
    std::vector<Outcome> entries =
        RandomOutcomes(rng, 2 + rng.UniformInt(900), levels);
    // Exact duplicates of random entries.
    const size_t duplicates = rng.UniformInt(entries.size() / 10 + 1);
    for (size_t d = 0; d < duplicates; ++d) {
      entries.push_back(entries[rng.UniformInt(entries.size())]);
    }
    const OutcomeSet set = MustSet(entries);
    auto curve = ComputeCccCurve(set);
    auto rank = AucccRank(set);
    if (!curve.ok() || !rank.ok()) {
      v.Require(false, "unexpected error");
      break;
    }
    const double trapezoid = AucccTrapezoid(*curve);
    const double brute = BruteForceAuccc(entries);
    worst = std::max({worst, std::abs(trapezoid - *rank),
                      std::abs(trapezoid - brute), std::abs(*rank - brute)});
  }
  const double elapsed = Seconds(start);
  v.Require(worst <= 1e-12, absl::StrFormat("max deviation %g", worst));
  v.Require(elapsed < 30.0, absl::StrFormat("took %.1f s", elapsed));
  if (v.pass) {
    v.detail = absl::StrFormat("%d sets, max deviation %g, %.2f s", kSets,
                               worst, elapsed);
  }
  return v;
}

// 2. Monotone, shift, duplication invariance and complement symmetry.
Verdict Invariances() {
  Verdict v;
  Rng rng(202);
  double worst_complement = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Outcome> base =
        RandomOutcomes(rng, 2 + rng.UniformInt(500), 2 + rng.UniformInt(40));
    // Keep confidences in [0, 0.5] so a shift by 0.5 stays in range.
    for (Outcome& e : base) e.confidence *= 0.5;
    const double auccc = Rank(base);

    const std::vector<std::function<double(double)>> maps = {
        [](double c) { return 0.3 * c + 0.1; },
        [](double c) { return c * c * c; },
        [](double c) { return 1.0 / (1.0 + std::exp(-10.0 * (c - 0.25))); },
        [](double c) { return c + 0.5; },
    };
    for (size_t m = 0; m < maps.size(); ++m) {
      std::vector<Outcome> mapped = base;
      for (Outcome& e : mapped) e.confidence = maps[m](e.confidence);
      v.Require(Rank(mapped) == auccc,
                absl::StrFormat("map %d changed AUCCC on set %d", m, trial));
    }

    std::vector<Outcome> duplicated = base;
    const int k = 1 + static_cast<int>(rng.UniformInt(4));
    for (const Outcome& e : base) {
      if (e.correct) continue;
      for (int j = 0; j < k; ++j) duplicated.push_back(e);
    }
    v.Require(Rank(duplicated) == auccc,
              absl::StrFormat("duplication changed AUCCC on set %d", trial));

    std::vector<Outcome> flipped = base;
    for (Outcome& e : flipped) e.correct = !e.correct;
    worst_complement =
        std::max(worst_complement, std::abs(Rank(flipped) - (1.0 - auccc)));
  }
  v.Require(worst_complement <= 1e-12,
            absl::StrFormat("complement deviation %g", worst_complement));
  if (v.pass) {
    v.detail = absl::StrFormat(
        "100 sets exact; complement deviation %g", worst_complement);
  }
  return v;
}

// 3. Perfect separation, constant confidence and the random model.
Verdict Boundaries() {
  Verdict v;
  std::vector<Outcome> perfect, constant;
  for (int i = 0; i < 500; ++i) {
    perfect.push_back({true, 0.6 + 0.0008 * i});
    perfect.push_back({false, 0.0008 * i});
    constant.push_back({i % 3 == 0, 0.42});
  }
  for (const auto& [entries, expected, name] :
       {std::tuple{&perfect, 1.0, "perfect"},
        std::tuple{&constant, 0.5, "constant"}}) {
    auto report = Evaluate(MustSet(*entries));
    v.Require(report.ok() && report->auccc == expected &&
                  Rank(*entries) == expected,
              absl::StrCat(name, " set did not give exactly ", expected));
  }
  SynthOutcomeConfig config;
  config.n_correct = 10000;
  config.n_incorrect = 10000;
  config.seed = 303;
  auto random = GenOutcomes(config);
  auto report = random.ok() ? Evaluate(*random) : random.status();
  const double auccc = report.ok() ? report->auccc : -1.0;
  v.Require(auccc >= 0.48 && auccc <= 0.52,
            absl::StrFormat("random model AUCCC %.4f", auccc));
  if (v.pass) {
    v.detail = absl::StrFormat("perfect 1, constant 0.5, random %.4f", auccc);
  }
  return v;
}

// 4. Cross entropy and Brier change under a uniform shift; AUCCC does not.
Verdict ShiftCritique() {
  Verdict v;
  const ShiftPerturbTriplet triplet = MakeShiftPerturbTriplet();
  const ScoreReport u = Score(triplet.upper);
  const ScoreReport m = Score(triplet.middle);
  const ScoreReport b = Score(triplet.bottom);
  const double au = *AucccRank(triplet.upper);
  const double am = *AucccRank(triplet.middle);
  const double ab = *AucccRank(triplet.bottom);
  v.Require(u.cross_entropy != m.cross_entropy, "cross entropy unchanged");
  v.Require(u.brier != m.brier, "Brier unchanged");
  v.Require(au == am && au == ab, "AUCCC differs across U/M/B");
  v.detail = absl::StrFormat(
      "CE U/M/B %.4f/%.4f/%.4f, Brier %.4f/%.4f/%.4f, AUCCC %.6f/%.6f/%.6f",
      u.cross_entropy, m.cross_entropy, b.cross_entropy, u.brier, m.brier,
      b.brier, au, am, ab);
  return v;
}

// 5. Temperature scaling against the closed form.
Verdict TemperatureScaling() {
  Verdict v;
  Rng rng(505);
  double worst_identity = 0.0;
  double worst_closed = 0.0;
  bool argmax_kept = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + static_cast<int>(rng.UniformInt(9));
    std::vector<double> p(k);
    double total = 0.0;
    for (double& x : p) total += (x = rng.Gamma(0.3 + rng.Uniform()));
    for (double& x : p) x /= total;
    const std::vector<double> identity = *TemperatureScale(p, 1.0);
    for (int i = 0; i < k; ++i) {
      worst_identity = std::max(worst_identity, std::abs(identity[i] - p[i]));
    }
    for (double t : {0.5, 2.0, 3.0, 8.0, 10.0}) {
      const std::vector<double> out = *TemperatureScale(p, t);
      const std::vector<double> oracle = ClosedFormTemperature(p, t);
      for (int i = 0; i < k; ++i) {
        worst_closed = std::max(worst_closed, std::abs(out[i] - oracle[i]));
      }
      argmax_kept &= ArgMax(out) == ArgMax(p);
    }
  }
  const std::vector<double> example = *TemperatureScale({0.8, 0.2}, 2.0);
  const double example_error = std::max(std::abs(example[0] - 2.0 / 3.0),
                                        std::abs(example[1] - 1.0 / 3.0));
  v.Require(worst_identity <= 1e-12,
            absl::StrFormat("T=1 deviation %g", worst_identity));
  v.Require(worst_closed <= 1e-9,
            absl::StrFormat("closed-form deviation %g", worst_closed));
  v.Require(example_error <= 1e-9,
            absl::StrFormat("[0.8,0.2] T=2 deviation %g", example_error));
  v.Require(argmax_kept, "argmax changed");
  if (v.pass) {
    v.detail = absl::StrFormat(
        "identity %g, closed form %g, example %g, argmax kept", worst_identity,
        worst_closed, example_error);
  }
  return v;
}

// 6. Analytic gradients against central differences.
Verdict GradientChecks() {
  Verdict v;
  Rng rng(606);
  double worst_scalar = 0.0;
  double worst_network = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double s = rng.Uniform(0.01, 0.99);
    const double t = rng.Uniform();
    const double numeric = CentralDifference(
        [t](double x) { return *ConfidenceLoss(x, t); }, s, 1e-5);
    worst_scalar =
        std::max(worst_scalar, GradientError(*ConfidenceLossGrad(s, t), numeric));

    const int dim = 1 + static_cast<int>(rng.UniformInt(4));
    const int k = 2 + static_cast<int>(rng.UniformInt(3));
    const int outputs = 1 + static_cast<int>(rng.UniformInt(2));
    std::vector<int> sizes = {dim + k};
    for (int h = 0; h < 1 + static_cast<int>(rng.UniformInt(2)); ++h) {
      sizes.push_back(2 + static_cast<int>(rng.UniformInt(5)));
    }
    sizes.push_back(outputs);
    ConfidenceModel model = *ConfidenceModel::Create(sizes, trial);
    for (DenseLayer& layer : model.mutable_layers()) {
      for (double& b : layer.biases) b = rng.Normal(0.0, 0.3);
    }
    std::vector<CascadeExample> batch(1 + rng.UniformInt(6));
    for (CascadeExample& e : batch) {
      for (int i = 0; i < dim; ++i) e.features.push_back(rng.Normal());
      double total = 0.0;
      for (int i = 0; i < k; ++i) {
        e.softened_probs.push_back(rng.Uniform(0.05, 1.0));
        total += e.softened_probs.back();
      }
      for (double& p : e.softened_probs) p /= total;
      for (int i = 0; i < outputs; ++i) {
        e.targets.push_back(rng.Uniform(0.02, 0.98));
      }
    }
    std::vector<const CascadeExample*> pointers;
    for (const CascadeExample& e : batch) pointers.push_back(&e);
    std::vector<DenseLayer> gradient;
    model.LossAndGradient(pointers, &gradient);
    for (size_t l = 0; l < model.layers().size(); ++l) {
      DenseLayer& layer = model.mutable_layers()[l];
      auto probe = [&](double* param, double analytic) {
        const double saved = *param;
        const double fd = CentralDifference(
            [&](double value) {
              *param = value;
              return ForwardLoss(model, batch);
            },
            saved, 1e-5);
        *param = saved;
        worst_network = std::max(worst_network, GradientError(analytic, fd));
      };
      for (size_t i = 0; i < layer.weights.size(); ++i) {
        probe(&layer.weights[i], gradient[l].weights[i]);
      }
      for (size_t i = 0; i < layer.biases.size(); ++i) {
        probe(&layer.biases[i], gradient[l].biases[i]);
      }
    }
  }
  v.Require(worst_scalar < 1e-6,
            absl::StrFormat("scalar gradient error %g", worst_scalar));
  v.Require(worst_network < 1e-4,
            absl::StrFormat("network gradient error %g", worst_network));
  if (v.pass) {
    v.detail = absl::StrFormat("100 configs, scalar %g, network %g",
                               worst_scalar, worst_network);
  }
  return v;
}

// 7. Distilled confidence beats max-softmax on the default task.
Verdict Distillation() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  auto result = RunUdistExperiment(DefaultUdistExperiment());
  const double elapsed = Seconds(start);
  if (!result.ok()) {
    v.Require(false, result.status().ToString());
    return v;
  }
  const double margin = result->udist_auccc - result->baseline_auccc;
  v.Require(margin >= 0.02, absl::StrFormat("margin %.4f", margin));
  v.Require(elapsed < 60.0, absl::StrFormat("took %.1f s", elapsed));
  v.detail = absl::StrFormat(
      "UDist %.4f vs max-softmax %.4f (margin %+.4f), accuracy %.3f, %.2f s",
      result->udist_auccc, result->baseline_auccc, margin,
      result->test_accuracy, elapsed);
  return v;
}

// 8. Unified OOD AUCCC and I/O AUROC on an id+ood mixture.
Verdict OodModes() {
  Verdict v;
  SynthOodConfig config;
  config.seed = 808;
  auto records = GenOodMixture(config);
  if (!records.ok()) {
    v.Require(false, records.status().ToString());
    return v;
  }
  auto unified_outcomes =
      DeriveOutcomes(*records, ConfidenceSource::kExplicitField);
  auto io_outcomes = DeriveIoOutcomes(*records);
  auto unified = unified_outcomes.ok() ? Evaluate(*unified_outcomes)
                                       : unified_outcomes.status();
  auto io = io_outcomes.ok() ? Evaluate(*io_outcomes) : io_outcomes.status();
  v.Require(unified.ok(), "unified AUCCC failed");
  v.Require(io.ok(), "I/O AUROC failed");
  if (!v.pass) return v;

  // Brute force straight from the tags.
  std::vector<Outcome> by_tag;
  for (const PredictionRecord& r : *records) {
    by_tag.push_back(
        {r.dist_tag == DistTag::kInDistribution, *r.confidence});
  }
  const double oracle = BruteForceAuccc(by_tag);
  v.Require(std::abs(io->auccc - oracle) <= 1e-12,
            absl::StrFormat("I/O AUROC %.15f vs brute force %.15f", io->auccc,
                            oracle));
  v.Require(std::abs(io->auccc - unified->auccc) > 1e-3,
            "unified AUCCC and I/O AUROC coincide");
  v.detail = absl::StrFormat("unified %.4f, I/O AUROC %.4f (brute force %.4f)",
                             unified->auccc, io->auccc, oracle);
  return v;
}

// 9. CLI pipelines rerun with identical seeds give identical files.
std::string Quote(const std::string& s) { return "'" + s + "'"; }

bool RunPipeline(const std::string& cli, const fs::path& dir,
                 std::string* failure) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string d = dir.string();
  auto p = [&](const std::string& name) { return Quote(d + "/" + name); };
  const std::vector<std::string> commands = {
      "--seed 5 synth outcomes --correct-dist beta:4,2 --incorrect-dist "
      "uniform:0,0.9 --out " + p("outcomes.jsonl"),
      "--seed 5 --format csv synth outcomes --out " + p("outcomes.csv"),
      "--seed 6 synth ood --out " + p("ood.jsonl"),
      "eval " + p("outcomes.jsonl") + " --curve-out " + p("curve.csv") +
          " > " + p("eval.json"),
      "--format csv eval " + p("outcomes.csv") + " > " + p("eval.csv"),
      "eval --mode ood-unified " + p("ood.jsonl") + " > " + p("ood.json"),
      "eval --mode io-auroc " + p("ood.jsonl") + " > " + p("io.json"),
      "curve " + p("ood.jsonl") + " > " + p("curve.json"),
      "synth udist --n-train 600 --n-test 400 --out-dir " + p("task"),
      "ensemble --temperature 3 " + p("task/test/members/member_00.jsonl") +
          " " + p("task/test/members/member_01.jsonl") + " " +
          p("task/test/members/member_02.jsonl") + " " +
          p("task/test/members/member_03.jsonl") + " --out " +
          p("ensemble.jsonl"),
      "--seed 11 distill --train " + p("task/train/features.jsonl") +
          " --ensemble-dirs " + p("task/train/members") + " --epochs 20 " +
          "--out " + p("model.json") + " > " + p("train.json"),
      "distill --predict --model " + p("model.json") + " --features " +
          p("task/test/features.jsonl") + " --ensemble-dirs " +
          p("task/test/members") + " --out " + p("pred.jsonl"),
      "eval " + p("pred.jsonl") + " > " + p("pred_eval.json"),
  };
  for (const std::string& args : commands) {
    const std::string command = Quote(cli) + " " + args;
    if (std::system(command.c_str()) != 0) {
      *failure = "command failed: " + command;
      return false;
    }
  }
  return true;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Verdict Determinism(const std::string& cli, const fs::path& work) {
  Verdict v;
  std::string failure;
  if (!RunPipeline(cli, work / "run1", &failure) ||
      !RunPipeline(cli, work / "run2", &failure)) {
    v.Require(false, failure);
    return v;
  }
  int files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(work / "run1")) {
    if (!entry.is_regular_file()) continue;
    const fs::path relative = fs::relative(entry.path(), work / "run1");
    const fs::path twin = work / "run2" / relative;
    v.Require(fs::exists(twin) && fs::file_size(entry.path()) > 0 &&
                  ReadFile(entry.path()) == ReadFile(twin),
              "differs: " + relative.string());
    ++files;
  }
  if (v.pass) {
    v.detail = absl::StrFormat("%d output files bit-identical across reruns",
                               files);
  }
  return v;
}

}  // namespace
}  // namespace uqeval

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s <uqeval-binary> <scratch-dir>\n", argv[0]);
    return 2;
  }
  using uqeval::Verdict;
  const std::string cli = argv[1];
  const std::filesystem::path work = argv[2];

  const std::vector<std::pair<const char*, std::function<Verdict()>>>
      criteria = {
          {"oracle equivalence", uqeval::OracleEquivalence},
          {"invariance suite", uqeval::Invariances},
          {"boundary behavior", uqeval::Boundaries},
          {"shift critique of cross entropy and Brier", uqeval::ShiftCritique},
          {"temperature scaling", uqeval::TemperatureScaling},
          {"gradient checks", uqeval::GradientChecks},
          {"distillation beats max-softmax", uqeval::Distillation},
          {"OOD modes", uqeval::OodModes},
          {"CLI determinism",
           [&] { return uqeval::Determinism(cli, work); }},
      };
  // Every line also goes to <scratch-dir>/acceptance.log.
  std::filesystem::create_directories(work);
  std::ofstream log(work / "acceptance.log", std::ios::trunc);
  auto emit = [&log](const std::string& line) {
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    log << line << "\n" << std::flush;
  };
  emit("acceptance criteria:");
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const Verdict verdict = criteria[i].second();
    failures += !verdict.pass;
    emit(absl::StrFormat("%s criterion %d (%s): %s",
                         verdict.pass ? "PASS" : "FAIL", i + 1,
                         criteria[i].first, verdict.detail));
  }
  emit(absl::StrFormat("%d of %d criteria passed",
                       criteria.size() - failures, criteria.size()));
  return failures == 0 ? 0 : 1;
}
