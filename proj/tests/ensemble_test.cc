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

#include "uqeval/ensemble.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "test_oracles.h"
#include "uqeval/random.h"
#include "uqeval/records.h"

namespace uqeval {
namespace {

using ::uqeval::testing::ClosedFormTemperature;

std::vector<double> RandomDistribution(Rng& rng, int k) {
  std::vector<double> p(k);
  double total = 0.0;
  for (double& v : p) total += (v = rng.Gamma(0.5 + rng.Uniform()));
  for (double& v : p) v /= total;
  return p;
}

double Sum(const std::vector<double>& v) {
  double total = 0.0;
  for (double x : v) total += x;
  return total;
}

TEST(AverageProbs, Examples) {
  EXPECT_EQ(*AverageProbs({{1, 0}, {0, 1}}), (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(*AverageProbs({{0.7, 0.3}}), (std::vector<double>{0.7, 0.3}));
  const std::vector<double> mean = *AverageProbs({{0.8, 0.2}, {0.6, 0.4}});
  EXPECT_NEAR(mean[0], 0.7, 1e-15);
  EXPECT_NEAR(mean[1], 0.3, 1e-15);
}

TEST(AverageProbs, Errors) {
  EXPECT_FALSE(AverageProbs({}).ok());
  EXPECT_FALSE(AverageProbs({{0.5, 0.5}, {0.2, 0.3, 0.5}}).ok());
  EXPECT_FALSE(AverageProbs({{0.5, 0.6}}).ok());
}

TEST(AverageProbs, PermutationInvariantAndIdempotent) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(rng.UniformInt(8));
    std::vector<std::vector<double>> members;
    for (int m = 0; m < 1 + static_cast<int>(rng.UniformInt(6)); ++m) {
      members.push_back(RandomDistribution(rng, k));
    }
    const std::vector<double> mean = *AverageProbs(members);
    EXPECT_NEAR(Sum(mean), 1.0, 1e-9);
    rng.Shuffle(members);
    const std::vector<double> shuffled = *AverageProbs(members);
    for (int i = 0; i < k; ++i) EXPECT_NEAR(shuffled[i], mean[i], 1e-15);

    const std::vector<std::vector<double>> copies(4, members[0]);
    const std::vector<double> same = *AverageProbs(copies);
    for (int i = 0; i < k; ++i) EXPECT_NEAR(same[i], members[0][i], 1e-15);
  }
}

TEST(TemperatureScale, Examples) {
  const std::vector<double> half = *TemperatureScale({0.8, 0.2}, 2.0);
  EXPECT_NEAR(half[0], 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(half[1], 1.0 / 3.0, 1e-9);
  const std::vector<double> flat = *TemperatureScale({0.8, 0.2}, 1e6);
  EXPECT_NEAR(flat[0], 0.5, 1e-4);
  EXPECT_NEAR(flat[1], 0.5, 1e-4);
  EXPECT_FALSE(TemperatureScale({0.8, 0.2}, 0.0).ok());
  EXPECT_FALSE(TemperatureScale({0.8, 0.2}, -1.0).ok());
}

TEST(TemperatureScale, ZeroEntriesStayValid) {
  const std::vector<double> out = *TemperatureScale({1.0, 0.0, 0.0}, 3.0);
  EXPECT_NEAR(Sum(out), 1.0, 1e-12);
  EXPECT_GT(out[1], 0.0);
  EXPECT_EQ(ArgMax(out), 0);
}

TEST(TemperatureScale, Properties) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 2 + static_cast<int>(rng.UniformInt(9));
    const std::vector<double> p = RandomDistribution(rng, k);

    const std::vector<double> identity = *TemperatureScale(p, 1.0);
    for (int i = 0; i < k; ++i) EXPECT_NEAR(identity[i], p[i], 1e-12);

    for (double t : {0.5, 2.0, 3.0, 8.0, 10.0}) {
      const std::vector<double> out = *TemperatureScale(p, t);
      const std::vector<double> oracle = ClosedFormTemperature(p, t);
      for (int i = 0; i < k; ++i) EXPECT_NEAR(out[i], oracle[i], 1e-9);
      EXPECT_NEAR(Sum(out), 1.0, 1e-9);
      EXPECT_EQ(ArgMax(out), ArgMax(p));
      const double max_in = *std::max_element(p.begin(), p.end());
      const double max_out = *std::max_element(out.begin(), out.end());
      if (t > 1.0) {
        EXPECT_LE(max_out, max_in + 1e-15);
      } else {
        EXPECT_GE(max_out, max_in - 1e-15);
      }
    }
  }
}

TEST(ActualClassConfidence, Examples) {
  EXPECT_EQ(*ActualClassConfidence({0.6, 0.4}, 0), 0.6);
  EXPECT_EQ(*ActualClassConfidence({0.6, 0.4}, 1), 0.4);
  EXPECT_NEAR(*ActualClassConfidence(*TemperatureScale({0.8, 0.2}, 2.0), 0),
              2.0 / 3.0, 1e-9);
  EXPECT_FALSE(ActualClassConfidence({0.6, 0.4}, 2).ok());
  EXPECT_FALSE(ActualClassConfidence({0.6, 0.4}, -1).ok());
}

TEST(CombineEnsemble, Fields) {
  auto output = CombineEnsemble({{0.8, 0.2}, {0.6, 0.4}}, 2.0);
  ASSERT_TRUE(output.ok()) << output.status();
  EXPECT_EQ(output->members.size(), 2);
  EXPECT_NEAR(output->mean[0], 0.7, 1e-15);
  const std::vector<double> oracle = ClosedFormTemperature({0.7, 0.3}, 2.0);
  EXPECT_NEAR(output->softened[0], oracle[0], 1e-9);
  EXPECT_EQ(output->temperature, 2.0);
  EXPECT_FALSE(CombineEnsemble({{1.0}}, 2.0).ok());
  EXPECT_FALSE(CombineEnsemble({}, 2.0).ok());
}

}  // namespace
}  // namespace uqeval
