// Copyright 2026 The dsprog Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "dsprog/baselines.h"

#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dsprog/experiments.h"
#include "dsprog/solver.h"

namespace dsprog {
namespace {

std::vector<int> PrefixPerm(Subset a, int n, std::mt19937_64& rng) {
  std::vector<int> perm = a.Elements();
  std::vector<int> rest;
  for (int i = 0; i < n; ++i) {
    if (!a.Contains(i)) rest.push_back(i);
  }
  std::shuffle(rest.begin(), rest.end(), rng);
  perm.insert(perm.end(), rest.begin(), rest.end());
  return perm;
}

TEST(ModularLowerBoundTest, ModularIsExact) {
  const SetFunction g = Modular({1.0, -2.0, 0.5}, 0.25);
  const ModularBound h = ModularLowerBound(g, Subset(0), {2, 0, 1});
  for (Mask m = 0; m < 8; ++m) EXPECT_DOUBLE_EQ(h(Subset(m)), g(Subset(m)));
}

TEST(ModularLowerBoundTest, WorkedInstance) {
  const ModularBound h = ModularLowerBound(Table({0, 2}), Subset(0), {0});
  EXPECT_EQ(h(Subset(1)), 2.0);
  EXPECT_EQ(h(Subset(0)), 0.0);
}

TEST(ModularLowerBoundTest, TightAndBelowOnRandomTriples) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 7;
    const Instance inst = GenRandomDs(n, AllFamilies()[trial % 4], 40 + trial);
    const Subset a(rng() & Subset::Full(n).mask());
    const ModularBound h = ModularLowerBound(inst.g, a, PrefixPerm(a, n, rng));
    const double scale = std::max(1.0, std::abs(inst.g(a)));
    EXPECT_NEAR(h(a), inst.g(a), 1e-12 * scale);
    for (Mask m = 0; m < (Mask{1} << n); ++m) {
      EXPECT_LE(h(Subset(m)), inst.g(Subset(m)) + 1e-9 * scale);
    }
  }
}

TEST(ModularLowerBoundTest, RejectsBadPermutation) {
  const SetFunction g = Cardinality(3);
  EXPECT_THROW(ModularLowerBound(g, Subset(0), {0, 1}), InvalidArgument);
  EXPECT_THROW(ModularLowerBound(g, Subset(0), {0, 0, 1}), InvalidArgument);
  EXPECT_THROW(ModularLowerBound(g, Subset(4), {0, 1, 2}), InvalidArgument);
}

TEST(SspTest, WorkedInstance) {
  const SspResult r = Ssp(Table({0, 1}), Table({0, 2}), Subset(0), 0);
  EXPECT_EQ(r.set, Subset(1));
  EXPECT_EQ(r.value, -1.0);
  EXPECT_EQ(r.iterations, 1);
}

TEST(SspTest, EqualFunctionsStayAtZero) {
  const SetFunction f = Cut(3, {{0, 1, 1.0}, {1, 2, 2.0}});
  for (Mask init = 0; init < 8; ++init) {
    const SspResult r = Ssp(f, f, Subset(init), 5);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_EQ(r.iterations, 0);
  }
}

TEST(SspTest, StrictDescentAndDominance) {
  int strict = 0;
  int total = 0;
  for (int n = 3; n <= 8; ++n) {
    for (DsFamily family : AllFamilies()) {
      for (int seed = 0; seed < 4; ++seed) {
        const Instance inst = GenRandomDs(n, family, 1000 * n + seed);
        const SspResult r = Ssp(inst.f, inst.g, Subset(0), seed);
        const SetMinimum exact = BruteForceDsMin(inst.f, inst.g);
        for (size_t k = 1; k < r.history.size(); ++k) EXPECT_LT(r.history[k], r.history[k - 1] - 1e-12);
        EXPECT_EQ(r.value, r.history.back());
        EXPECT_LE(r.value, inst.f(Subset(0)) - inst.g(Subset(0)));
        EXPECT_GE(r.value, exact.value);
        strict += r.value > exact.value + 1e-9 ? 1 : 0;
        ++total;
      }
    }
  }
  RecordProperty("ssp_gap_rate", std::to_string(strict) + "/" + std::to_string(total));
}

TEST(SspTest, SeedIsReproducible) {
  const Instance inst = GenRandomDs(7, DsFamily::kCoverageMinusCoverage, 3);
  const SspResult a = Ssp(inst.f, inst.g, Subset(5), 99);
  const SspResult b = Ssp(inst.f, inst.g, Subset(5), 99);
  EXPECT_EQ(a.set, b.set);
  EXPECT_EQ(a.history, b.history);
}

TEST(SspTest, RejectsBadInput) {
  EXPECT_THROW(Ssp(Cardinality(2), Cardinality(3), Subset(0), 0), InvalidArgument);
  EXPECT_THROW(Ssp(Cardinality(2), Cardinality(2), Subset(4), 0), InvalidArgument);
}

TEST(GreedyTest, ModularIsExact) {
  const SetFunction f = Modular({1.0, -2.0, 0.5, -0.25});
  const SetFunction zero = Modular({0, 0, 0, 0});
  const GreedyResult r = Greedy(f, zero);
  EXPECT_EQ(r.set, Subset::FromElements({1, 3}));
  EXPECT_EQ(r.value, -2.25);
}

TEST(GreedyTest, WorkedInstance) {
  const GreedyResult r = Greedy(Table({0, 1}), Table({0, 2}));
  EXPECT_EQ(r.set, Subset(1));
  EXPECT_EQ(r.value, -1.0);
}

TEST(GreedyTest, TiesGoToSmallestIndex) {
  const GreedyResult r = Greedy(Modular({0, 0, 0}), Modular({1, 1, 0}));
  EXPECT_EQ(r.set, Subset(3));
}

TEST(GreedyTest, NeverBeatsExact) {
  for (int n = 3; n <= 8; ++n) {
    for (DsFamily family : AllFamilies()) {
      const Instance inst = GenRandomDs(n, family, 1000 * n + 1);
      EXPECT_GE(Greedy(inst.f, inst.g).value, BruteForceDsMin(inst.f, inst.g).value);
    }
  }
}

}  // namespace
}  // namespace dsprog
