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


#include "dsprog/bilp.h"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "dsprog/experiments.h"
#include "dsprog/solver.h"

namespace dsprog {
namespace {

const SetFunction kF = Table({0, 1});
const SetFunction kG = Table({0, 2});

TEST(ComputeMuTest, WorkedInstance) {
  EXPECT_EQ(ComputeMu(InitialSimplex(1), -1.0, kF, kG), -1.0);
  EXPECT_EQ(ComputeMu(InitialSimplex(1), 5.0, kF, kG), -1.0);
}

TEST(ComputeMuTest, NoBinaryVertexGivesAlpha) {
  DenseMatrix v(2, 3);
  v << 0.2, 0.6, 0.2, 0.2, 0.2, 0.6;
  const SetFunction f = Cardinality(2);
  EXPECT_EQ(ComputeMu(Simplex(v), 3.5, f, Modular({0, 0})), 3.5);
  // alpha equal to the best binary vertex value.
  EXPECT_EQ(ComputeMu(InitialSimplex(2), 0.0, f, Modular({0, 0})), 0.0);
}

TEST(VertexCacheTest, MatchesDirectLevels) {
  const Instance inst = GenRandomDs(3, DsFamily::kTableRandomSubmodularPair, 1);
  const Simplex s = InitialSimplex(3, Subset(0), 4);
  const VertexCache c = MakeVertexCache(s, inst.f, inst.g);
  for (double alpha : {-10.0, 0.0, 10.0}) {
    const double mu = ComputeMu(s, alpha, inst.f, inst.g);
    EXPECT_EQ(c.Mu(alpha), mu);
    EXPECT_EQ(c.Levels(alpha).t, MakeLevels(s, inst.g, mu).t);
  }
  const auto [a, b] = Bisect(s, {0, 1});
  const VertexCache ca = ChildVertexCache(c, a, 0, inst.f, inst.g);
  const VertexCache fresh = MakeVertexCache(a, inst.f, inst.g);
  EXPECT_EQ(ca.g_hat, fresh.g_hat);
  EXPECT_EQ(ca.binary_value, fresh.binary_value);
}

TEST(SolveBoundTest, WorkedFirstIteration) {
  const Simplex s = InitialSimplex(1);
  const Polyhedron p = InitialPolyhedron(s, 0.0);
  const VertexLevels levels = MakeLevels(s, kG, -1.0);
  EXPECT_EQ(levels.t, (Vector(2) << -1.0, 1.0).finished());
  const BoundResult r = SolveBound(s, p, levels, kF);
  ASSERT_EQ(r.status, BoundStatus::kSolved);
  EXPECT_EQ(r.c_star, 1.0);
  EXPECT_EQ(r.witness.set, Subset(1));
  EXPECT_EQ(r.witness.t, 0.0);
  EXPECT_EQ(r.beta, -2.0);
  ASSERT_EQ(r.feasible_points.size(), 2U);
  EXPECT_EQ(r.feasible_points[0].set, Subset(0));
  EXPECT_EQ(r.feasible_points[1].f_value, 1.0);
}

TEST(SolveBoundTest, WorkedSecondIterationFiresDr2) {
  const Simplex s0 = InitialSimplex(1);
  const Polyhedron p = AddCut(InitialPolyhedron(s0, 0.0), Vector::Ones(1), -1.0, 0.0);
  const Simplex child = Bisect(s0).first;  // [0.5, 1]
  const VertexLevels levels = MakeLevels(child, kG, -1.0);
  EXPECT_EQ(levels.t, (Vector(2) << 0.0, 1.0).finished());
  const BoundResult r = SolveBound(child, p, levels, kF);
  ASSERT_EQ(r.status, BoundStatus::kSolved);
  ASSERT_EQ(r.feasible_points.size(), 1U);
  EXPECT_EQ(r.witness.set, Subset(1));
  EXPECT_EQ(r.witness.t, 1.0);
  EXPECT_EQ(r.c_star, 0.0);
  EXPECT_EQ(r.beta, -1.0);
}

TEST(SolveBoundTest, NoBinaryPointIsInfeasible) {
  DenseMatrix v(2, 3);
  v << 0.2, 0.6, 0.2, 0.2, 0.2, 0.6;
  const Simplex s(v);
  const Polyhedron p = InitialPolyhedron(InitialSimplex(2), 0.0);
  const VertexLevels levels = MakeLevels(s, Cardinality(2), 0.0);
  const BoundResult r = SolveBound(s, p, levels, Cardinality(2));
  EXPECT_EQ(r.status, BoundStatus::kInfeasible);
  EXPECT_EQ(r.beta, std::numeric_limits<double>::infinity());
  BinaryEnvelope env(2);
  env.Sync(p);
  EXPECT_EQ(SolveBound(s, env, levels, Cardinality(2)).status, BoundStatus::kInfeasible);
}

TEST(SolveBoundTest, UnboundedTThrows) {
  const Simplex s = InitialSimplex(1);
  const Polyhedron p({{Vector::Ones(1), 0.0, 1.0}});
  EXPECT_THROW(SolveBound(s, p, MakeLevels(s, kG, 0.0), kF), InvalidArgument);
  BinaryEnvelope env(1);
  env.Sync(p);
  EXPECT_THROW(SolveBound(s, env, MakeLevels(s, kG, 0.0), kF), InvalidArgument);
}

// Random node simplices with random valid cuts: the envelope path must agree
// with the row-scanning reference exactly.
TEST(SolveBoundTest, EnvelopeMatchesReference) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 1; n <= 6; ++n) {
    const Instance inst = GenRandomDs(n, DsFamily::kCoverageMinusCoverage, 100 + n);
    const Simplex s0 = InitialSimplex(n, Subset(0), RootExtent(n));
    Polyhedron p = InitialPolyhedron(s0, BruteForceMin(inst.f).value);
    BinaryEnvelope env(n);
    for (int trial = 0; trial < 60; ++trial) {
      Simplex s = s0;
      const int depth = static_cast<int>(unit(rng) * 4 * n);
      for (int d = 0; d < depth; ++d) {
        auto [a, b] = Bisect(s);
        s = unit(rng) < 0.5 ? a : b;
      }
      if (trial % 5 == 0) {
        Vector x(n);
        for (int i = 0; i < n; ++i) x[i] = unit(rng);
        const double fx = Lovasz(inst.f, x);
        const OuterCut cut = CuttingPlane(inst.f, x, fx - 1.0);
        p.Append(cut.Row());
      }
      env.Sync(p);
      const VertexLevels levels = MakeLevels(s, inst.g, ComputeMu(s, 0.0, inst.f, inst.g));
      const BoundResult ref = SolveBound(s, p, levels, inst.f);
      const BoundResult fast = SolveBound(s, env, levels, inst.f);
      ASSERT_EQ(fast.status, ref.status);
      EXPECT_EQ(fast.beta, ref.beta);
      ASSERT_EQ(fast.feasible_points.size(), ref.feasible_points.size());
      for (size_t k = 0; k < ref.feasible_points.size(); ++k) {
        EXPECT_EQ(fast.feasible_points[k].set, ref.feasible_points[k].set);
        EXPECT_EQ(fast.feasible_points[k].f_value, ref.feasible_points[k].f_value);
      }
      if (ref.status == BoundStatus::kSolved) {
        EXPECT_EQ(fast.c_star, ref.c_star);
        EXPECT_EQ(fast.witness.set, ref.witness.set);
        EXPECT_EQ(fast.witness.t, ref.witness.t);
      }
    }
  }
}

TEST(SolveBoundTest, WitnessConsistency) {
  const Instance inst = GenRandomDs(4, DsFamily::kCutMinusModular, 9);
  const Simplex s0 = InitialSimplex(4, Subset(0), 4);
  const Polyhedron p = InitialPolyhedron(s0, BruteForceMin(inst.f).value);
  Simplex s = s0;
  for (int d = 0; d < 6; ++d) s = Bisect(s).second;
  const BoundResult r = SolveBound(s, p, MakeLevels(s, inst.g, 0.0), inst.f);
  ASSERT_EQ(r.status, BoundStatus::kSolved);
  EXPECT_NEAR(r.witness.lambda.sum(), 1.0, 1e-12);
  EXPECT_GE(r.witness.lambda.minCoeff(), -1e-12);
  EXPECT_LE((s.Point(r.witness.lambda) - r.witness.x).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_TRUE(p.Contains(r.witness.x, r.witness.t));
}

TEST(EquivalenceCheckTest, WorkedInstance) {
  const Simplex s = InitialSimplex(1);
  const Polyhedron p = InitialPolyhedron(s, 0.0);
  const VertexLevels levels = MakeLevels(s, kG, -1.0);
  const HyperplaneLift h = HyperplaneThrough(s, levels.t);
  EXPECT_NEAR(h.p[0], 2.0, 1e-12);
  EXPECT_NEAR(h.gamma, 1.0, 1e-12);
  EXPECT_TRUE(EquivalenceCheck(s, p, levels, h, SolveBound(s, p, levels, kF)));
}

TEST(EquivalenceCheckTest, HorizontalLevels) {
  const Simplex s = InitialSimplex(2);
  const Polyhedron p = InitialPolyhedron(s, -1.0);
  const VertexLevels levels{Vector::Constant(3, 2.0), 2.0};
  const HyperplaneLift h = HyperplaneThrough(s, levels.t);
  EXPECT_LE(h.p.cwiseAbs().maxCoeff(), 1e-12);
  const BoundResult r = SolveBound(s, p, levels, Cardinality(2));
  EXPECT_EQ(r.c_star, 3.0);  // 2 - t_lo with t_lo = -1
  EXPECT_TRUE(EquivalenceCheck(s, p, levels, h, r));
}

}  // namespace
}  // namespace dsprog
