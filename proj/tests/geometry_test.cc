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


#include "dsprog/geometry.h"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

namespace dsprog {
namespace {

DenseMatrix Verts(std::initializer_list<std::initializer_list<double>> cols) {
  const int n = static_cast<int>(cols.begin()->size());
  DenseMatrix v(n, static_cast<int>(cols.size()));
  int c = 0;
  for (const auto& col : cols) {
    int r = 0;
    for (double x : col) v(r++, c) = x;
    ++c;
  }
  return v;
}

bool SameVertexSet(const Simplex& s, const DenseMatrix& want) {
  if (s.vertices().cols() != want.cols()) return false;
  for (int j = 0; j < want.cols(); ++j) {
    bool found = false;
    for (int i = 0; i < s.num_vertices(); ++i) {
      if ((s.vertex(i) - want.col(j)).cwiseAbs().maxCoeff() <= 1e-12) found = true;
    }
    if (!found) return false;
  }
  return true;
}

TEST(InitialSimplexTest, KnownValues) {
  EXPECT_TRUE(SameVertexSet(InitialSimplex(2), Verts({{0, 0}, {2, 0}, {0, 2}})));
  EXPECT_TRUE(SameVertexSet(InitialSimplex(1), Verts({{0}, {1}})));
}

TEST(InitialSimplexTest, AnchorAndExtent) {
  const Simplex s = InitialSimplex(2, Subset::FromElements({0}));
  EXPECT_TRUE(SameVertexSet(s, Verts({{1, 0}, {-1, 0}, {1, 2}})));
  EXPECT_TRUE(SameVertexSet(InitialSimplex(3, Subset(0), 4), Verts({{0, 0, 0}, {4, 0, 0}, {0, 4, 0}, {0, 0, 4}})));
  EXPECT_THROW(InitialSimplex(3, Subset(0), 2), GeometryError);
  EXPECT_THROW(InitialSimplex(2, Subset(4)), GeometryError);
}

TEST(InitialSimplexTest, ContainsCubeForEveryAnchor) {
  for (int n = 1; n <= 6; ++n) {
    for (Mask v = 0; v < (Mask{1} << n); ++v) {
      for (int extent : {n, static_cast<int>(std::bit_ceil(static_cast<unsigned>(n)))}) {
        const Simplex s = InitialSimplex(n, Subset(v), extent);
        for (Mask a = 0; a < (Mask{1} << n); ++a) {
          EXPECT_GE(s.Barycentric(Subset(a).Indicator(n)).minCoeff(), -1e-12) << n << " " << v << " " << a;
        }
      }
    }
  }
}

TEST(BarycentricTest, KnownValues) {
  const Simplex s(Verts({{0, 0}, {2, 0}, {0, 2}}));
  const Vector l = s.Barycentric((Vector(2) << 1, 1).finished());
  EXPECT_NEAR(l[0], 0.0, 1e-15);
  EXPECT_NEAR(l[1], 0.5, 1e-15);
  EXPECT_NEAR(l[2], 0.5, 1e-15);
  for (int j = 0; j < 3; ++j) {
    EXPECT_LE((s.Barycentric(s.vertex(j)) - Vector::Unit(3, j)).cwiseAbs().maxCoeff(), 1e-15);
  }
  const Vector centroid = s.vertices().rowwise().mean();
  EXPECT_LE((s.Barycentric(centroid) - Vector::Constant(3, 1.0 / 3)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BarycentricTest, RoundTripRandomPoints) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 2.0);
  const Simplex s = InitialSimplex(4, Subset(5), 4);
  for (int trial = 0; trial < 1000; ++trial) {
    Vector x(4);
    for (int i = 0; i < 4; ++i) x[i] = unit(rng);
    const Vector l = s.Barycentric(x);
    EXPECT_NEAR(l.sum(), 1.0, 1e-10);
    EXPECT_LE((s.Point(l) - x).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SimplexTest, DegenerateRejected) {
  EXPECT_THROW(Simplex(Verts({{0, 0}, {1, 1}, {2, 2}})), GeometryError);
  EXPECT_THROW(Simplex(DenseMatrix::Zero(2, 2)), GeometryError);
}

TEST(BisectTest, KnownValues) {
  const Simplex s(Verts({{0, 0}, {2, 0}, {0, 2}}));
  EXPECT_EQ(LongestEdge(s), std::make_pair(1, 2));
  const auto [a, b] = Bisect(s);
  EXPECT_TRUE(SameVertexSet(a, Verts({{0, 0}, {1, 1}, {0, 2}})));
  EXPECT_TRUE(SameVertexSet(b, Verts({{0, 0}, {2, 0}, {1, 1}})));
  const auto [first, second] = Bisect(InitialSimplex(1));
  EXPECT_TRUE(SameVertexSet(first, Verts({{0.5}, {1}})));
  EXPECT_TRUE(SameVertexSet(second, Verts({{0}, {0.5}})));
}

TEST(BisectTest, LongestEdgeTieIsLexicographic) {
  const Simplex s(Verts({{0, 0}, {1, 0}, {0, 1}}));
  EXPECT_EQ(LongestEdge(s), std::make_pair(1, 2));
  const Simplex tetra(Verts({{0, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}}));  // all edges tie
  EXPECT_EQ(LongestEdge(tetra), std::make_pair(0, 1));
}

TEST(BisectTest, BadEdgeThrows) {
  const Simplex s = InitialSimplex(2);
  EXPECT_THROW(Bisect(s, {1, 1}), GeometryError);
  EXPECT_THROW(Bisect(s, {0, 3}), GeometryError);
}

TEST(BisectTest, RankOneInverseMatchesFreshFactorization) {
  std::mt19937_64 rng(4);
  Simplex s = InitialSimplex(5, Subset(0), 8);
  for (int depth = 0; depth < 40; ++depth) {
    auto [a, b] = Bisect(s);
    const Simplex fresh(a.vertices());
    const double scale = fresh.barycentric_inverse().cwiseAbs().maxCoeff();
    EXPECT_LE((a.barycentric_inverse() - fresh.barycentric_inverse()).cwiseAbs().maxCoeff(), 1e-12 * scale);
    EXPECT_NEAR(a.Measure(), fresh.Measure(), 1e-12 * fresh.Measure());
    s = (rng() & 1U) ? a : b;
  }
}

void ExpectVolumeAdditive(const Simplex& s, int depth) {
  if (depth == 0) return;
  const auto [a, b] = Bisect(s);
  EXPECT_NEAR(a.Measure() + b.Measure(), s.Measure(), 1e-7 * s.Measure());
  ExpectVolumeAdditive(a, depth - 1);
  ExpectVolumeAdditive(b, depth - 1);
}

double LeafVolume(const Simplex& s, int depth) {
  if (depth == 0) return s.Measure();
  const auto [a, b] = Bisect(s);
  return LeafVolume(a, depth - 1) + LeafVolume(b, depth - 1);
}

TEST(BisectTest, VolumeAdditivityToDepth12) {
  for (int n = 1; n <= 4; ++n) {
    const Simplex root = InitialSimplex(n);
    ExpectVolumeAdditive(root, 12);
    EXPECT_NEAR(LeafVolume(root, 12), root.Measure(), 1e-7 * root.Measure()) << n;
  }
}

std::vector<Simplex> Leaves(const Simplex& s, int depth) {
  if (depth == 0) return {s};
  const auto [a, b] = Bisect(s);
  std::vector<Simplex> out = Leaves(a, depth - 1);
  for (Simplex& leaf : Leaves(b, depth - 1)) out.push_back(std::move(leaf));
  return out;
}

TEST(BisectTest, InteriorPointsInExactlyOneLeaf) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 2; n <= 3; ++n) {
    const Simplex root = InitialSimplex(n);
    const std::vector<Simplex> leaves = Leaves(root, 8);
    for (int trial = 0; trial < 300; ++trial) {
      // Uniform point in the root simplex (Dirichlet weights).
      Vector l(n + 1);
      double total = 0.0;
      for (int i = 0; i <= n; ++i) total += (l[i] = -std::log(unit(rng)));
      const Vector x = root.Point(l / total);
      int hits = 0;
      for (const Simplex& leaf : leaves) hits += leaf.Barycentric(x).minCoeff() > 1e-9 ? 1 : 0;
      int touched = 0;
      for (const Simplex& leaf : leaves) touched += leaf.Contains(x, 1e-9) ? 1 : 0;
      if (touched == 1) EXPECT_EQ(hits, 1);
      EXPECT_GE(touched, 1);
    }
  }
}

TEST(BisectTest, MaxEdgeMonotoneAndVanishing) {
  Simplex s = InitialSimplex(2);
  double prev = s.MaxEdgeLength();
  for (int depth = 0; depth < 50; ++depth) {
    s = Bisect(s).first;
    const double cur = s.MaxEdgeLength();
    EXPECT_LE(cur, prev + 1e-15);
    prev = cur;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(HyperplaneTest, KnownValues) {
  const Simplex s(Verts({{0, 0}, {2, 0}, {0, 2}}));
  const HyperplaneLift h = HyperplaneThrough(s, (Vector(3) << 0, 2, 2).finished());
  EXPECT_NEAR(h.p[0], 1.0, 1e-12);
  EXPECT_NEAR(h.p[1], 1.0, 1e-12);
  EXPECT_NEAR(h.gamma, 0.0, 1e-12);
  const HyperplaneLift flat = HyperplaneThrough(s, Vector::Constant(3, 3.0));
  EXPECT_LE(flat.p.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(flat.gamma, -3.0, 1e-12);
  const HyperplaneLift line = HyperplaneThrough(InitialSimplex(1), (Vector(2) << -1, 1).finished());
  EXPECT_NEAR(line.p[0], 2.0, 1e-12);
  EXPECT_NEAR(line.gamma, 1.0, 1e-12);
}

TEST(HyperplaneTest, PassesThroughLiftedPoints) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Simplex s = InitialSimplex(4, Subset(6), 4);
  Vector t(5);
  for (int i = 0; i < 5; ++i) t[i] = normal(rng);
  const HyperplaneLift h = HyperplaneThrough(s, t);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(h.Residual(s.vertex(i), t[i]), 0.0, 1e-9);
  EXPECT_THROW(HyperplaneThrough(s, Vector::Zero(3)), GeometryError);
}

TEST(PolyhedronTest, InitialRowsForUnitInterval) {
  const Polyhedron p = InitialPolyhedron(InitialSimplex(1), 0.0);
  ASSERT_EQ(p.size(), 3U);
  auto has = [&](double x, double t, double rhs) {
    for (const Halfspace& r : p.rows()) {
      if (std::abs(r.x_coef[0] - x) < 1e-15 && r.t_coef == t && std::abs(r.rhs - rhs) < 1e-15) return true;
    }
    return false;
  };
  EXPECT_TRUE(has(-1, 0, 0));
  EXPECT_TRUE(has(1, 0, 1));
  EXPECT_TRUE(has(0, -1, 0));
}

TEST(PolyhedronTest, ContainsLiftedCubeAndBoundsT) {
  const SetFunction f = Cut(3, {{0, 1, 1.0}, {1, 2, 2.0}});
  const Simplex s0 = InitialSimplex(3, Subset(0), 4);
  const Polyhedron p = InitialPolyhedron(s0, BruteForceMin(f).value);
  int below = 0;
  for (const Halfspace& r : p.rows()) below += r.t_coef < 0 ? 1 : 0;
  EXPECT_EQ(below, 1);
  for (Mask m = 0; m < 8; ++m) EXPECT_TRUE(p.Contains(Subset(m).Indicator(3), f(Subset(m))));
}

TEST(PolyhedronTest, AddCutShrinksAndIsIdempotent) {
  const Polyhedron p0 = InitialPolyhedron(InitialSimplex(1), 0.0);
  const Vector s = Vector::Ones(1);
  const Polyhedron p1 = AddCut(p0, s, -1.0, 0.0);  // x - t <= 0
  const Polyhedron p2 = AddCut(p1, s, -1.0, 0.0);
  EXPECT_EQ(p1.size(), 4U);
  for (double x = 0.0; x <= 1.0; x += 0.125) {
    for (double t = -0.5; t <= 1.5; t += 0.125) {
      const Vector xv = Vector::Constant(1, x);
      if (p1.Contains(xv, t)) EXPECT_TRUE(p0.Contains(xv, t));
      EXPECT_EQ(p1.Contains(xv, t), p2.Contains(xv, t));
      EXPECT_EQ(p1.Contains(xv, t), p0.Contains(xv, t) && x - t <= 1e-9);
    }
  }
  // A redundant row leaves the set unchanged.
  const Polyhedron p3 = AddCut(p0, Vector::Zero(1), -1.0, -5.0);  // -t <= 5
  for (double t = -0.5; t <= 1.5; t += 0.25) {
    EXPECT_EQ(p3.Contains(Vector::Constant(1, 0.5), t), p0.Contains(Vector::Constant(1, 0.5), t));
  }
}

}  // namespace
}  // namespace dsprog
