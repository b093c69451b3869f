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

// Simplices, prisms and polyhedra in (x, t)-space.
//
// A Simplex stores its n+1 vertices as the columns of an n x (n+1) matrix
// together with the inverse of the barycentric system [V; 1^T], so
// barycentric coordinates cost one matrix-vector product.

#ifndef DSPROG_GEOMETRY_H_
#define DSPROG_GEOMETRY_H_

#include <cmath>
#include <utility>
#include <vector>

#include "dsprog/numerics.h"
#include "dsprog/set_function.h"

namespace dsprog {

inline constexpr double kBarycentricTol = 1e-12;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Simplex {
 public:
  // `vertices` is n x (n+1), one vertex per column.
  explicit Simplex(DenseMatrix vertices) : vertices_(std::move(vertices)) {
    const Eigen::Index n = vertices_.rows();
    if (n < 1 || vertices_.cols() != n + 1) throw GeometryError("simplex: need n+1 vertices in R^n");
    if (!vertices_.allFinite()) throw GeometryError("simplex: non-finite vertex");
    DenseMatrix system(n + 1, n + 1);
    system.topRows(n) = vertices_;
    system.row(n).setOnes();
    // Scale: product of edge lengths from vertex 0.
    double scale = 1.0;
    for (Eigen::Index i = 1; i <= n; ++i) scale *= (vertices_.col(i) - vertices_.col(0)).norm();
    Eigen::PartialPivLU<DenseMatrix> lu(system);
    det_ = lu.determinant();
    if (!(std::abs(det_) > 1e-12 * scale)) throw GeometryError("simplex: degenerate");
    inverse_ = lu.inverse();
    membership_tol_ = kBarycentricTol * std::max(1.0, numerics::InfNorm(inverse_));
  }

  int dim() const { return static_cast<int>(vertices_.rows()); }
  int num_vertices() const { return static_cast<int>(vertices_.cols()); }
  const DenseMatrix& vertices() const { return vertices_; }
  Vector vertex(int i) const { return vertices_.col(i); }

  // |det [V; 1^T]| = n! * volume.
  double Measure() const { return std::abs(det_); }

  // Unique lambda with sum(lambda) = 1 and V lambda = x.
  Vector Barycentric(const Vector& x) const {
    if (x.size() != dim()) throw GeometryError("barycentric: dimension mismatch");
    return inverse_.leftCols(dim()) * x + inverse_.col(dim());
  }

  // Barycentric membership slack: 1e-12 scaled by ||[V; 1^T]^-1||_inf, which
  // tracks the rounding error of Barycentric() on small simplices.
  double membership_tol() const { return membership_tol_; }

  bool Contains(const Vector& x) const { return Barycentric(x).minCoeff() >= -membership_tol_; }
  bool Contains(const Vector& x, double tol) const { return Barycentric(x).minCoeff() >= -tol; }

  Vector Point(const Vector& lambda) const { return vertices_ * lambda; }

  double MaxEdgeLength() const {
    double best = 0.0;
    for (int i = 0; i < num_vertices(); ++i) {
      for (int j = i + 1; j < num_vertices(); ++j) {
        best = std::max(best, (vertices_.col(i) - vertices_.col(j)).norm());
      }
    }
    return best;
  }

  // Inverse of [V; 1^T]; row j gives lambda_j as an affine function of x.
  const DenseMatrix& barycentric_inverse() const { return inverse_; }

 private:
  friend std::pair<Simplex, Simplex> Bisect(const Simplex& s, std::pair<int, int> edge);

  Simplex(DenseMatrix vertices, DenseMatrix inverse, double det)
      : vertices_(std::move(vertices)), inverse_(std::move(inverse)), det_(det) {
    membership_tol_ = kBarycentricTol * std::max(1.0, numerics::InfNorm(inverse_));
  }

  DenseMatrix vertices_;
  DenseMatrix inverse_;
  double det_ = 0.0;
  double membership_tol_ = kBarycentricTol;
};

// T(S) = {(x, t) : x in S}; t is unbounded.
struct Prism {
  Simplex base;
};

// One row of A x + a t <= b.
struct Halfspace {
  Vector x_coef;
  double t_coef = 0.0;
  double rhs = 0.0;

  // Signed violation A.x + a t - b (<= 0 means satisfied).
  double Violation(const Vector& x, double t) const { return x_coef.dot(x) + t_coef * t - rhs; }
  bool operator==(const Halfspace& o) const {
    return t_coef == o.t_coef && rhs == o.rhs && x_coef == o.x_coef;
  }
};

// Conjunction of halfspaces; rows are only ever appended.
class Polyhedron {
 public:
  Polyhedron() = default;
  explicit Polyhedron(std::vector<Halfspace> rows) : rows_(std::move(rows)) {}

  const std::vector<Halfspace>& rows() const { return rows_; }
  size_t size() const { return rows_.size(); }

  void Append(Halfspace row) { rows_.push_back(std::move(row)); }
  bool HasRow(const Halfspace& row) const {
    for (const Halfspace& r : rows_) {
      if (r == row) return true;
    }
    return false;
  }

  bool Contains(const Vector& x, double t, double tol = 1e-9) const {
    for (const Halfspace& r : rows_) {
      if (r.Violation(x, t) > tol) return false;
    }
    return true;
  }

  bool BoundsTBelow() const {
    for (const Halfspace& r : rows_) {
      if (r.t_coef < 0.0) return true;
    }
    return false;
  }

 private:
  std::vector<Halfspace> rows_;
};

// {(x, t) : p.x - t = gamma}.
struct HyperplaneLift {
  Vector p;
  double gamma = 0.0;

  double Residual(const Vector& x, double t) const { return p.dot(x) - t - gamma; }
};

// Initial simplex around the unit cube anchored at cube vertex I_{A_v}:
// {x : x_i <= 1 (i in A_v), x_i >= 0 (i not in A_v), a.x <= extent} with
// a = sum_{i not in A_v} e_i - sum_{i in A_v} e_i. Its vertices are I_{A_v}
// and I_{A_v} + extent d_i where d_i = +e_i (i not in A_v) or -e_i (i in A_v).
// extent = 0 means n, the smallest value that still covers the cube.
inline Simplex InitialSimplex(int n, Subset anchor = Subset(0), int extent = 0) {
  if (n < 1) throw GeometryError("initial_simplex: n must be >= 1");
  if (!anchor.WithinGround(n)) throw GeometryError("initial_simplex: anchor outside cube");
  if (extent == 0) extent = n;
  if (extent < n) throw GeometryError("initial_simplex: extent must be >= n");
  DenseMatrix v(n, n + 1);
  const Vector base = anchor.Indicator(n);
  v.col(0) = base;
  for (int i = 0; i < n; ++i) {
    v.col(i + 1) = base;
    v(i, i + 1) += anchor.Contains(i) ? -extent : extent;
  }
  return Simplex(std::move(v));
}

inline Vector Barycentric(const Simplex& s, const Vector& x) { return s.Barycentric(x); }

// Longest-edge bisection: r is the midpoint of the longest edge (i1, i2)
// (ties: lexicographically smallest pair); the first child replaces v_i1 by r,
// the second replaces v_i2 by r.
inline std::pair<int, int> LongestEdge(const Simplex& s) {
  const DenseMatrix& v = s.vertices();
  std::pair<int, int> edge{0, 1};
  double best = -1.0;
  for (int i = 0; i < s.num_vertices(); ++i) {
    for (int j = i + 1; j < s.num_vertices(); ++j) {
      const double len = (v.col(i) - v.col(j)).squaredNorm();
      if (len > best) {
        best = len;
        edge = {i, j};
      }
    }
  }
  return edge;
}

// Bisection across a given edge (i1, i2), i1 < i2; Bisect(s) uses the
// longest one.
inline std::pair<Simplex, Simplex> Bisect(const Simplex& s, std::pair<int, int> edge) {
  const DenseMatrix& v = s.vertices();
  const auto [i1, i2] = edge;
  if (i1 < 0 || i2 <= i1 || i2 >= s.num_vertices()) throw GeometryError("bisect: bad edge");
  const Vector r = 0.5 * (v.col(i1) + v.col(i2));
  // Replacing v_a by the midpoint of (v_a, v_b) maps barycentric coordinates
  // to lambda_a' = 2 lambda_a, lambda_b' = lambda_b - lambda_a; the other rows
  // of the inverse are unchanged and the determinant halves.
  const DenseMatrix& inv = s.barycentric_inverse();
  auto child = [&](int a, int b) {
    DenseMatrix verts = v;
    verts.col(a) = r;
    DenseMatrix child_inv = inv;
    child_inv.row(a) = 2.0 * inv.row(a);
    child_inv.row(b) = inv.row(b) - inv.row(a);
    return Simplex(std::move(verts), std::move(child_inv), 0.5 * s.det_);
  };
  return {child(i1, i2), child(i2, i1)};
}

inline std::pair<Simplex, Simplex> Bisect(const Simplex& s) { return Bisect(s, LongestEdge(s)); }

// Hyperplane p.x - t = gamma through the lifted vertices (v_i, levels_i).
inline HyperplaneLift HyperplaneThrough(const Simplex& s, const Vector& levels) {
  const int n = s.dim();
  if (levels.size() != n + 1) throw GeometryError("hyperplane_through: need n+1 levels");
  DenseMatrix system(n + 1, n + 1);
  system.leftCols(n) = s.vertices().transpose();
  system.col(n).setConstant(-1.0);
  Vector sol;
  try {
    sol = numerics::LuSolve(system, levels);
  } catch (const NumericsError&) {
    throw GeometryError("hyperplane_through: degenerate base");
  }
  return {sol.head(n), sol[n]};
}

// P_0 = {(x, t) : x in S_0, t >= t_tilde}: one facet row per vertex
// (lambda_j >= 0, scaled so the largest x-coefficient has magnitude 1), then
// -t <= -t_tilde.
inline Polyhedron InitialPolyhedron(const Simplex& s0, double t_tilde) {
  const int n = s0.dim();
  const DenseMatrix& inv = s0.barycentric_inverse();
  std::vector<Halfspace> rows;
  for (int j = 0; j <= n; ++j) {
    Vector coef = -inv.row(j).head(n).transpose();
    double rhs = inv(j, n);
    const double scale = coef.cwiseAbs().maxCoeff();
    if (scale > 0.0) {
      coef /= scale;
      rhs /= scale;
    }
    rows.push_back({std::move(coef), 0.0, rhs});
  }
  rows.push_back({Vector::Zero(n), -1.0, -t_tilde});
  return Polyhedron(std::move(rows));
}

// Cut l(x, t) = s.x + c t + d <= 0 as a halfspace.
inline Halfspace CutRow(const Vector& s, double c, double d) { return {s, c, -d}; }

inline Polyhedron AddCut(Polyhedron p, const Vector& s, double c, double d) {
  p.Append(CutRow(s, c, d));
  return p;
}

}  // namespace dsprog

#endif  // DSPROG_GEOMETRY_H_
