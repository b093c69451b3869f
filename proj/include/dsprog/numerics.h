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

// Small dense linear-algebra kernel: LU solves, ridge least squares and the
// symmetric eigenproblem. Everything is desk scale (dimensions <= 512).

#ifndef DSPROG_NUMERICS_H_
#define DSPROG_NUMERICS_H_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace dsprog {

using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr int kMaxDenseDim = 512;

class NumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace numerics {

inline void CheckFinite(const DenseMatrix& a, const char* what) {
  if (a.rows() > kMaxDenseDim || a.cols() > kMaxDenseDim) {
    throw NumericsError(std::string(what) + ": dimension exceeds 512");
  }
  if (!a.allFinite()) {
    throw NumericsError(std::string(what) + ": non-finite entry");
  }
}

// Infinity norm (max absolute row sum).
inline double InfNorm(const DenseMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

// Partial-pivoting LU factorization that refuses near-singular input: a pivot
// with magnitude <= 1e-12 * max|a_ij| is treated as singular.
class LuFactorization {
 public:
  explicit LuFactorization(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw NumericsError("lu: matrix not square");
    CheckFinite(a, "lu");
    const double scale = a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
    lu_.compute(a);
    const double min_pivot =
        a.size() == 0 ? 0.0 : lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (a.rows() > 0 && !(min_pivot > 1e-12 * scale)) {
      throw NumericsError("lu: singular matrix");
    }
  }

  Vector Solve(const Vector& b) const {
    if (b.size() != lu_.rows()) throw NumericsError("lu: size mismatch");
    return lu_.solve(b);
  }

  DenseMatrix Inverse() const { return lu_.inverse(); }
  double Determinant() const { return lu_.determinant(); }

 private:
  Eigen::PartialPivLU<DenseMatrix> lu_;
};

inline Vector LuSolve(const DenseMatrix& a, const Vector& b) {
  return LuFactorization(a).Solve(b);
}

struct LeastSquaresResult {
  Vector weights;
  double residual_sq = 0.0;
};

// min_w ||y - X w||^2 through the normal equations with a 1e-10 ridge, so
// rank-deficient designs still return a finite answer.
inline LeastSquaresResult LeastSquares(const DenseMatrix& x, const Vector& y) {
  if (x.rows() != y.size()) throw NumericsError("least_squares: size mismatch");
  LeastSquaresResult out;
  if (x.cols() == 0) {
    out.weights = Vector(0);
    out.residual_sq = y.squaredNorm();
    return out;
  }
  DenseMatrix gram = x.transpose() * x;
  gram.diagonal().array() += 1e-10;
  out.weights = gram.ldlt().solve(x.transpose() * y);
  out.residual_sq = (y - x * out.weights).squaredNorm();
  return out;
}

inline void CheckSymmetric(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw NumericsError("sym_eigs: matrix not square");
  CheckFinite(a, "sym_eigs");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, a.cwiseAbs().maxCoeff())) {
    throw NumericsError("sym_eigs: matrix not symmetric");
  }
}

// Eigenvalues in ascending order.
inline Vector SymEigs(const DenseMatrix& a) {
  CheckSymmetric(a);
  if (a.rows() == 0) return Vector(0);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericsError("sym_eigs: no convergence");
  return solver.eigenvalues();
}

// Eigenvalues ascending plus the orthonormal eigenvector matrix (columns).
inline std::pair<Vector, DenseMatrix> SymEigen(const DenseMatrix& a) {
  CheckSymmetric(a);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(a);
  if (solver.info() != Eigen::Success) throw NumericsError("sym_eigs: no convergence");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// Sum of singular values of `x`, via the eigenvalues of x^T x (or x x^T when
// that is smaller). Tiny negative eigenvalues are clamped to zero.
inline double NuclearNorm(const DenseMatrix& x) {
  if (x.cols() == 0 || x.rows() == 0) return 0.0;
  const DenseMatrix gram =
      x.cols() <= x.rows() ? DenseMatrix(x.transpose() * x) : DenseMatrix(x * x.transpose());
  const Vector eig = SymEigs(gram);
  double sum = 0.0;
  for (double e : eig) sum += std::sqrt(std::max(e, 0.0));
  return sum;
}

}  // namespace numerics
}  // namespace dsprog

#endif  // DSPROG_NUMERICS_H_
