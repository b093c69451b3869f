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

// Set-function oracles over a ground set {0, ..., n-1}, the Lovasz extension
// with its greedy subgradient, exhaustive minimizers, and a small library of
// concrete submodular functions.
//
// Subsets are bitmasks: bit i set <=> element i is in the set. Every oracle
// is a pure function of the mask; copies share immutable state.

#ifndef DSPROG_SET_FUNCTION_H_
#define DSPROG_SET_FUNCTION_H_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsprog/numerics.h"

namespace dsprog {

using Mask = std::uint64_t;

// Largest ground set any oracle accepts; enumeration is capped separately.
inline constexpr int kMaxGroundSet = 62;
inline constexpr int kDefaultEnumerationCap = 24;

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Subset {
 public:
  constexpr Subset() = default;
  constexpr explicit Subset(Mask mask) : mask_(mask) {}

  static Subset FromElements(const std::vector<int>& elements) {
    Mask m = 0;
    for (int e : elements) {
      if (e < 0 || e >= kMaxGroundSet) throw InvalidArgument("subset element out of range");
      m |= Mask{1} << e;
    }
    return Subset(m);
  }
  static constexpr Subset Full(int n) {
    return Subset(n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1);
  }

  constexpr Mask mask() const { return mask_; }
  constexpr bool Contains(int i) const { return (mask_ >> i) & 1U; }
  constexpr int Size() const { return std::popcount(mask_); }
  constexpr bool Empty() const { return mask_ == 0; }
  constexpr bool WithinGround(int n) const { return (mask_ & ~Full(n).mask_) == 0; }

  constexpr Subset With(int i) const { return Subset(mask_ | (Mask{1} << i)); }
  constexpr Subset Without(int i) const { return Subset(mask_ & ~(Mask{1} << i)); }

  std::vector<int> Elements() const {
    std::vector<int> out;
    for (Mask m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  // Characteristic vector I_A in R^n.
  Vector Indicator(int n) const {
    Vector x = Vector::Zero(n);
    for (int i = 0; i < n; ++i) x[i] = Contains(i) ? 1.0 : 0.0;
    return x;
  }

  friend constexpr bool operator==(Subset a, Subset b) = default;

 private:
  Mask mask_ = 0;
};

enum class Modularity {
  kSubmodular,     // constructor guarantees f(A)+f(B) >= f(A|B)+f(A&B)
  kNotGuaranteed,  // may or may not be submodular; check before relying on it
};

// A pure, deterministic oracle on all 2^n subsets of {0..n-1}. The `spec`
// member is the JSON description the function was built from, so instances
// round-trip through files.
class SetFunction {
 public:
  using Evaluator = std::function<double(Mask)>;

  SetFunction(int n, Evaluator eval, nlohmann::json spec, Modularity modularity)
      : n_(n), eval_(std::move(eval)), spec_(std::move(spec)), modularity_(modularity) {
    if (n < 1 || n > kMaxGroundSet) throw InvalidArgument("ground set size out of range");
  }

  int n() const { return n_; }
  const nlohmann::json& spec() const { return spec_; }
  std::string kind() const { return spec_.value("type", std::string("custom")); }
  Modularity modularity() const { return modularity_; }

  double operator()(Subset a) const { return eval_(a.mask()); }
  double Evaluate(Subset a) const {
    if (!a.WithinGround(n_)) throw InvalidArgument("subset outside ground set");
    return eval_(a.mask());
  }

 private:
  int n_;
  Evaluator eval_;
  nlohmann::json spec_;
  Modularity modularity_;
};

inline void CheckEnumerable(int n, int cap = kDefaultEnumerationCap) {
  if (n > cap) {
    throw InvalidArgument("ground set of size " + std::to_string(n) +
                          " exceeds enumeration cap " + std::to_string(cap));
  }
}

inline void CheckSameGround(const SetFunction& f, const SetFunction& g) {
  if (f.n() != g.n()) throw InvalidArgument("oracles have mismatched ground sets");
}

// ---------------------------------------------------------------------------
// Library constructors.

inline SetFunction Modular(std::vector<double> weights, double offset = 0.0) {
  const int n = static_cast<int>(weights.size());
  nlohmann::json spec = {{"type", "modular"}, {"weights", weights}};
  if (offset != 0.0) spec["offset"] = offset;
  auto w = std::make_shared<const std::vector<double>>(std::move(weights));
  return SetFunction(
      n,
      [w, offset](Mask m) {
        double sum = offset;
        for (; m != 0; m &= m - 1) sum += (*w)[std::countr_zero(m)];
        return sum;
      },
      std::move(spec), Modularity::kSubmodular);
}

inline SetFunction Cardinality(int n) {
  return Modular(std::vector<double>(n, 1.0));
}

// f(A) = phi(|A|) for phi given by its values phi(0..n); phi must be concave
// and nondecreasing.
inline SetFunction CardinalityConcave(std::vector<double> phi) {
  if (phi.size() < 2) throw InvalidArgument("cardinality_concave: need phi(0..n), n >= 1");
  const int n = static_cast<int>(phi.size()) - 1;
  double scale = 1.0;
  for (double v : phi) scale = std::max(scale, std::abs(v));
  for (int k = 1; k <= n; ++k) {
    if (phi[k] < phi[k - 1] - 1e-12 * scale) {
      throw InvalidArgument("cardinality_concave: phi must be nondecreasing");
    }
    if (k < n && phi[k + 1] - 2 * phi[k] + phi[k - 1] > 1e-12 * scale) {
      throw InvalidArgument("cardinality_concave: phi must be concave");
    }
  }
  nlohmann::json spec = {{"type", "cardinality_concave"}, {"phi", phi}};
  auto values = std::make_shared<const std::vector<double>>(std::move(phi));
  return SetFunction(
      n, [values](Mask m) { return (*values)[std::popcount(m)]; }, std::move(spec),
      Modularity::kSubmodular);
}

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 0.0;
};

// Undirected cut: total weight of edges with exactly one endpoint in A.
inline SetFunction Cut(int n, std::vector<Edge> edges) {
  nlohmann::json jedges = nlohmann::json::array();
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) throw InvalidArgument("cut: edge endpoint out of range");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) throw InvalidArgument("cut: negative edge weight");
    jedges.push_back({e.u, e.v, e.weight});
  }
  nlohmann::json spec = {{"type", "cut"}, {"n", n}, {"edges", jedges}};
  auto es = std::make_shared<const std::vector<Edge>>(std::move(edges));
  return SetFunction(
      n,
      [es](Mask m) {
        double sum = 0.0;
        for (const Edge& e : *es) {
          if (((m >> e.u) & 1U) != ((m >> e.v) & 1U)) sum += e.weight;
        }
        return sum;
      },
      std::move(spec), Modularity::kSubmodular);
}

namespace internal {

inline nlohmann::json MatrixToJson(const DenseMatrix& x) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    std::vector<double> row(x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) row[c] = x(r, c);
    rows.push_back(row);
  }
  return rows;
}

inline DenseMatrix SelectColumns(const DenseMatrix& x, Mask m) {
  DenseMatrix out(x.rows(), std::popcount(m));
  int j = 0;
  for (; m != 0; m &= m - 1) out.col(j++) = x.col(std::countr_zero(m));
  return out;
}

inline DenseMatrix SelectPrincipal(const DenseMatrix& x, Mask m) {
  std::vector<int> idx;
  for (; m != 0; m &= m - 1) idx.push_back(std::countr_zero(m));
  DenseMatrix out(idx.size(), idx.size());
  for (size_t a = 0; a < idx.size(); ++a) {
    for (size_t b = 0; b < idx.size(); ++b) out(a, b) = x(idx[a], idx[b]);
  }
  return out;
}

}  // namespace internal

// f(A) = lambda * (sum of singular values of the column submatrix X_A).
inline SetFunction Nuclear(DenseMatrix x, double lambda = 1.0) {
  if (x.cols() < 1) throw InvalidArgument("nuclear: X needs at least one column");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("nuclear: lambda must be >= 0");
  numerics::CheckFinite(x, "nuclear");
  const int n = static_cast<int>(x.cols());
  nlohmann::json spec = {{"type", "nuclear"}, {"X", internal::MatrixToJson(x)}, {"lambda", lambda}};
  auto xs = std::make_shared<const DenseMatrix>(std::move(x));
  return SetFunction(
      n,
      [xs, lambda](Mask m) {
        if (m == 0) return 0.0;
        return lambda * numerics::NuclearNorm(internal::SelectColumns(*xs, m));
      },
      std::move(spec), Modularity::kSubmodular);
}

// g(A) = -scale * min_w ||y - X_A w||^2. The residual is only approximately
// supermodular, so this is not guaranteed submodular (see
// RepairToSubmodularPair in experiments.h).
inline SetFunction NegResidual(DenseMatrix x, Vector y, double scale = 1.0) {
  if (x.cols() < 1) throw InvalidArgument("neg_residual: X needs at least one column");
  if (x.rows() != y.size()) throw InvalidArgument("neg_residual: X rows must match y");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidArgument("neg_residual: scale must be > 0");
  numerics::CheckFinite(x, "neg_residual");
  const int n = static_cast<int>(x.cols());
  nlohmann::json spec = {{"type", "neg_residual"},
                         {"X", internal::MatrixToJson(x)},
                         {"y", std::vector<double>(y.data(), y.data() + y.size())}};
  if (scale != 1.0) spec["scale"] = scale;
  auto xs = std::make_shared<const DenseMatrix>(std::move(x));
  auto ys = std::make_shared<const Vector>(std::move(y));
  return SetFunction(
      n,
      [xs, ys, scale](Mask m) {
        return -scale * numerics::LeastSquares(internal::SelectColumns(*xs, m), *ys).residual_sq;
      },
      std::move(spec), Modularity::kNotGuaranteed);
}

// Differential entropy of a Gaussian restricted to A:
// 1/2 log det(2 pi e Sigma_AA), with f(empty) = 0.
inline SetFunction GaussianEntropy(DenseMatrix sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() < 1) {
    throw InvalidArgument("gaussian_entropy: sigma must be square");
  }
  numerics::CheckFinite(sigma, "gaussian_entropy");
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, sigma.cwiseAbs().maxCoeff()) ||
      sigma.llt().info() != Eigen::Success) {
    throw InvalidArgument("gaussian_entropy: sigma must be symmetric positive definite");
  }
  const int n = static_cast<int>(sigma.rows());
  nlohmann::json spec = {{"type", "gaussian_entropy"}, {"sigma", internal::MatrixToJson(sigma)}};
  auto s = std::make_shared<const DenseMatrix>(std::move(sigma));
  return SetFunction(
      n,
      [s](Mask m) {
        if (m == 0) return 0.0;
        const DenseMatrix sub = internal::SelectPrincipal(*s, m);
        const Eigen::LLT<DenseMatrix> llt(sub);
        double logdet = 0.0;
        for (Eigen::Index i = 0; i < sub.rows(); ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
        const double k = static_cast<double>(sub.rows());
        return 0.5 * (k * std::log(2.0 * M_PI * M_E) + logdet);
      },
      std::move(spec), Modularity::kSubmodular);
}

// Explicit table of 2^n values indexed by mask.
inline SetFunction Table(std::vector<double> values, Modularity modularity = Modularity::kNotGuaranteed) {
  const size_t size = values.size();
  if (size < 2 || !std::has_single_bit(size)) {
    throw InvalidArgument("table: length must be 2^n with n >= 1");
  }
  const int n = std::countr_zero(size);
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("table: non-finite value");
  }
  nlohmann::json spec = {{"type", "table"}, {"values", values}};
  auto t = std::make_shared<const std::vector<double>>(std::move(values));
  return SetFunction(
      n, [t](Mask m) { return (*t)[m]; }, std::move(spec), modularity);
}

// f(A) = -sum_{i<j in A} c[i][j] for a symmetric nonnegative c with zero
// diagonal. Every second difference equals -c[i][j], so f is submodular.
inline SetFunction PairPenalty(std::vector<std::vector<double>> c) {
  const int n = static_cast<int>(c.size());
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(c[i].size()) != n) throw InvalidArgument("pair_penalty: c must be square");
    if (c[i][i] != 0.0) throw InvalidArgument("pair_penalty: diagonal must be zero");
    for (int j = 0; j < n; ++j) {
      if (!(c[i][j] >= 0.0) || !std::isfinite(c[i][j])) throw InvalidArgument("pair_penalty: need c >= 0");
      if (c[i][j] != c[j][i]) throw InvalidArgument("pair_penalty: c must be symmetric");
    }
  }
  nlohmann::json spec = {{"type", "pair_penalty"}, {"c", c}};
  auto cs = std::make_shared<const std::vector<std::vector<double>>>(std::move(c));
  return SetFunction(
      n,
      [cs](Mask m) {
        double sum = 0.0;
        for (Mask a = m; a != 0; a &= a - 1) {
          const int i = std::countr_zero(a);
          for (Mask b = a & (a - 1); b != 0; b &= b - 1) sum -= (*cs)[i][std::countr_zero(b)];
        }
        return sum;
      },
      std::move(spec), Modularity::kSubmodular);
}

// Weighted coverage: element i covers the items in covers[i]; f(A) is the
// total weight of items covered by some element of A.
inline SetFunction Coverage(std::vector<double> item_weights, std::vector<std::vector<int>> covers) {
  const int n = static_cast<int>(covers.size());
  const int items = static_cast<int>(item_weights.size());
  for (double w : item_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("coverage: item weights must be >= 0");
  }
  for (const auto& c : covers) {
    for (int it : c) {
      if (it < 0 || it >= items) throw InvalidArgument("coverage: item index out of range");
    }
  }
  nlohmann::json spec = {{"type", "coverage"}, {"weights", item_weights}, {"covers", covers}};
  auto w = std::make_shared<const std::vector<double>>(std::move(item_weights));
  auto cv = std::make_shared<const std::vector<std::vector<int>>>(std::move(covers));
  return SetFunction(
      n,
      [w, cv](Mask m) {
        std::vector<char> hit(w->size(), 0);
        for (; m != 0; m &= m - 1) {
          for (int it : (*cv)[std::countr_zero(m)]) hit[it] = 1;
        }
        double sum = 0.0;
        for (size_t it = 0; it < hit.size(); ++it) {
          if (hit[it]) sum += (*w)[it];
        }
        return sum;
      },
      std::move(spec), Modularity::kSubmodular);
}

// Pointwise sum; submodular when every term is.
inline SetFunction Sum(std::vector<SetFunction> terms) {
  if (terms.empty()) throw InvalidArgument("sum: no terms");
  const int n = terms.front().n();
  nlohmann::json jterms = nlohmann::json::array();
  Modularity mod = Modularity::kSubmodular;
  for (const SetFunction& t : terms) {
    if (t.n() != n) throw InvalidArgument("sum: terms have mismatched ground sets");
    jterms.push_back(t.spec());
    if (t.modularity() != Modularity::kSubmodular) mod = Modularity::kNotGuaranteed;
  }
  nlohmann::json spec = {{"type", "sum"}, {"terms", jterms}};
  auto ts = std::make_shared<const std::vector<SetFunction>>(std::move(terms));
  return SetFunction(
      n,
      [ts](Mask m) {
        double sum = 0.0;
        for (const SetFunction& t : *ts) sum += t(Subset(m));
        return sum;
      },
      std::move(spec), mod);
}

// Evaluates every subset once and returns an equivalent table-backed oracle.
// Keeps the original spec (so serialization is unchanged).
inline SetFunction Tabulate(const SetFunction& f, int cap = kDefaultEnumerationCap) {
  CheckEnumerable(f.n(), cap);
  const Mask count = Mask{1} << f.n();
  auto t = std::make_shared<std::vector<double>>(count);
  for (Mask m = 0; m < count; ++m) (*t)[m] = f(Subset(m));
  std::shared_ptr<const std::vector<double>> ct = std::move(t);
  return SetFunction(
      f.n(), [ct](Mask m) { return (*ct)[m]; }, f.spec(), f.modularity());
}

// ---------------------------------------------------------------------------
// Lovasz extension.

namespace internal {

// Indices sorted by value descending, ties by ascending index.
inline std::vector<int> DescendingOrder(const Vector& x) {
  std::vector<int> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&x](int a, int b) { return x[a] > x[b]; });
  return order;
}

}  // namespace internal

// f^(x) = (1 - p_1) f(empty) + sum_{j<m} (p_j - p_{j+1}) f(U_j) + p_m f(U_m),
// where p_1 > ... > p_m are the distinct coordinates of x and
// U_j = {i : x_i >= p_j}. With f(empty) = 0 this is the textbook formula; the
// first term keeps f^(I_A) = f(A) exact for unnormalized f. Defined on all of
// R^n (simplex vertices may leave the unit cube).
inline double Lovasz(const SetFunction& f, const Vector& x) {
  if (x.size() != f.n()) throw InvalidArgument("lovasz: dimension mismatch");
  const std::vector<int> order = internal::DescendingOrder(x);
  const int n = f.n();
  double value = 0.0;
  Mask level = 0;
  int k = 0;
  const double top = x[order[0]];
  while (k < n) {
    const double p = x[order[k]];
    while (k < n && x[order[k]] == p) level |= Mask{1} << order[k++];
    const double next = k < n ? x[order[k]] : 0.0;
    value += (p - next) * f(Subset(level));
  }
  // The loop added p_m * f(N) as its final term.
  return value + (1.0 - top) * f(Subset(0));
}

// Greedy (Edmonds) subgradient: with sigma the descending order (ties by
// ascending index) and U_j the first j elements of sigma,
// s[sigma(j)] = f(U_j) - f(U_{j-1}). Satisfies s.x = f^(x) - f(empty).
inline Vector LovaszSubgradient(const SetFunction& f, const Vector& x) {
  if (x.size() != f.n()) throw InvalidArgument("lovasz_subgradient: dimension mismatch");
  const std::vector<int> order = internal::DescendingOrder(x);
  Vector s(f.n());
  Mask prefix = 0;
  double prev = f(Subset(0));
  for (int e : order) {
    prefix |= Mask{1} << e;
    const double cur = f(Subset(prefix));
    s[e] = cur - prev;
    prev = cur;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Exhaustive minimization. Ties go to the smallest mask.

struct SetMinimum {
  Subset set;
  double value = 0.0;
};

inline SetMinimum BruteForceMin(const SetFunction& f, int cap = kDefaultEnumerationCap) {
  CheckEnumerable(f.n(), cap);
  const Mask count = Mask{1} << f.n();
  SetMinimum best{Subset(0), f(Subset(0))};
  for (Mask m = 1; m < count; ++m) {
    const double v = f(Subset(m));
    if (v < best.value) best = {Subset(m), v};
  }
  return best;
}

inline SetMinimum BruteForceDsMin(const SetFunction& f, const SetFunction& g,
                                  int cap = kDefaultEnumerationCap) {
  CheckSameGround(f, g);
  CheckEnumerable(f.n(), cap);
  const Mask count = Mask{1} << f.n();
  SetMinimum best{Subset(0), f(Subset(0)) - g(Subset(0))};
  for (Mask m = 1; m < count; ++m) {
    const double v = f(Subset(m)) - g(Subset(m));
    if (v < best.value) best = {Subset(m), v};
  }
  return best;
}

// Exhaustive four-point check f(A)+f(B) >= f(A|B)+f(A&B) over all pairs, with
// tolerance tol * max(1, max|f|). O(4^n) evaluations of a tabulated copy.
inline bool IsSubmodular(const SetFunction& f, double tol = 1e-9, int cap = 14) {
  CheckEnumerable(f.n(), cap);
  const SetFunction t = Tabulate(f, cap);
  const Mask count = Mask{1} << f.n();
  double scale = 1.0;
  for (Mask m = 0; m < count; ++m) scale = std::max(scale, std::abs(t(Subset(m))));
  const double slack = tol * scale;
  for (Mask a = 0; a < count; ++a) {
    const double fa = t(Subset(a));
    for (Mask b = a + 1; b < count; ++b) {
      if (fa + t(Subset(b)) < t(Subset(a | b)) + t(Subset(a & b)) - slack) return false;
    }
  }
  return true;
}

// Largest second difference f(A+i+j) - f(A+i) - f(A+j) + f(A) over all A and
// i != j outside A; <= 0 exactly when f is submodular.
inline double MaxSecondDifference(const SetFunction& f, int cap = kDefaultEnumerationCap) {
  CheckEnumerable(f.n(), cap);
  const SetFunction t = Tabulate(f, cap);
  const int n = f.n();
  const Mask count = Mask{1} << n;
  double worst = -std::numeric_limits<double>::infinity();
  for (Mask a = 0; a < count; ++a) {
    for (int i = 0; i < n; ++i) {
      if ((a >> i) & 1U) continue;
      for (int j = i + 1; j < n; ++j) {
        if ((a >> j) & 1U) continue;
        const Mask ai = a | (Mask{1} << i);
        const Mask aj = a | (Mask{1} << j);
        const double d = t(Subset(ai | aj)) - t(Subset(ai)) - t(Subset(aj)) + t(Subset(a));
        worst = std::max(worst, d);
      }
    }
  }
  return worst;
}

}  // namespace dsprog

#endif  // DSPROG_SET_FUNCTION_H_
