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

// Lower bound of t - g(A) over a prism T(S) intersected with an outer
// approximation P of the epigraph {(x, t) : x in cube, f^(x) <= t}.
//
// With mu the incumbent value (lowered by any binary vertex of S) and vertex
// levels t_i = g^(v_i) + mu, the bound solves the binary program
//
//   max  sum_i t_i lambda_i - t
//   s.t. A x + a t <= b,  x = sum_i lambda_i v_i,  x binary,
//        sum_i lambda_i = 1,  lambda >= 0
//
// with optimum c*, and returns beta = +inf (no feasible point), mu (c* <= 0)
// or mu - c* (c* > 0). Convexity of g^ gives g(A) <= sum_i lambda_i g^(v_i),
// hence t - g(A) >= mu - c* at every feasible point.
//
// The program is solved exactly by enumerating the binary points of S: for
// fixed x, lambda is its barycentric vector and the objective decreases in t,
// so t sits at the lower envelope t_lo(x) of the rows with a_j < 0.

#ifndef DSPROG_BILP_H_
#define DSPROG_BILP_H_

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "dsprog/geometry.h"
#include "dsprog/set_function.h"

namespace dsprog {

inline constexpr double kBinaryVertexTol = 1e-9;
inline constexpr double kRowTol = 1e-9;

struct VertexLevels {
  Vector t;  // t_i = g^(v_i) + mu
  double mu = 0.0;
};

enum class BoundStatus { kInfeasible, kSolved };

struct BoundWitness {
  Subset set;     // x* as a subset
  Vector x;       // x* = sum_i lambda_i v_i
  double t = 0.0;  // t* = t_lo(x*)
  Vector lambda;
};

struct FeasiblePoint {
  Subset set;
  double f_value = 0.0;
};

struct BoundResult {
  BoundStatus status = BoundStatus::kInfeasible;
  double mu = 0.0;
  double c_star = -std::numeric_limits<double>::infinity();
  BoundWitness witness;
  std::vector<FeasiblePoint> feasible_points;
  double beta = std::numeric_limits<double>::infinity();
  int candidates_examined = 0;
};

// Returns the subset a vertex encodes if every coordinate is within
// kBinaryVertexTol of 0 or 1.
inline std::optional<Subset> AsBinaryPoint(const Vector& v) {
  Mask m = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i] - 1.0) <= kBinaryVertexTol) {
      m |= Mask{1} << i;
    } else if (std::abs(v[i]) > kBinaryVertexTol) {
      return std::nullopt;
    }
  }
  return Subset(m);
}

// mu = min(alpha, min{f(v_i) - g(v_i) : v_i binary}).
inline double ComputeMu(const Simplex& s, double alpha, const SetFunction& f, const SetFunction& g) {
  double mu = alpha;
  for (int i = 0; i < s.num_vertices(); ++i) {
    if (auto a = AsBinaryPoint(s.vertex(i))) mu = std::min(mu, f(*a) - g(*a));
  }
  return mu;
}

inline VertexLevels MakeLevels(const Simplex& s, const SetFunction& g, double mu) {
  VertexLevels levels;
  levels.mu = mu;
  levels.t.resize(s.num_vertices());
  for (int i = 0; i < s.num_vertices(); ++i) levels.t[i] = Lovasz(g, s.vertex(i)) + mu;
  return levels;
}

// Per-vertex data behind mu and the levels: g^(v_i), and f(A) - g(A) when
// v_i is the cube vertex I_A (+inf otherwise). A bisection child shares all
// but one vertex with its parent, so the driver carries this along.
struct VertexCache {
  Vector g_hat;
  Vector binary_value;

  double Mu(double alpha) const { return std::min(alpha, binary_value.minCoeff()); }
  VertexLevels Levels(double alpha) const {
    const double mu = Mu(alpha);
    return {(g_hat.array() + mu).matrix(), mu};
  }
};

inline double BinaryValue(const Vector& v, const SetFunction& f, const SetFunction& g) {
  if (auto a = AsBinaryPoint(v)) return f(*a) - g(*a);
  return std::numeric_limits<double>::infinity();
}

inline VertexCache MakeVertexCache(const Simplex& s, const SetFunction& f, const SetFunction& g) {
  VertexCache c{Vector(s.num_vertices()), Vector(s.num_vertices())};
  for (int i = 0; i < s.num_vertices(); ++i) {
    const Vector v = s.vertex(i);
    c.g_hat[i] = Lovasz(g, v);
    c.binary_value[i] = BinaryValue(v, f, g);
  }
  return c;
}

// Cache for `child`, which equals the parent except at vertex `replaced`.
inline VertexCache ChildVertexCache(const VertexCache& parent, const Simplex& child, int replaced,
                                    const SetFunction& f, const SetFunction& g) {
  VertexCache c = parent;
  const Vector v = child.vertex(replaced);
  c.g_hat[replaced] = Lovasz(g, v);
  c.binary_value[replaced] = BinaryValue(v, f, g);
  return c;
}

namespace internal {

// Calls fn(mask) for every binary point inside the bounding box of `s`, in
// ascending mask order.
template <typename Fn>
void ForEachBoxBinaryPoint(const Simplex& s, Fn&& fn) {
  const int n = s.dim();
  const DenseMatrix& v = s.vertices();
  constexpr double kBoxTol = 1e-9;
  Mask fixed = 0;
  Mask free = 0;
  for (int i = 0; i < n; ++i) {
    const double lo = v.row(i).minCoeff();
    const double hi = v.row(i).maxCoeff();
    const bool zero_ok = lo <= kBoxTol && hi >= -kBoxTol;
    const bool one_ok = lo <= 1.0 + kBoxTol && hi >= 1.0 - kBoxTol;
    if (zero_ok && one_ok) {
      free |= Mask{1} << i;
    } else if (one_ok) {
      fixed |= Mask{1} << i;
    } else if (!zero_ok) {
      return;
    }
  }
  Mask sub = 0;
  do {
    fn(fixed | sub);
    sub = (sub - free) & free;
  } while (sub != 0);
}

}  // namespace internal

// Exact solve by enumeration. `f` supplies the epigraph lift f(A) recorded in
// feasible_points. Ties in the objective go to the smaller mask.
inline BoundResult SolveBound(const Simplex& s, const Polyhedron& p, const VertexLevels& levels,
                              const SetFunction& f) {
  if (!p.BoundsTBelow()) throw InvalidArgument("solve_bound: polyhedron does not bound t below");
  const int n = s.dim();
  if (levels.t.size() != n + 1) throw InvalidArgument("solve_bound: levels need n+1 entries");
  const DenseMatrix& inv = s.barycentric_inverse();
  const double member_tol = s.membership_tol();
  const auto& rows = p.rows();

  BoundResult out;
  out.mu = levels.mu;
  Vector lambda(n + 1);
  Vector x(n);
  internal::ForEachBoxBinaryPoint(s, [&](Mask m) {
    ++out.candidates_examined;
    lambda = inv.col(n);
    x.setZero();
    for (Mask r = m; r != 0; r &= r - 1) {
      const int i = std::countr_zero(r);
      lambda += inv.col(i);
      x[i] = 1.0;
    }
    if (lambda.minCoeff() < -member_tol) return;
    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();
    for (const Halfspace& row : rows) {
      double ax = 0.0;
      for (Mask r = m; r != 0; r &= r - 1) ax += row.x_coef[std::countr_zero(r)];
      const double slack = row.rhs - ax;
      if (row.t_coef < 0.0) {
        t_lo = std::max(t_lo, slack / row.t_coef);
      } else if (row.t_coef > 0.0) {
        t_hi = std::min(t_hi, slack / row.t_coef);
      } else if (slack < -kRowTol) {
        return;
      }
    }
    if (t_lo > t_hi) return;
    const double objective = levels.t.dot(lambda) - t_lo;
    out.feasible_points.push_back({Subset(m), f(Subset(m))});
    if (out.status == BoundStatus::kInfeasible || objective > out.c_star) {
      out.status = BoundStatus::kSolved;
      out.c_star = objective;
      out.witness = {Subset(m), x, t_lo, lambda};
    }
  });

  if (out.status == BoundStatus::kInfeasible) {
    out.beta = std::numeric_limits<double>::infinity();
  } else if (out.c_star <= 0.0) {
    out.beta = levels.mu;
  } else {
    out.beta = levels.mu - out.c_star;
  }
  return out;
}

// Lower envelope t_lo(I_A) and feasibility of every binary point under the
// rows of a Polyhedron. The table does not depend on the simplex, so the
// driver keeps one and feeds it each appended row once. Sums over the bits of
// a mask run in ascending bit order, matching SolveBound above bit for bit.
class BinaryEnvelope {
 public:
  static constexpr int kMaxDim = 20;

  explicit BinaryEnvelope(int n) : n_(n) {
    if (n < 1 || n > kMaxDim) throw InvalidArgument("binary_envelope: n out of range");
    const Mask count = Mask{1} << n;
    t_lo_.assign(count, -std::numeric_limits<double>::infinity());
    t_hi_.assign(count, std::numeric_limits<double>::infinity());
    dead_.assign(count, 0);
    ax_.resize(count);
  }

  int n() const { return n_; }
  size_t synced_rows() const { return synced_; }

  // Absorbs rows [synced_rows(), p.size()).
  void Sync(const Polyhedron& p) {
    const auto& rows = p.rows();
    for (; synced_ < rows.size(); ++synced_) Absorb(rows[synced_]);
  }

  bool BoundsTBelow() const { return bounded_below_; }
  bool Feasible(Mask m) const { return !dead_[m] && !(t_lo_[m] > t_hi_[m]); }
  double TLo(Mask m) const { return t_lo_[m]; }

 private:
  void Absorb(const Halfspace& row) {
    if (row.x_coef.size() != n_) throw InvalidArgument("binary_envelope: row dimension mismatch");
    const Mask count = Mask{1} << n_;
    ax_[0] = 0.0;
    for (Mask m = 1; m < count; ++m) {
      const int high = std::bit_width(m) - 1;
      ax_[m] = ax_[m ^ (Mask{1} << high)] + row.x_coef[high];
    }
    if (row.t_coef < 0.0) bounded_below_ = true;
    for (Mask m = 0; m < count; ++m) {
      const double slack = row.rhs - ax_[m];
      if (row.t_coef < 0.0) {
        t_lo_[m] = std::max(t_lo_[m], slack / row.t_coef);
      } else if (row.t_coef > 0.0) {
        t_hi_[m] = std::min(t_hi_[m], slack / row.t_coef);
      } else if (slack < -kRowTol) {
        dead_[m] = 1;
      }
    }
  }

  int n_;
  size_t synced_ = 0;
  bool bounded_below_ = false;
  std::vector<double> t_lo_;
  std::vector<double> t_hi_;
  std::vector<char> dead_;
  std::vector<double> ax_;
};

// Same program as SolveBound, with the envelope read from a synced table and
// the binary points of S found by depth-first search over the bits, cutting
// any branch on which some barycentric coordinate can no longer reach
// -membership_tol. Returns the same c*, witness and feasible points (in
// ascending mask order); candidates_examined counts search leaves instead.
inline BoundResult SolveBound(const Simplex& s, const BinaryEnvelope& env, const VertexLevels& levels,
                              const SetFunction& f) {
  if (!env.BoundsTBelow()) throw InvalidArgument("solve_bound: polyhedron does not bound t below");
  const int n = s.dim();
  if (env.n() != n) throw InvalidArgument("solve_bound: envelope dimension mismatch");
  if (levels.t.size() != n + 1) throw InvalidArgument("solve_bound: levels need n+1 entries");
  const DenseMatrix& inv = s.barycentric_inverse();
  const double member_tol = s.membership_tol();

  // Per-bit status from the bounding box: 0 fixed out, 1 fixed in, 2 free.
  const DenseMatrix& v = s.vertices();
  constexpr double kBoxTol = 1e-9;
  std::vector<int> status(n);
  for (int i = 0; i < n; ++i) {
    const double lo = v.row(i).minCoeff();
    const double hi = v.row(i).maxCoeff();
    const bool zero_ok = lo <= kBoxTol && hi >= -kBoxTol;
    const bool one_ok = lo <= 1.0 + kBoxTol && hi >= 1.0 - kBoxTol;
    if (!zero_ok && !one_ok) {
      BoundResult empty;
      empty.mu = levels.mu;
      return empty;
    }
    status[i] = zero_ok && one_ok ? 2 : (one_ok ? 1 : 0);
  }
  // reach[i * w + r]: most that bits i..n-1 can still add to lambda_r, plus
  // the membership slack and a rounding margin so the cut never drops a point
  // the exact check keeps. A branch lives while partial + reach >= 0.
  const int w = n + 1;
  std::vector<double> reach(static_cast<size_t>(w) * (n + 1), 0.0);
  for (int r = 0; r <= n; ++r) {
    reach[static_cast<size_t>(n) * w + r] = member_tol + 1e-12 * (1.0 + inv.row(r).cwiseAbs().sum());
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int r = 0; r <= n; ++r) {
      const double c = inv(r, i);
      const double add = status[i] == 2 ? std::max(0.0, c) : (status[i] == 1 ? c : 0.0);
      reach[static_cast<size_t>(i) * w + r] = reach[static_cast<size_t>(i + 1) * w + r] + add;
    }
  }

  BoundResult out;
  out.mu = levels.mu;
  Mask best_mask = 0;
  // partial[d * w + r]: lambda_r summed over the chosen bits < d.
  std::vector<double> partial(static_cast<size_t>(w) * (n + 1));
  for (int r = 0; r <= n; ++r) partial[r] = inv(r, n);
  Vector lambda(w);

  std::vector<int> choice(n + 1, -1);
  std::vector<Mask> mask_at(n + 1, 0);
  int depth = 0;
  while (depth >= 0) {
    if (depth == n) {
      ++out.candidates_examined;
      const Mask m = mask_at[n];
      const double* lam = &partial[static_cast<size_t>(n) * w];
      double lo = lam[0];
      for (int r = 1; r <= n; ++r) lo = std::min(lo, lam[r]);
      if (lo >= -member_tol && env.Feasible(m)) {
        for (int r = 0; r <= n; ++r) lambda[r] = lam[r];
        const double t_lo = env.TLo(m);
        const double objective = levels.t.dot(lambda) - t_lo;
        out.feasible_points.push_back({Subset(m), f(Subset(m))});
        if (out.status == BoundStatus::kInfeasible || objective > out.c_star ||
            (objective == out.c_star && m < best_mask)) {
          out.status = BoundStatus::kSolved;
          out.c_star = objective;
          best_mask = m;
          out.witness = {Subset(m), Subset(m).Indicator(n), t_lo, lambda};
        }
      }
      --depth;
      continue;
    }
    // Next branch at this depth: bit value 0 first, then 1.
    int& c = choice[depth];
    const int lo_choice = status[depth] == 1 ? 1 : 0;
    const int hi_choice = status[depth] == 0 ? 0 : 1;
    c = c < 0 ? lo_choice : c + 1;
    if (c > hi_choice) {
      c = -1;
      --depth;
      continue;
    }
    const double* cur = &partial[static_cast<size_t>(depth) * w];
    double* next = &partial[static_cast<size_t>(depth + 1) * w];
    const double* reach_next = &reach[static_cast<size_t>(depth + 1) * w];
    bool viable = true;
    if (c == 1) {
      const double* col = inv.col(depth).data();
      for (int r = 0; r <= n; ++r) {
        next[r] = cur[r] + col[r];
        viable &= next[r] + reach_next[r] >= 0.0;
      }
      mask_at[depth + 1] = mask_at[depth] | (Mask{1} << depth);
    } else {
      for (int r = 0; r <= n; ++r) {
        next[r] = cur[r];
        viable &= next[r] + reach_next[r] >= 0.0;
      }
      mask_at[depth + 1] = mask_at[depth];
    }
    if (viable) {
      ++depth;
      if (depth < n) choice[depth] = -1;
    }
  }
  std::sort(out.feasible_points.begin(), out.feasible_points.end(),
            [](const FeasiblePoint& a, const FeasiblePoint& b) { return a.set.mask() < b.set.mask(); });

  if (out.status == BoundStatus::kInfeasible) {
    out.beta = std::numeric_limits<double>::infinity();
  } else if (out.c_star <= 0.0) {
    out.beta = levels.mu;
  } else {
    out.beta = levels.mu - out.c_star;
  }
  return out;
}

// Verification helper: checks on every feasible binary point that the
// barycentric objective equals the hyperplane form (p.x - t) - gamma within
// 1e-8, and that the hyperplane optimum gamma* satisfies gamma* = c* + gamma.
inline bool EquivalenceCheck(const Simplex& s, const Polyhedron& p, const VertexLevels& levels,
                             const HyperplaneLift& h, const BoundResult& result) {
  const int n = s.dim();
  const auto& rows = p.rows();
  bool ok = true;
  bool any = false;
  double gamma_star = -std::numeric_limits<double>::infinity();
  internal::ForEachBoxBinaryPoint(s, [&](Mask m) {
    const Vector x = Subset(m).Indicator(n);
    const Vector lambda = s.Barycentric(x);
    if (lambda.minCoeff() < -s.membership_tol()) return;
    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();
    for (const Halfspace& row : rows) {
      const double slack = row.rhs - row.x_coef.dot(x);
      if (row.t_coef < 0.0) {
        t_lo = std::max(t_lo, slack / row.t_coef);
      } else if (row.t_coef > 0.0) {
        t_hi = std::min(t_hi, slack / row.t_coef);
      } else if (slack < -kRowTol) {
        return;
      }
    }
    if (t_lo > t_hi) return;
    any = true;
    const double barycentric_form = levels.t.dot(lambda) - t_lo;
    const double hyperplane_form = h.p.dot(x) - t_lo;
    const double scale = std::max({1.0, std::abs(barycentric_form), std::abs(h.gamma)});
    if (std::abs(barycentric_form - (hyperplane_form - h.gamma)) > 1e-8 * scale) ok = false;
    gamma_star = std::max(gamma_star, hyperplane_form);
  });
  if (!any) return ok && result.status == BoundStatus::kInfeasible;
  const double scale = std::max({1.0, std::abs(gamma_star), std::abs(h.gamma)});
  return ok && result.status == BoundStatus::kSolved &&
         std::abs(gamma_star - (result.c_star + h.gamma)) <= 1e-8 * scale;
}

}  // namespace dsprog

#endif  // DSPROG_BILP_H_
