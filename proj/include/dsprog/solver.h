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

// Exact minimization of f(A) - g(A) for submodular f, g by prismatic
// branch and bound.
//
// The problem is lifted to min t - g(A) s.t. f(A) <= t. Nodes are prisms over
// simplices covering the unit cube; each is bounded with SolveBound against a
// shared outer approximation P of the epigraph of f^. The loop
//
//   1. picks the active node with the smallest bound (ties: smallest id),
//   2. adds a subgradient cut of f^ at the node's witness if the witness is
//      outside the epigraph,
//   3. bisects the node's simplex along its longest edge and bounds both
//      children against the updated P,
//   4. drops children whose bound program is infeasible (DR1) or has c* <= 0
//      (DR2), updates the incumbent from every binary point seen, and prunes
//      every node whose bound is within eps of the incumbent.
//
// The search ends when no active node remains; the incumbent is then optimal
// up to eps * max(1, |incumbent|).

#ifndef DSPROG_SOLVER_H_
#define DSPROG_SOLVER_H_

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsprog/bilp.h"
#include "dsprog/geometry.h"
#include "dsprog/set_function.h"

namespace dsprog {

struct SolverConfig {
  double eps = 1e-9;       // relative pruning tolerance
  double feas_tol = 1e-9;  // epigraph membership tolerance
  std::int64_t max_iters = 10'000'000;
  std::int64_t max_nodes = 100'000'000;
  Subset initial_vertex;  // anchor of the initial simplex
  std::uint64_t seed = 0;  // provenance only
  int enumeration_cap = kDefaultEnumerationCap;
  std::ostream* trace = nullptr;  // JSON lines, one per iteration
  // Bound every node by scanning all rows of P per candidate instead of the
  // cached envelope table. Same results, much slower; for cross-checks.
  bool reference_bound = false;
};

enum class Termination { kOptimal, kIterationLimit, kNodeLimit };

inline const char* ToString(Termination t) {
  switch (t) {
    case Termination::kOptimal:
      return "optimal";
    case Termination::kIterationLimit:
      return "iteration_limit";
    case Termination::kNodeLimit:
      return "node_limit";
  }
  return "unknown";
}

enum class DeletionRule { kNone, kDr1, kDr2, kBound };

inline const char* ToString(DeletionRule r) {
  switch (r) {
    case DeletionRule::kNone:
      return "none";
    case DeletionRule::kDr1:
      return "DR1";
    case DeletionRule::kDr2:
      return "DR2";
    case DeletionRule::kBound:
      return "bound";
  }
  return "unknown";
}

struct SolveReport {
  Subset optimal_set;
  double optimal_value = 0.0;
  double lower_bound = 0.0;
  std::int64_t iterations = 0;
  std::int64_t bound_rounds = 0;
  std::int64_t nodes_created = 0;
  std::int64_t nodes_explored = 0;
  std::int64_t deleted_dr1 = 0;
  std::int64_t deleted_dr2 = 0;
  std::int64_t deleted_bound = 0;
  std::int64_t cuts_added = 0;
  double wall_time_ms = 0.0;
  double t_tilde = 0.0;
  double initial_alpha = 0.0;
  double root_c_star = 0.0;
  double root_beta = 0.0;
  Termination termination = Termination::kOptimal;
  std::vector<std::pair<std::int64_t, double>> alpha_history;
  SolverConfig config;
};

// l(x, t) = s.x + c t + d <= 0.
struct OuterCut {
  Vector s;
  double c = -1.0;
  double d = 0.0;

  double Evaluate(const Vector& x, double t) const { return s.dot(x) + c * t + d; }
  Halfspace Row() const { return CutRow(s, c, d); }
};

// True iff x is in the unit cube and f^(x) <= t (both up to tol).
inline bool IsFeasiblePoint(const SetFunction& f, const Vector& x, double t, double tol) {
  if (x.size() != f.n()) throw InvalidArgument("is_feasible_point: dimension mismatch");
  if (x.minCoeff() < -tol || x.maxCoeff() > 1.0 + tol) return false;
  return Lovasz(f, x) <= t + tol;
}

// Subgradient cut separating z = (x*, t*) from the epigraph of f^:
// l(x, t) = s.(x - x*) - (t - t*) + (f^(x*) - t*) with s a subgradient of f^
// at x*. l(z) equals the violation f^(x*) - t* and l <= 0 on the epigraph.
inline OuterCut CuttingPlane(const SetFunction& f, const Vector& x_star, double t_star,
                        double feas_tol = 0.0) {
  const double fx = Lovasz(f, x_star);
  if (!(fx > t_star + feas_tol)) throw InvalidArgument("cutting_plane: point already in the epigraph");
  Vector s = LovaszSubgradient(f, x_star);
  const double d = fx - s.dot(x_star);
  return {std::move(s), -1.0, d};
}

// Hooks for instrumented runs; every callback sees solver state by const
// reference for the duration of the call only.
class SolveObserver {
 public:
  virtual ~SolveObserver() = default;

  struct BoundEvent {
    std::int64_t node_id;
    const Simplex& simplex;
    const Polyhedron& polyhedron;
    const VertexLevels& levels;
    const BoundResult& result;
    double alpha;  // incumbent used for mu
  };
  struct CutEvent {
    std::int64_t iteration;
    const Vector& x_star;
    double t_star;
    const OuterCut& cut;
    bool appended;
  };
  struct DeleteEvent {
    std::int64_t node_id;
    const Simplex& simplex;
    DeletionRule rule;
    double beta;
    double alpha_after;  // incumbent after this iteration's update
  };
  struct IterationEvent {
    std::int64_t iteration;
    double alpha;
    double lower_bound;
    double eps_abs;
    std::size_t active_nodes;
    const Polyhedron& polyhedron;
  };

  virtual void OnBound(const BoundEvent&) {}
  virtual void OnCut(const CutEvent&) {}
  virtual void OnDelete(const DeleteEvent&) {}
  virtual void OnIteration(const IterationEvent&) {}
};

namespace internal {

struct Node {
  std::int64_t id;
  Simplex simplex;
  double beta;
  Vector witness_x;
  double witness_t;
  int depth;
  VertexCache cache;
};

inline nlohmann::json ElementsJson(Subset s) { return s.Elements(); }

class Incumbent {
 public:
  Incumbent(Subset set, double value) : set_(set), value_(value) {}

  bool Offer(Subset set, double value) {
    if (value < value_) {
      set_ = set;
      value_ = value;
      return true;
    }
    return false;
  }
  Subset set() const { return set_; }
  double value() const { return value_; }

 private:
  Subset set_;
  double value_;
};

// alpha_0: best of the empty set, the ground set, singletons and co-singletons.
inline Incumbent InitialIncumbent(const SetFunction& f, const SetFunction& g) {
  const int n = f.n();
  const Mask full = Subset::Full(n).mask();
  std::vector<Mask> sweep = {0, full};
  for (int i = 0; i < n; ++i) {
    sweep.push_back(Mask{1} << i);
    sweep.push_back(full & ~(Mask{1} << i));
  }
  std::sort(sweep.begin(), sweep.end());
  Incumbent inc(Subset(sweep[0]), f(Subset(sweep[0])) - g(Subset(sweep[0])));
  for (Mask m : sweep) inc.Offer(Subset(m), f(Subset(m)) - g(Subset(m)));
  return inc;
}

}  // namespace internal

// Legs of the root simplex: the smallest power of two >= n. Bisection
// midpoints are then dyadic, so every cube vertex inside a surviving node
// eventually becomes a node vertex and fixes mu there. With legs of length n
// (n not a power of two) cube vertices are never reached and nodes around the
// optimum only shrink toward it.
inline int RootExtent(int n) { return static_cast<int>(std::bit_ceil(static_cast<unsigned>(n))); }

inline SolveReport Solve(const SetFunction& f_in, const SetFunction& g_in, const SolverConfig& config = {},
                         SolveObserver* observer = nullptr) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  CheckSameGround(f_in, g_in);
  const int n = f_in.n();
  CheckEnumerable(n, config.enumeration_cap);
  if (!(config.eps >= 0.0) || !(config.feas_tol >= 0.0)) {
    throw InvalidArgument("solve: eps and feas_tol must be >= 0");
  }
  if (!config.initial_vertex.WithinGround(n)) throw InvalidArgument("solve: initial vertex outside cube");

  // Every subset is visited at least once (t_tilde), so tabulate up front.
  const SetFunction f = Tabulate(f_in, config.enumeration_cap);
  const SetFunction g = Tabulate(g_in, config.enumeration_cap);

  SolveReport report;
  report.config = config;
  report.config.trace = nullptr;

  report.t_tilde = BruteForceMin(f, config.enumeration_cap).value;
  const Simplex s0 = InitialSimplex(n, config.initial_vertex, RootExtent(n));
  Polyhedron poly = InitialPolyhedron(s0, report.t_tilde);

  internal::Incumbent incumbent = internal::InitialIncumbent(f, g);
  report.initial_alpha = incumbent.value();
  report.alpha_history.emplace_back(0, incumbent.value());
  auto eps_abs = [&] { return config.eps * std::max(1.0, std::abs(incumbent.value())); };

  std::optional<BinaryEnvelope> envelope;
  if (!config.reference_bound && n <= BinaryEnvelope::kMaxDim) envelope.emplace(n);
  auto bound = [&](std::int64_t id, const Simplex& s, const VertexCache& cache) {
    const double alpha = incumbent.value();
    const VertexLevels levels = cache.Levels(alpha);
    BoundResult result;
    if (envelope) {
      envelope->Sync(poly);
      result = SolveBound(s, *envelope, levels, f);
    } else {
      result = SolveBound(s, poly, levels, f);
    }
    if (observer != nullptr) observer->OnBound({id, s, poly, levels, result, alpha});
    return result;
  };
  auto absorb = [&](const BoundResult& r, std::int64_t iteration) {
    bool improved = false;
    for (const FeasiblePoint& p : r.feasible_points) {
      improved |= incumbent.Offer(p.set, p.f_value - g(p.set));
    }
    if (improved) report.alpha_history.emplace_back(iteration, incumbent.value());
  };

  // Active nodes keyed by (beta, id): begin() is the best-first choice.
  std::map<std::pair<double, std::int64_t>, internal::Node> active;
  std::int64_t next_id = 0;

  struct PendingDelete {
    std::int64_t id;
    Simplex simplex;
    DeletionRule rule;
    double beta;
  };
  std::vector<PendingDelete> deletions;
  auto record_delete = [&](std::int64_t id, const Simplex& s, DeletionRule rule, double beta) {
    if (observer != nullptr) deletions.push_back({id, s, rule, beta});
  };
  auto flush_deletions = [&] {
    if (observer != nullptr) {
      for (const PendingDelete& d : deletions) {
        observer->OnDelete({d.id, d.simplex, d.rule, d.beta, incumbent.value()});
      }
    }
    deletions.clear();
  };
  auto prune = [&] {
    const double threshold = incumbent.value() - eps_abs();
    auto it = active.lower_bound({threshold, std::numeric_limits<std::int64_t>::min()});
    while (it != active.end()) {
      ++report.deleted_bound;
      record_delete(it->second.id, it->second.simplex, DeletionRule::kBound, it->second.beta);
      it = active.erase(it);
    }
  };

  {
    const std::int64_t id = next_id++;
    ++report.nodes_created;
    VertexCache root_cache = MakeVertexCache(s0, f, g);
    const BoundResult root = bound(id, s0, root_cache);
    report.bound_rounds = 1;
    report.root_c_star = root.c_star;
    report.root_beta = root.beta;
    absorb(root, 0);
    if (root.status == BoundStatus::kInfeasible) {
      ++report.deleted_dr1;
      record_delete(id, s0, DeletionRule::kDr1, root.beta);
    } else if (root.c_star <= 0.0) {
      ++report.deleted_dr2;
      record_delete(id, s0, DeletionRule::kDr2, root.beta);
    } else {
      active.emplace(std::make_pair(root.beta, id),
                     internal::Node{id, s0, root.beta, root.witness.x, root.witness.t, 0, std::move(root_cache)});
      prune();
    }
    flush_deletions();
  }

  report.termination = Termination::kOptimal;
  while (!active.empty()) {
    if (report.iterations >= config.max_iters) {
      report.termination = Termination::kIterationLimit;
      break;
    }
    if (report.nodes_created + 2 > config.max_nodes) {
      report.termination = Termination::kNodeLimit;
      break;
    }
    const std::int64_t iter = ++report.iterations;
    auto top = active.begin();
    internal::Node node = std::move(top->second);
    active.erase(top);
    ++report.nodes_explored;

    bool appended = false;
    if (!IsFeasiblePoint(f, node.witness_x, node.witness_t, config.feas_tol)) {
      const OuterCut cut = CuttingPlane(f, node.witness_x, node.witness_t, config.feas_tol);
      Halfspace row = cut.Row();
      if (!poly.HasRow(row)) {
        poly.Append(std::move(row));
        ++report.cuts_added;
        appended = true;
      }
      if (observer != nullptr) observer->OnCut({iter, node.witness_x, node.witness_t, cut, appended});
    }

    const auto edge = LongestEdge(node.simplex);
    const auto [i1, i2] = edge;
    auto [first, second] = Bisect(node.simplex, edge);
    const bool tracing = config.trace != nullptr;
    nlohmann::json children = nlohmann::json::array();
    std::vector<internal::Node> survivors;
    const std::pair<Simplex*, int> kids[] = {{&first, i1}, {&second, i2}};
    for (const auto& [child, replaced] : kids) {
      const std::int64_t id = next_id++;
      ++report.nodes_created;
      VertexCache cache = ChildVertexCache(node.cache, *child, replaced, f, g);
      const BoundResult r = bound(id, *child, cache);
      absorb(r, iter);
      nlohmann::json entry;
      if (tracing) {
        entry = {{"id", id}, {"status", r.status == BoundStatus::kInfeasible ? "infeasible" : "solved"}};
        entry["c_star"] =
            r.status == BoundStatus::kInfeasible ? nlohmann::json(nullptr) : nlohmann::json(r.c_star);
      }
      if (r.status == BoundStatus::kInfeasible) {
        ++report.deleted_dr1;
        record_delete(id, *child, DeletionRule::kDr1, r.beta);
        if (tracing) {
          entry["beta"] = nullptr;
          entry["deleted_by"] = "DR1";
        }
      } else if (r.c_star <= 0.0) {
        ++report.deleted_dr2;
        record_delete(id, *child, DeletionRule::kDr2, r.beta);
        if (tracing) {
          entry["beta"] = r.beta;
          entry["deleted_by"] = "DR2";
        }
      } else {
        const double beta = std::max(node.beta, r.beta);
        if (tracing) {
          entry["beta"] = beta;
          entry["deleted_by"] = nullptr;
        }
        survivors.push_back(
            {id, std::move(*child), beta, r.witness.x, r.witness.t, node.depth + 1, std::move(cache)});
      }
      if (tracing) children.push_back(std::move(entry));
    }
    report.bound_rounds++;

    const double threshold = incumbent.value() - eps_abs();
    if (tracing) {
      for (size_t i = 0, c = 0; i < children.size(); ++i) {
        if (!children[i]["deleted_by"].is_null()) continue;
        if (survivors[c].beta >= threshold) children[i]["deleted_by"] = "bound";
        ++c;
      }
    }
    for (internal::Node& s : survivors) active.emplace(std::make_pair(s.beta, s.id), std::move(s));
    prune();
    flush_deletions();

    const double lower = active.empty() ? incumbent.value() : active.begin()->first.first;
    if (config.trace != nullptr) {
      nlohmann::json line = {{"iter", iter},
                             {"node_id", node.id},
                             {"beta", node.beta},
                             {"alpha", incumbent.value()},
                             {"action", appended ? "cut" : "nocut"},
                             {"children", children},
                             {"cuts_total", report.cuts_added}};
      if (appended) {
        const Halfspace& r = poly.rows().back();
        line["cut"] = {{"s", std::vector<double>(r.x_coef.data(), r.x_coef.data() + r.x_coef.size())},
                       {"c", r.t_coef},
                       {"d", -r.rhs}};
      }
      *config.trace << line.dump() << '\n';
    }
    if (observer != nullptr) observer->OnIteration({iter, incumbent.value(), lower, eps_abs(), active.size(), poly});
  }

  report.optimal_set = incumbent.set();
  report.optimal_value = incumbent.value();
  report.lower_bound = active.empty() ? incumbent.value() : active.begin()->first.first;
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return report;
}

inline nlohmann::json ToJson(const SolveReport& r) {
  auto finite_or_null = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json history = nlohmann::json::array();
  for (const auto& [it, a] : r.alpha_history) history.push_back({it, a});
  return {
      {"optimal_set", r.optimal_set.Elements()},
      {"optimal_value", r.optimal_value},
      {"lower_bound", r.lower_bound},
      {"termination_reason", ToString(r.termination)},
      {"iterations", r.iterations},
      {"bound_rounds", r.bound_rounds},
      {"nodes_created", r.nodes_created},
      {"nodes_explored", r.nodes_explored},
      {"nodes_deleted_dr1", r.deleted_dr1},
      {"nodes_deleted_dr2", r.deleted_dr2},
      {"nodes_deleted_bound", r.deleted_bound},
      {"cuts_added", r.cuts_added},
      {"wall_time_ms", r.wall_time_ms},
      {"t_tilde", r.t_tilde},
      {"initial_alpha", r.initial_alpha},
      {"root", {{"c_star", finite_or_null(r.root_c_star)}, {"beta", finite_or_null(r.root_beta)}}},
      {"alpha_history", history},
      {"config",
       {{"eps", r.config.eps},
        {"feas_tol", r.config.feas_tol},
        {"max_iters", r.config.max_iters},
        {"max_nodes", r.config.max_nodes},
        {"initial_vertex", r.config.initial_vertex.Elements()},
        {"seed", r.config.seed},
        {"enumeration_cap", r.config.enumeration_cap},
        {"reference_bound", r.config.reference_bound}}},
  };
}

}  // namespace dsprog

#endif  // DSPROG_SOLVER_H_
