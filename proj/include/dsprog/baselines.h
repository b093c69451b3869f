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

// Approximate baselines for min f - g: the supermodular-submodular procedure
// and greedy forward selection.

#ifndef DSPROG_BASELINES_H_
#define DSPROG_BASELINES_H_

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "dsprog/set_function.h"

namespace dsprog {

// h(B) = constant + sum_{i in B} weights[i].
struct ModularBound {
  Vector weights;
  double constant = 0.0;

  double operator()(Subset b) const {
    double sum = constant;
    for (int i : b.Elements()) sum += weights[i];
    return sum;
  }
};

// Tight modular lower bound of submodular g at A along the chain of `perm`:
// weights[perm[j]] = g(U_j) - g(U_{j-1}), constant g(empty). `perm` must list
// every element once with the elements of A first.
inline ModularBound ModularLowerBound(const SetFunction& g, Subset a, const std::vector<int>& perm) {
  const int n = g.n();
  if (static_cast<int>(perm.size()) != n) throw InvalidArgument("modular_lower_bound: perm is not a permutation");
  Mask seen = 0;
  for (int e : perm) {
    if (e < 0 || e >= n || ((seen >> e) & 1U)) {
      throw InvalidArgument("modular_lower_bound: perm is not a permutation");
    }
    seen |= Mask{1} << e;
  }
  const int k = a.Size();
  for (int j = 0; j < k; ++j) {
    if (!a.Contains(perm[j])) throw InvalidArgument("modular_lower_bound: A is not a prefix of perm");
  }
  ModularBound h{Vector::Zero(n), g(Subset(0))};
  Mask prefix = 0;
  double prev = h.constant;
  for (int e : perm) {
    prefix |= Mask{1} << e;
    const double cur = g(Subset(prefix));
    h.weights[e] = cur - prev;
    prev = cur;
  }
  return h;
}

struct SspResult {
  Subset set;
  double value = 0.0;
  int iterations = 0;
  std::vector<double> history;  // objective after each accepted step
};

// Supermodular-submodular procedure: repeatedly replace g by a modular lower
// bound h tight at the current set and move to the exact minimizer of f - h
// (by enumeration) while that strictly improves f - g.
inline SspResult Ssp(const SetFunction& f_in, const SetFunction& g_in, Subset init, std::uint64_t seed,
                     int cap = kDefaultEnumerationCap) {
  CheckSameGround(f_in, g_in);
  CheckEnumerable(f_in.n(), cap);
  const int n = f_in.n();
  if (!init.WithinGround(n)) throw InvalidArgument("ssp: init outside ground set");
  const SetFunction f = Tabulate(f_in, cap);
  const SetFunction g = Tabulate(g_in, cap);
  std::mt19937_64 rng(seed);
  const Mask count = Mask{1} << n;

  SspResult out{init, f(init) - g(init), 0, {}};
  out.history.push_back(out.value);
  // Strict descent on a finite lattice: at most 2^n accepted moves.
  for (Mask step = 0; step < count; ++step) {
    std::vector<int> perm = out.set.Elements();
    std::vector<int> rest;
    for (int i = 0; i < n; ++i) {
      if (!out.set.Contains(i)) rest.push_back(i);
    }
    std::shuffle(rest.begin(), rest.end(), rng);
    perm.insert(perm.end(), rest.begin(), rest.end());
    const ModularBound h = ModularLowerBound(g, out.set, perm);

    Subset best(0);
    double best_surrogate = f(Subset(0)) - h(Subset(0));
    for (Mask m = 1; m < count; ++m) {
      double hm = h.constant;
      for (Mask r = m; r != 0; r &= r - 1) hm += h.weights[std::countr_zero(r)];
      const double v = f(Subset(m)) - hm;
      if (v < best_surrogate) {
        best_surrogate = v;
        best = Subset(m);
      }
    }
    const double value = f(best) - g(best);
    if (!(value < out.value - 1e-12)) break;
    out.set = best;
    out.value = value;
    ++out.iterations;
    out.history.push_back(value);
  }
  return out;
}

struct GreedyResult {
  Subset set;
  double value = 0.0;
};

// Forward selection from the empty set: add the element with the most
// negative marginal change of f - g until none is negative.
inline GreedyResult Greedy(const SetFunction& f, const SetFunction& g, int cap = kDefaultEnumerationCap) {
  CheckSameGround(f, g);
  CheckEnumerable(f.n(), cap);
  const int n = f.n();
  GreedyResult out{Subset(0), f(Subset(0)) - g(Subset(0))};
  while (true) {
    int best = -1;
    double best_value = 0.0;
    for (int i = 0; i < n; ++i) {
      if (out.set.Contains(i)) continue;
      const Subset s = out.set.With(i);
      const double v = f(s) - g(s);
      if (best < 0 || v < best_value) {
        best = i;
        best_value = v;
      }
    }
    if (best < 0 || !(best_value < out.value - 1e-12)) break;
    out.set = out.set.With(best);
    out.value = best_value;
  }
  return out;
}

}  // namespace dsprog

#endif  // DSPROG_BASELINES_H_
