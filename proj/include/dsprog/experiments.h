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

// Instance generators and the feature-selection benchmark.
//
// Feature selection: X (n_samples x p) has i.i.d. standard normal entries,
// a support J of size k carries standard normal weights, and
// y = X w + n_samples^{-1/2} ||X w|| eps. The selection objective is
//   lambda * ||X_A||_* + scale * min_w ||y - X_A w||^2,
// written as f - g with f = lambda * nuclear and g = -scale * residual.

#ifndef DSPROG_EXPERIMENTS_H_
#define DSPROG_EXPERIMENTS_H_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dsprog/baselines.h"
#include "dsprog/instance.h"
#include "dsprog/set_function.h"
#include "dsprog/solver.h"

namespace dsprog {

// ---------------------------------------------------------------------------
// Submodular repair.

struct RepairedPair {
  Instance instance;
  std::vector<std::vector<double>> penalty;  // c[i][j] of the added PairPenalty
  double max_penalty = 0.0;
};

// Adds the same h = PairPenalty(c) to f and g, with c[i][j] just above the
// largest positive second difference of f or g on the pair (i, j). Both sums
// are then submodular and f - g is unchanged.
inline RepairedPair RepairToSubmodularPair(const SetFunction& f_in, const SetFunction& g_in) {
  CheckSameGround(f_in, g_in);
  const int n = f_in.n();
  const SetFunction f = Tabulate(f_in);
  const SetFunction g = Tabulate(g_in);
  const Mask count = Mask{1} << n;
  double scale = 1.0;
  for (Mask m = 0; m < count; ++m) scale = std::max({scale, std::abs(f(Subset(m))), std::abs(g(Subset(m)))});
  std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
  for (Mask a = 0; a < count; ++a) {
    for (int i = 0; i < n; ++i) {
      if ((a >> i) & 1U) continue;
      for (int j = i + 1; j < n; ++j) {
        if ((a >> j) & 1U) continue;
        const Subset ai(a | (Mask{1} << i));
        const Subset aj(a | (Mask{1} << j));
        const Subset aij(ai.mask() | aj.mask());
        for (const SetFunction* h : {&f, &g}) {
          c[i][j] = std::max(c[i][j], (*h)(aij) - (*h)(ai) - (*h)(aj) + (*h)(Subset(a)));
        }
      }
    }
  }
  RepairedPair out{Instance{f_in, g_in}, {}, 0.0};
  bool any = false;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      // Positive second differences at rounding level are not violations.
      if (c[i][j] > 1e-12 * scale) {
        c[i][j] = c[i][j] * (1.0 + 1e-6) + 1e-9 * scale;
        any = true;
      } else {
        c[i][j] = 0.0;
      }
      c[j][i] = c[i][j];
      out.max_penalty = std::max(out.max_penalty, c[i][j]);
    }
  }
  out.penalty = c;
  if (any) {
    const SetFunction h = PairPenalty(std::move(c));
    out.instance = Instance{Sum({f_in, h}), Sum({g_in, h})};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Feature selection.

enum class ResidualScale {
  kRaw,       // ||y - X_A w||^2
  kHalfMean,  // ||y - X_A w||^2 / (2 n_samples)
};

struct FsInstanceSpec {
  int p = 10;
  int n_samples = 40;
  int k = 3;
  double lambda = 0.1;
  std::uint64_t seed = 0;
  ResidualScale residual_scale = ResidualScale::kHalfMean;
  double noise_scale = 1.0;  // 0 gives y = X w exactly
  int test_samples = 100;
};

struct FsInstance {
  Instance instance;
  DenseMatrix x_train;
  Vector y_train;
  DenseMatrix x_test;
  Vector y_test;
  std::vector<int> support;
  Vector weights;
};

namespace internal {

inline DenseMatrix GaussianMatrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix x(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) x(r, c) = normal(rng);
  }
  return x;
}

inline Vector NoisyResponse(const DenseMatrix& x, const Vector& w, double noise_scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Vector clean = x * w;
  const double sigma = clean.norm() / std::sqrt(static_cast<double>(x.rows()));
  Vector y = clean;
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += noise_scale * sigma * normal(rng);
  return y;
}

}  // namespace internal

inline FsInstance GenFeatureSelection(const FsInstanceSpec& spec) {
  if (spec.p < 1 || spec.n_samples < 1 || spec.k < 1 || spec.k > spec.p || spec.test_samples < 1) {
    throw InvalidArgument("feature selection: need 1 <= k <= p and positive sample counts");
  }
  if (!(spec.lambda >= 0.0) || !(spec.noise_scale >= 0.0)) {
    throw InvalidArgument("feature selection: lambda and noise_scale must be >= 0");
  }
  std::mt19937_64 rng(spec.seed);
  DenseMatrix x_train = internal::GaussianMatrix(spec.n_samples, spec.p, rng);
  std::vector<int> perm(spec.p);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> support(perm.begin(), perm.begin() + spec.k);
  std::sort(support.begin(), support.end());
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector weights = Vector::Zero(spec.p);
  for (int j : support) weights[j] = normal(rng);
  Vector y_train = internal::NoisyResponse(x_train, weights, spec.noise_scale, rng);
  DenseMatrix x_test = internal::GaussianMatrix(spec.test_samples, spec.p, rng);
  Vector y_test = internal::NoisyResponse(x_test, weights, spec.noise_scale, rng);

  const double scale =
      spec.residual_scale == ResidualScale::kHalfMean ? 1.0 / (2.0 * spec.n_samples) : 1.0;
  Instance instance{Nuclear(x_train, spec.lambda), NegResidual(x_train, y_train, scale)};
  return FsInstance{std::move(instance), std::move(x_train), std::move(y_train), std::move(x_test),
                    std::move(y_test),   std::move(support), std::move(weights)};
}

// Normalized squared prediction error ||X_A w_A - y||^2 / ||y||^2 of the
// least-squares fit on support A, evaluated on (x_eval, y_eval).
inline double NormalizedError(const DenseMatrix& x_fit, const Vector& y_fit, const DenseMatrix& x_eval,
                              const Vector& y_eval, Subset a) {
  const double denom = y_eval.squaredNorm();
  if (a.Empty()) return denom > 0.0 ? 1.0 : 0.0;
  const auto fit = numerics::LeastSquares(internal::SelectColumns(x_fit, a.mask()), y_fit);
  const Vector pred = internal::SelectColumns(x_eval, a.mask()) * fit.weights;
  return denom > 0.0 ? (pred - y_eval).squaredNorm() / denom : 0.0;
}

// ---------------------------------------------------------------------------
// Random D.S. corpus.

enum class DsFamily {
  kCutMinusModular,
  kCoverageMinusCoverage,
  kNuclearMinusResidual,
  kTableRandomSubmodularPair,
};

inline const std::vector<DsFamily>& AllFamilies() {
  static const std::vector<DsFamily> kAll = {DsFamily::kCutMinusModular, DsFamily::kCoverageMinusCoverage,
                                             DsFamily::kNuclearMinusResidual,
                                             DsFamily::kTableRandomSubmodularPair};
  return kAll;
}

inline const char* ToString(DsFamily f) {
  switch (f) {
    case DsFamily::kCutMinusModular:
      return "cut_minus_modular";
    case DsFamily::kCoverageMinusCoverage:
      return "coverage_minus_coverage";
    case DsFamily::kNuclearMinusResidual:
      return "nuclear_minus_residual";
    case DsFamily::kTableRandomSubmodularPair:
      return "table_random_submodular_pair";
  }
  return "unknown";
}

inline DsFamily FamilyFromString(const std::string& s) {
  for (DsFamily f : AllFamilies()) {
    if (s == ToString(f)) return f;
  }
  throw InvalidArgument("unknown family '" + s + "'");
}

namespace internal {

inline SetFunction RandomCut(int n, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(0.5);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (keep(rng)) edges.push_back({u, v, weight(rng)});
    }
  }
  return Cut(n, std::move(edges));
}

inline SetFunction RandomCoverage(int n, int items, double density, double weight_scale, std::mt19937_64& rng) {
  std::bernoulli_distribution covers(density);
  std::uniform_real_distribution<double> weight(0.0, weight_scale);
  std::vector<double> w(items);
  for (double& x : w) x = weight(rng);
  std::vector<std::vector<int>> cv(n);
  for (int i = 0; i < n; ++i) {
    for (int it = 0; it < items; ++it) {
      if (covers(rng)) cv[i].push_back(it);
    }
  }
  return Coverage(std::move(w), std::move(cv));
}

// Sum of concave-of-nonnegative-modular terms plus a modular part, tabulated.
inline SetFunction RandomSubmodularTable(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> shape(0, 2);
  const int terms = 3;
  std::vector<std::vector<double>> w(terms, std::vector<double>(n));
  std::vector<int> kind(terms);
  std::vector<double> cap(terms);
  for (int t = 0; t < terms; ++t) {
    for (double& x : w[t]) x = unit(rng) < 0.3 ? 0.0 : unit(rng);
    kind[t] = shape(rng);
    cap[t] = 0.5 + unit(rng) * n / 4.0;
  }
  std::vector<double> modular(n);
  for (double& x : modular) x = 2.0 * unit(rng) - 1.0;
  const Mask count = Mask{1} << n;
  std::vector<double> values(count);
  for (Mask m = 0; m < count; ++m) {
    double v = 0.0;
    for (int t = 0; t < terms; ++t) {
      double z = 0.0;
      for (Mask r = m; r != 0; r &= r - 1) z += w[t][std::countr_zero(r)];
      switch (kind[t]) {
        case 0:
          v += std::sqrt(z);
          break;
        case 1:
          v += std::log1p(z);
          break;
        default:
          v += std::min(z, cap[t]);
          break;
      }
    }
    for (Mask r = m; r != 0; r &= r - 1) v += modular[std::countr_zero(r)];
    values[m] = v;
  }
  return Table(std::move(values), Modularity::kSubmodular);
}

inline Instance DrawDs(int n, DsFamily family, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (family) {
    case DsFamily::kCutMinusModular: {
      SetFunction f = RandomCut(n, rng);
      std::vector<double> w(n);
      for (int i = 0; i < n; ++i) {
        const double degree = f(Subset(Mask{1} << i));
        w[i] = degree * (unit(rng) * 1.2 - 0.2);
      }
      return Instance{std::move(f), Modular(std::move(w))};
    }
    case DsFamily::kCoverageMinusCoverage: {
      const int items = 2 * n;
      SetFunction f = RandomCoverage(n, items, 0.3, 1.0, rng);
      SetFunction g = RandomCoverage(n, items, 0.3, 1.3, rng);
      return Instance{std::move(f), std::move(g)};
    }
    case DsFamily::kNuclearMinusResidual: {
      FsInstanceSpec spec;
      spec.p = n;
      spec.n_samples = 3 * n;
      spec.k = std::max(1, n / 3);
      spec.lambda = 0.02 + 0.2 * unit(rng);
      spec.seed = rng();
      spec.test_samples = 1;
      const FsInstance fs = GenFeatureSelection(spec);
      return RepairToSubmodularPair(fs.instance.f, fs.instance.g).instance;
    }
    case DsFamily::kTableRandomSubmodularPair: {
      SetFunction f = RandomSubmodularTable(n, rng);
      SetFunction g = RandomSubmodularTable(n, rng);
      return Instance{std::move(f), std::move(g)};
    }
  }
  throw InvalidArgument("unknown family");
}

}  // namespace internal

// Seeded random instance whose f and g both pass the exhaustive four-point
// check; up to 100 draws are attempted.
inline Instance GenRandomDs(int n, DsFamily family, std::uint64_t seed) {
  if (n < 1 || n > 10) throw InvalidArgument("gen_random_ds: n must be in 1..10");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Instance inst = internal::DrawDs(n, family, rng);
    if (IsSubmodular(inst.f) && IsSubmodular(inst.g)) return inst;
  }
  throw InvalidArgument(std::string("gen_random_ds: no submodular pair for family ") + ToString(family) +
                        " after 100 draws");
}

// ---------------------------------------------------------------------------
// Benchmark.

struct BenchRow {
  std::string method;
  int p = 0;
  int n_samples = 0;
  int k = 0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  double objective = 0.0;
  int card = 0;
  double train_err = 0.0;
  double test_err = 0.0;
  double wall_ms = 0.0;

  bool operator==(const BenchRow&) const = default;
};

struct BenchAggregate {
  std::string method;
  double lambda = 0.0;
  int reps = 0;
  int certified = 0;  // prism runs that ended with termination "optimal"
  double objective = 0.0;
  double card = 0.0;
  double train_err = 0.0;
  double test_err = 0.0;
  double wall_ms = 0.0;
};

struct BenchConfig {
  int p = 10;
  int n_samples = 40;
  int k = 3;
  std::vector<double> lambdas = {0.01, 0.05, 0.1, 0.5};
  int reps = 10;
  std::uint64_t seed = 7;
  std::vector<std::string> methods = {"prism", "ssp", "greedy"};
  ResidualScale residual_scale = ResidualScale::kHalfMean;
  // Solver settings for prism; max_iters bounds each run. The returned set is
  // the best found either way, and BenchOutput records which runs finished.
  SolverConfig solver = [] {
    SolverConfig c;
    c.max_iters = 200'000;
    return c;
  }();
};

struct BenchOutput {
  std::vector<BenchRow> rows;
  // Per row: the solver's termination reason for prism rows, "heuristic"
  // for the others.
  std::vector<std::string> status;
};

inline constexpr const char* kBenchCsvHeader =
    "method,p,n,k,lambda,seed,objective,card,train_err,test_err,wall_ms";

// Dataset seed for repetition `rep`: one splitmix64 step from the suite seed.
inline std::uint64_t RepSeed(std::uint64_t suite_seed, int rep) {
  std::uint64_t z = suite_seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(rep + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Rows in (rep, lambda, method) order. Methods: prism (exact), ssp, greedy.
// prism and ssp run on the submodular repair of (f, g); all objectives are
// reported on the original f - g.
inline BenchOutput RunBench(const BenchConfig& config) {
  using Clock = std::chrono::steady_clock;
  BenchOutput out;
  for (const std::string& m : config.methods) {
    if (m != "prism" && m != "ssp" && m != "greedy") throw InvalidArgument("bench: unknown method '" + m + "'");
  }
  for (int rep = 0; rep < config.reps; ++rep) {
    const std::uint64_t seed = RepSeed(config.seed, rep);
    for (double lambda : config.lambdas) {
      FsInstanceSpec spec;
      spec.p = config.p;
      spec.n_samples = config.n_samples;
      spec.k = config.k;
      spec.lambda = lambda;
      spec.seed = seed;
      spec.residual_scale = config.residual_scale;
      const FsInstance fs = GenFeatureSelection(spec);
      const SetFunction f = Tabulate(fs.instance.f);
      const SetFunction g = Tabulate(fs.instance.g);
      const RepairedPair repaired = RepairToSubmodularPair(f, g);
      for (const std::string& method : config.methods) {
        const auto start = Clock::now();
        Subset chosen;
        std::string status = "heuristic";
        if (method == "prism") {
          const SolveReport r = Solve(repaired.instance.f, repaired.instance.g, config.solver);
          chosen = r.optimal_set;
          status = ToString(r.termination);
        } else if (method == "ssp") {
          chosen = Ssp(repaired.instance.f, repaired.instance.g, Subset(0), seed).set;
        } else {
          chosen = Greedy(f, g).set;
        }
        const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
        BenchRow row;
        row.method = method;
        row.p = config.p;
        row.n_samples = config.n_samples;
        row.k = config.k;
        row.lambda = lambda;
        row.seed = seed;
        row.objective = f(chosen) - g(chosen);
        row.card = chosen.Size();
        row.train_err = NormalizedError(fs.x_train, fs.y_train, fs.x_train, fs.y_train, chosen);
        row.test_err = NormalizedError(fs.x_train, fs.y_train, fs.x_test, fs.y_test, chosen);
        row.wall_ms = ms;
        out.rows.push_back(row);
        out.status.push_back(status);
      }
    }
  }
  return out;
}

// Per (method, lambda) means, in first-appearance order. `status` may be
// empty; otherwise it is BenchOutput::status.
inline std::vector<BenchAggregate> Aggregate(const std::vector<BenchRow>& rows,
                                             const std::vector<std::string>& status = {}) {
  std::vector<BenchAggregate> out;
  for (size_t k = 0; k < rows.size(); ++k) {
    const BenchRow& r = rows[k];
    auto it = std::find_if(out.begin(), out.end(), [&](const BenchAggregate& a) {
      return a.method == r.method && a.lambda == r.lambda;
    });
    if (it == out.end()) {
      out.push_back({r.method, r.lambda});
      it = std::prev(out.end());
    }
    ++it->reps;
    if (k < status.size() && status[k] == "optimal") ++it->certified;
    it->objective += r.objective;
    it->card += r.card;
    it->train_err += r.train_err;
    it->test_err += r.test_err;
    it->wall_ms += r.wall_ms;
  }
  for (BenchAggregate& a : out) {
    a.objective /= a.reps;
    a.card /= a.reps;
    a.train_err /= a.reps;
    a.test_err /= a.reps;
    a.wall_ms /= a.reps;
  }
  return out;
}

inline void WriteCsv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchCsvHeader << '\n';
  std::ostringstream line;
  line.precision(17);
  for (const BenchRow& r : rows) {
    line.str("");
    line << r.method << ',' << r.p << ',' << r.n_samples << ',' << r.k << ',' << r.lambda << ',' << r.seed << ','
         << r.objective << ',' << r.card << ',' << r.train_err << ',' << r.test_err << ',' << r.wall_ms;
    out << line.str() << '\n';
  }
}

inline void WriteAggregateCsv(std::ostream& out, const std::vector<BenchAggregate>& aggs) {
  out << "method,lambda,reps,certified,objective,card,train_err,test_err,wall_ms\n";
  std::ostringstream line;
  line.precision(10);
  for (const BenchAggregate& a : aggs) {
    line.str("");
    line << a.method << ',' << a.lambda << ',' << a.reps << ',' << a.certified << ',' << a.objective << ',' << a.card << ','
         << a.train_err << ',' << a.test_err << ',' << a.wall_ms;
    out << line.str() << '\n';
  }
}

inline std::vector<BenchRow> ParseCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kBenchCsvHeader) throw InvalidArgument("bench csv: bad header");
  std::vector<BenchRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 11) throw InvalidArgument("bench csv: expected 11 fields");
    try {
      BenchRow r;
      r.method = f[0];
      r.p = std::stoi(f[1]);
      r.n_samples = std::stoi(f[2]);
      r.k = std::stoi(f[3]);
      r.lambda = std::stod(f[4]);
      r.seed = std::stoull(f[5]);
      r.objective = std::stod(f[6]);
      r.card = std::stoi(f[7]);
      r.train_err = std::stod(f[8]);
      r.test_err = std::stod(f[9]);
      r.wall_ms = std::stod(f[10]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw InvalidArgument("bench csv: malformed number in line '" + line + "'");
    }
  }
  return rows;
}

}  // namespace dsprog

#endif  // DSPROG_EXPERIMENTS_H_
