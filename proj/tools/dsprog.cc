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


// Command-line front end: solve, baseline, bench and verify.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dsprog/baselines.h"
#include "dsprog/experiments.h"
#include "dsprog/instance.h"
#include "dsprog/solver.h"

namespace {

using dsprog::Subset;

Subset ParseElements(const std::string& text) {
  std::vector<int> elems;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) continue;
    try {
      elems.push_back(std::stoi(tok));
    } catch (const std::logic_error&) {
      throw dsprog::InvalidArgument("bad element '" + tok + "'");
    }
  }
  return Subset::FromElements(elems);
}

std::vector<double> ParseDoubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::logic_error&) {
      throw dsprog::InvalidArgument("bad number '" + tok + "'");
    }
  }
  if (out.empty()) throw dsprog::InvalidArgument("empty number list");
  return out;
}

void WriteJson(const nlohmann::json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw dsprog::InvalidArgument("cannot write " + path);
  out << j.dump(2) << '\n';
}

struct SolveArgs {
  std::string instance;
  double eps = 1e-9;
  std::int64_t max_iters = 10'000'000;
  std::string trace;
  std::string report;
  std::string initial_vertex;
};

int RunSolve(const SolveArgs& a) {
  const dsprog::Instance inst = dsprog::LoadInstance(a.instance);
  dsprog::SolverConfig config;
  config.eps = a.eps;
  config.max_iters = a.max_iters;
  config.initial_vertex = ParseElements(a.initial_vertex);
  std::ofstream trace;
  if (!a.trace.empty()) {
    trace.open(a.trace);
    if (!trace) throw dsprog::InvalidArgument("cannot write " + a.trace);
    config.trace = &trace;
  }
  const dsprog::SolveReport r = dsprog::Solve(inst.f, inst.g, config);
  WriteJson(dsprog::ToJson(r), a.report);
  if (!a.report.empty() && a.report != "-") {
    std::cout << "optimal_value " << r.optimal_value << " set " << nlohmann::json(r.optimal_set.Elements()).dump()
              << " termination " << dsprog::ToString(r.termination) << " iterations " << r.iterations << '\n';
  }
  return 0;
}

struct BaselineArgs {
  std::string method;
  std::string instance;
  std::uint64_t seed = 0;
  std::string init;
  std::string report;
};

int RunBaseline(const BaselineArgs& a) {
  const dsprog::Instance inst = dsprog::LoadInstance(a.instance);
  nlohmann::json j = {{"method", a.method}};
  if (a.method == "ssp") {
    const Subset init = ParseElements(a.init);
    const dsprog::SspResult r = dsprog::Ssp(inst.f, inst.g, init, a.seed);
    j["set"] = r.set.Elements();
    j["value"] = r.value;
    j["iterations"] = r.iterations;
    j["history"] = r.history;
    j["seed"] = a.seed;
    j["init"] = init.Elements();
  } else {
    const dsprog::GreedyResult r = dsprog::Greedy(inst.f, inst.g);
    j["set"] = r.set.Elements();
    j["value"] = r.value;
  }
  WriteJson(j, a.report);
  return 0;
}

struct BenchArgs {
  std::string suite = "fs";
  int p = 10;
  int n = 40;
  int k = 3;
  std::string lambdas = "0.01,0.05,0.1,0.5";
  int reps = 10;
  std::uint64_t seed = 7;
  std::string out;
  std::string summary;
  std::string residual_scale = "half_mean";
  std::int64_t max_iters = 200'000;
  std::vector<std::string> methods = {"prism", "ssp", "greedy"};
};

int RunBenchCommand(const BenchArgs& a) {
  dsprog::BenchConfig config;
  config.p = a.p;
  config.n_samples = a.n;
  config.k = a.k;
  config.lambdas = ParseDoubles(a.lambdas);
  config.reps = a.reps;
  config.seed = a.seed;
  config.methods = a.methods;
  config.residual_scale =
      a.residual_scale == "raw" ? dsprog::ResidualScale::kRaw : dsprog::ResidualScale::kHalfMean;
  config.solver.max_iters = a.max_iters;
  const dsprog::BenchOutput out = dsprog::RunBench(config);
  if (a.out.empty() || a.out == "-") {
    dsprog::WriteCsv(std::cout, out.rows);
  } else {
    std::ofstream csv(a.out);
    if (!csv) throw dsprog::InvalidArgument("cannot write " + a.out);
    dsprog::WriteCsv(csv, out.rows);
  }
  const auto agg = dsprog::Aggregate(out.rows, out.status);
  if (!a.summary.empty()) {
    std::ofstream s(a.summary);
    if (!s) throw dsprog::InvalidArgument("cannot write " + a.summary);
    dsprog::WriteAggregateCsv(s, agg);
  } else if (!a.out.empty() && a.out != "-") {
    dsprog::WriteAggregateCsv(std::cout, agg);
  }
  return 0;
}

struct VerifyArgs {
  int n = 8;
  std::string families = "all";
  int reps = 50;
  std::uint64_t seed = 1;
  std::int64_t max_iters = 10'000'000;
};

int RunVerify(const VerifyArgs& a) {
  std::vector<dsprog::DsFamily> families;
  if (a.families == "all") {
    families = dsprog::AllFamilies();
  } else {
    std::stringstream ss(a.families);
    for (std::string tok; std::getline(ss, tok, ',');) families.push_back(dsprog::FamilyFromString(tok));
  }
  dsprog::SolverConfig config;
  config.max_iters = a.max_iters;
  int mismatches = 0;
  for (dsprog::DsFamily family : families) {
    int exact = 0;
    int certified = 0;
    double ms = 0.0;
    for (int rep = 0; rep < a.reps; ++rep) {
      const std::uint64_t seed = dsprog::RepSeed(a.seed, rep);
      const dsprog::Instance inst = dsprog::GenRandomDs(a.n, family, seed);
      const dsprog::SolveReport r = dsprog::Solve(inst.f, inst.g, config);
      const dsprog::SetMinimum bf = dsprog::BruteForceDsMin(inst.f, inst.g);
      const double tol = 1e-8 * std::max(1.0, std::abs(bf.value));
      const double got = inst.f(r.optimal_set) - inst.g(r.optimal_set);
      ms += r.wall_time_ms;
      if (std::abs(got - bf.value) <= tol && std::abs(r.optimal_value - bf.value) <= tol) {
        ++exact;
      } else {
        ++mismatches;
        std::cout << "MISMATCH family=" << dsprog::ToString(family) << " seed=" << seed << " solve=" << got
                  << " brute_force=" << bf.value << '\n';
      }
      if (r.termination == dsprog::Termination::kOptimal) ++certified;
    }
    std::cout << dsprog::ToString(family) << " n=" << a.n << " exact=" << exact << "/" << a.reps
              << " certified=" << certified << "/" << a.reps << " total_ms=" << ms << '\n';
  }
  return mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact minimization of a difference of submodular functions"};
  app.require_subcommand(1);

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve an instance exactly");
  solve_cmd->add_option("--instance", solve.instance, "Instance JSON file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--eps", solve.eps, "Relative pruning tolerance")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--max-iters", solve.max_iters, "Iteration budget")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--trace", solve.trace, "Trace output (JSON lines)");
  solve_cmd->add_option("--report", solve.report, "Report JSON (default stdout)");
  solve_cmd->add_option("--initial-vertex", solve.initial_vertex, "Anchor cube vertex, comma-separated elements");

  BaselineArgs baseline;
  CLI::App* baseline_cmd = app.add_subcommand("baseline", "Run an approximate baseline");
  baseline_cmd->add_option("--method", baseline.method, "ssp or greedy")
      ->required()
      ->check(CLI::IsMember({"ssp", "greedy"}));
  baseline_cmd->add_option("--instance", baseline.instance, "Instance JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  baseline_cmd->add_option("--seed", baseline.seed, "Seed for the SSP permutation");
  baseline_cmd->add_option("--init", baseline.init, "SSP start set, comma-separated elements");
  baseline_cmd->add_option("--report", baseline.report, "Report JSON (default stdout)");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Feature-selection benchmark");
  bench_cmd->add_option("--suite", bench.suite, "Suite name")->check(CLI::IsMember({"fs"}));
  bench_cmd->add_option("--p", bench.p, "Features")->check(CLI::Range(1, 16));
  bench_cmd->add_option("--n", bench.n, "Training samples")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--k", bench.k, "True support size")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--lambdas", bench.lambdas, "Comma-separated regularization grid");
  bench_cmd->add_option("--reps", bench.reps, "Datasets per lambda")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "Suite seed");
  bench_cmd->add_option("--out", bench.out, "Row CSV (default stdout)");
  bench_cmd->add_option("--summary", bench.summary, "Per-lambda aggregate CSV");
  bench_cmd->add_option("--residual-scale", bench.residual_scale, "half_mean or raw")
      ->check(CLI::IsMember({"half_mean", "raw"}));
  bench_cmd->add_option("--max-iters", bench.max_iters, "Iteration budget per exact solve")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--methods", bench.methods, "Methods to run")->delimiter(',');

  VerifyArgs verify;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Check solve against brute force on random instances");
  verify_cmd->add_option("--n", verify.n, "Ground set size")->check(CLI::Range(1, 10));
  verify_cmd->add_option("--families", verify.families, "all or comma-separated family names");
  verify_cmd->add_option("--reps", verify.reps, "Instances per family")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify.seed, "Corpus seed");
  verify_cmd->add_option("--max-iters", verify.max_iters, "Iteration budget per solve")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return RunSolve(solve);
    if (*baseline_cmd) return RunBaseline(baseline);
    if (*bench_cmd) return RunBenchCommand(bench);
    if (*verify_cmd) return RunVerify(verify);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
