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

// JSON instance files: {"n": int, "f": <spec>, "g": <spec>}, where <spec> is
// {"type": "modular"|"cut"|"nuclear"|"neg_residual"|"gaussian_entropy"|
//  "cardinality_concave"|"table"|"coverage"|"pair_penalty"|"sum", ...params}.

#ifndef DSPROG_INSTANCE_H_
#define DSPROG_INSTANCE_H_

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsprog/set_function.h"

namespace dsprog {

// Minimize f(A) - g(A) over subsets of {0..n-1}.
struct Instance {
  SetFunction f;
  SetFunction g;

  int n() const { return f.n(); }
};

namespace internal {

inline DenseMatrix MatrixFromJson(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InvalidArgument(std::string(what) + ": expected nonempty matrix");
  const size_t rows = j.size();
  const size_t cols = j[0].size();
  DenseMatrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InvalidArgument(std::string(what) + ": ragged matrix");
    for (size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

template <typename T>
T Require(const nlohmann::json& spec, const char* key) {
  if (!spec.contains(key)) {
    throw InvalidArgument(spec.value("type", std::string("?")) + ": missing field '" + key + "'");
  }
  return spec.at(key).get<T>();
}

}  // namespace internal

// Builds an oracle from its JSON spec and checks it lives on a ground set of
// size n (pass n <= 0 to skip the check).
inline SetFunction MakeFunction(const nlohmann::json& spec, int n = 0) {
  if (!spec.is_object() || !spec.contains("type")) throw InvalidArgument("function spec needs a \"type\"");
  const std::string type = spec.at("type").get<std::string>();
  auto sized = [n, &type](SetFunction f) {
    if (n > 0 && f.n() != n) {
      throw InvalidArgument(type + ": ground set size " + std::to_string(f.n()) +
                            " does not match n = " + std::to_string(n));
    }
    return f;
  };
  try {
    if (type == "modular") {
      return sized(Modular(internal::Require<std::vector<double>>(spec, "weights"), spec.value("offset", 0.0)));
    }
    if (type == "cardinality_concave") {
      return sized(CardinalityConcave(internal::Require<std::vector<double>>(spec, "phi")));
    }
    if (type == "cut") {
      const int size = spec.value("n", n);
      if (size < 1) throw InvalidArgument("cut: ground set size unknown");
      std::vector<Edge> edges;
      for (const auto& e : spec.at("edges")) {
        if (!e.is_array() || e.size() != 3) throw InvalidArgument("cut: edges are [u, v, weight]");
        edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
      }
      return sized(Cut(size, std::move(edges)));
    }
    if (type == "nuclear") {
      return sized(Nuclear(internal::MatrixFromJson(spec.at("X"), "nuclear"), spec.value("lambda", 1.0)));
    }
    if (type == "neg_residual") {
      const auto y = internal::Require<std::vector<double>>(spec, "y");
      return sized(NegResidual(internal::MatrixFromJson(spec.at("X"), "neg_residual"),
                               Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(y.size())),
                               spec.value("scale", 1.0)));
    }
    if (type == "gaussian_entropy") {
      return sized(GaussianEntropy(internal::MatrixFromJson(spec.at("sigma"), "gaussian_entropy")));
    }
    if (type == "table") {
      return sized(Table(internal::Require<std::vector<double>>(spec, "values")));
    }
    if (type == "coverage") {
      return sized(Coverage(internal::Require<std::vector<double>>(spec, "weights"),
                            internal::Require<std::vector<std::vector<int>>>(spec, "covers")));
    }
    if (type == "pair_penalty") {
      return sized(PairPenalty(internal::Require<std::vector<std::vector<double>>>(spec, "c")));
    }
    if (type == "sum") {
      std::vector<SetFunction> terms;
      for (const auto& t : spec.at("terms")) terms.push_back(MakeFunction(t, n));
      return sized(Sum(std::move(terms)));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(type + ": malformed spec: " + e.what());
  }
  throw InvalidArgument("unknown function type '" + type + "'");
}

inline Instance InstanceFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("f") || !j.contains("g")) {
    throw InvalidArgument("instance needs fields n, f, g");
  }
  const int n = j.at("n").get<int>();
  if (n < 1 || n > kMaxGroundSet) throw InvalidArgument("instance: n out of range");
  return Instance{MakeFunction(j.at("f"), n), MakeFunction(j.at("g"), n)};
}

inline nlohmann::json InstanceToJson(const Instance& inst) {
  return {{"n", inst.n()}, {"f", inst.f.spec()}, {"g", inst.g.spec()}};
}

inline Instance LoadInstance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open instance file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("instance file " + path + " is not valid JSON: " + e.what());
  }
  return InstanceFromJson(j);
}

inline void SaveInstance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << InstanceToJson(inst).dump(2) << '\n';
}

}  // namespace dsprog

#endif  // DSPROG_INSTANCE_H_
