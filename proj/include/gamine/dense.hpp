// Copyright 2026 The Gamine Authors.
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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gamine/errors.hpp"
#include "gamine/graph.hpp"

namespace gamine {

inline constexpr std::size_t kDefaultOracleLimit = 2000;

inline Eigen::MatrixXd dense_transition(const RecGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (NodeId i = 0; i < g.size(); ++i) {
    for (const auto& e : g.out_edges(i)) P(i, e.target) = e.prob;
  }
  return P;
}

// Exact F = (I - P)^{-1} by partial-pivoting LU.
inline Eigen::MatrixXd dense_fundamental(
    const RecGraph& g, std::size_t limit = kDefaultOracleLimit) {
  if (g.size() > limit) {
    throw SizeLimitError("dense fundamental matrix requested for n = " +
                         std::to_string(g.size()) + " > limit " +
                         std::to_string(limit));
  }
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - dense_transition(g);
  return A.partialPivLu().inverse();
}

inline Eigen::VectorXd as_eigen(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace gamine
