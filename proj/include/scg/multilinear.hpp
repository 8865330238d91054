// Copyright 2026 The Authors.
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

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "scg/common.hpp"
#include "scg/objective.hpp"
#include "scg/rng.hpp"

namespace scg {

namespace detail {

inline void check_point(std::span<const double> x, int n) {
  if (int(x.size()) != n)
    throw std::invalid_argument("point dimension does not match ground set");
  for (double v : x) {
    if (!std::isfinite(v) || v < -1e-9 || v > 1.0 + 1e-9)
      throw std::invalid_argument("point coordinates must lie in [0,1]");
  }
}

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// W[mask] = prod_{i in mask} x_i * prod_{i not in mask} (1 - x_i), i.e. the
// probability of drawing exactly `mask` under independent inclusion.
inline std::vector<double> inclusion_weights(std::span<const double> x) {
  const int n = int(x.size());
  std::vector<double> w(std::size_t{1} << n);
  w[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    const double xi = clamp01(x[i]);
    const std::size_t half = std::size_t{1} << i;
    for (std::size_t mask = 0; mask < half; ++mask) {
      const double base = w[mask];
      w[mask | half] = base * xi;
      w[mask] = base * (1.0 - xi);
    }
  }
  return w;
}

}  // namespace detail

// F(x) = sum_S f(S) prod_{i in S} x_i prod_{j not in S} (1 - x_j), computed
// by full enumeration.  n <= 20.
inline double exact_multilinear(const SetObjective& f,
                                std::span<const double> x) {
  detail::check_point(x, f.n());
  const auto& table = f.value_table();  // capability error beyond the cap
  const auto weights = detail::inclusion_weights(x);
  double total = 0.0;
  for (std::size_t mask = 0; mask < table.size(); ++mask)
    total += weights[mask] * table[mask];
  return total;
}

// Coordinate j of the gradient is F(x; x_j <- 1) - F(x; x_j <- 0).  One
// enumeration pass serves every coordinate.
inline GradientVector exact_multilinear_grad(const SetObjective& f,
                                             std::span<const double> x) {
  detail::check_point(x, f.n());
  const auto& table = f.value_table();
  const auto weights = detail::inclusion_weights(x);
  const int n = f.n();
  GradientVector grad(n, 0.0);
  for (std::size_t mask = 0; mask < table.size(); ++mask) {
    const double w = weights[mask];
    if (w == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const std::size_t bit = std::size_t{1} << j;
      grad[j] += w * (table[mask | bit] - table[mask & ~bit]);
    }
  }
  return grad;
}

// Unbiased estimate of the multilinear gradient: draw a scenario z, draw S
// by independent inclusion with probabilities x, and take coordinate i as
// f~(S u {i}, z) - f~(S \ {i}, z); average `batch` such draws.  One shared
// sample S serves all n coordinates of a draw.
inline GradientVector estimate_stochastic_gradient(const SetObjective& f,
                                                   std::span<const double> x,
                                                   int batch, Rng& rng) {
  if (batch < 1) throw std::invalid_argument("batch size must be >= 1");
  detail::check_point(x, f.n());
  const int n = f.n();
  GradientVector acc(n, 0.0);
  std::vector<std::uint8_t> members(n);
  for (int b = 0; b < batch; ++b) {
    const int z = rng.next_index(f.scenario_count());
    for (int i = 0; i < n; ++i)
      members[i] = rng.bernoulli(detail::clamp01(x[i])) ? 1 : 0;
    f.add_scenario_marginals(members, z, acc);
  }
  for (double& v : acc) v /= batch;
  return acc;
}

}  // namespace scg
