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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "scg/common.hpp"
#include "scg/constraint.hpp"
#include "scg/rng.hpp"

namespace scg {

struct RoundingOutcome {
  Subset set;
  int cardinality = 0;
  std::optional<double> value;  // filled by callers that evaluate the set
};

namespace detail {

// Snap float residue from x = sum(v_t / T) and pull any block that
// overshoots its cap by tolerance slack back onto the polytope, so the
// rounded output is feasible unconditionally.
inline std::vector<double> sanitize_fractional(std::span<const double> x,
                                               const Constraint& c) {
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) {
    if (v < 1e-12) v = 0.0;
    if (v > 1.0 - 1e-12) v = 1.0;
  }
  // Shrink only the fractional coordinates; snapped 0/1 entries stay put.
  const auto rescale = [&](std::span<const int> idx, double cap) {
    double integral = 0.0, fractional = 0.0;
    for (int i : idx) {
      if (out[i] == 0.0 || out[i] == 1.0)
        integral += out[i];
      else
        fractional += out[i];
    }
    if (integral + fractional > cap && fractional > 0.0) {
      const double scale = std::max(0.0, cap - integral) / fractional;
      for (int i : idx)
        if (out[i] != 0.0 && out[i] != 1.0) out[i] *= scale;
    }
  };
  if (c.kind() == Constraint::Kind::kCardinality) {
    std::vector<int> all(c.dimension());
    for (int i = 0; i < c.dimension(); ++i) all[i] = i;
    rescale(all, double(c.cardinality_cap()));
  } else {
    const int nb = int(c.caps().size());
    for (int b = 0; b < nb; ++b) {
      std::vector<int> idx;
      for (int i = 0; i < c.dimension(); ++i)
        if (c.block_of()[i] == b) idx.push_back(i);
      rescale(idx, double(c.caps()[b]));
    }
  }
  return out;
}

// Rounds the coordinates listed in `idx` (one cardinality/partition block;
// their sum is conserved until at most one fractional coordinate is left).
inline void pipage_block(std::vector<double>& x, std::span<const int> idx,
                         Rng& rng) {
  const auto fractional = [&](int i) { return x[i] > 0.0 && x[i] < 1.0; };
  while (true) {
    int first = -1, second = -1;
    for (int i : idx) {
      if (!fractional(i)) continue;
      if (first < 0) {
        first = i;
      } else {
        second = i;
        break;
      }
    }
    if (second < 0) break;

    // Move along (e_first - e_second) to a segment endpoint, choosing each
    // endpoint with probability proportional to the opposite length; the
    // saturated coordinate is written exactly as 0 or 1.
    const double up = std::min(1.0 - x[first], x[second]);
    const double down = std::min(x[first], 1.0 - x[second]);
    if (rng.next_double() * (up + down) < down) {
      if (1.0 - x[first] <= x[second]) {
        x[second] -= 1.0 - x[first];
        x[first] = 1.0;
      } else {
        x[first] += x[second];
        x[second] = 0.0;
      }
    } else {
      if (x[first] <= 1.0 - x[second]) {
        x[second] += x[first];
        x[first] = 0.0;
      } else {
        x[first] -= 1.0 - x[second];
        x[second] = 1.0;
      }
    }
  }
  for (int i : idx) {
    if (x[i] > 0.0 && x[i] < 1.0) x[i] = rng.bernoulli(x[i]) ? 1.0 : 0.0;
  }
}

}  // namespace detail

// Randomized pipage rounding: repeatedly shifts mass between two
// fractional coordinates of the same block until the point is integral.
// Oblivious to f; preserves per-element marginals, and for monotone
// submodular objectives the output's expected value dominates the
// multilinear value of x.
inline RoundingOutcome pipage_round(std::span<const double> x,
                                    const Constraint& c, Rng& rng) {
  if (int(x.size()) != c.dimension())
    throw std::invalid_argument("point dimension mismatch");
  if (c.kind() == Constraint::Kind::kOracle)
    throw capability_error(
        "pipage rounding supports cardinality and partition constraints");
  if (!is_feasible(x, c, 1e-6))
    throw std::invalid_argument("point to round must be feasible");

  std::vector<double> work = detail::sanitize_fractional(x, c);
  if (c.kind() == Constraint::Kind::kCardinality) {
    std::vector<int> all(c.dimension());
    for (int i = 0; i < c.dimension(); ++i) all[i] = i;
    detail::pipage_block(work, all, rng);
  } else {
    const int nb = int(c.caps().size());
    for (int b = 0; b < nb; ++b) {
      std::vector<int> idx;
      for (int i = 0; i < c.dimension(); ++i)
        if (c.block_of()[i] == b) idx.push_back(i);
      detail::pipage_block(work, idx, rng);
    }
  }

  RoundingOutcome out;
  for (int i = 0; i < c.dimension(); ++i)
    if (work[i] == 1.0) out.set.push_back(i);
  out.cardinality = int(out.set.size());
  return out;
}

// Includes each element independently with probability x_i.  Not feasible
// in general; a diagnostic rounder for estimator tests.
inline Subset independent_round(std::span<const double> x, Rng& rng) {
  Subset s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p = x[i];
    if (!(p >= -1e-9 && p <= 1.0 + 1e-9))
      throw std::invalid_argument("point coordinates must lie in [0,1]");
    if (rng.bernoulli(p)) s.push_back(int(i));
  }
  return s;
}

}  // namespace scg
