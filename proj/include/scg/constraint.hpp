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
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "scg/common.hpp"

namespace scg {

// A 0/1 vertex of the matroid polytope.
struct ExtremePoint {
  std::vector<double> coords;  // entries are exactly 0.0 or 1.0
  Subset support;              // ascending indices of the ones
};

// Matroid-polytope constraint: cardinality, partition, or a caller-supplied
// independence oracle.  Immutable and shareable; oracle callbacks must be
// pure, the library may invoke them concurrently.
class Constraint {
 public:
  enum class Kind { kCardinality, kPartition, kOracle };

  using IndependenceFn = std::function<bool(const Subset&)>;

  static Constraint cardinality(int n, int k) {
    if (n < 1) throw std::invalid_argument("dimension must be positive");
    if (k < 1 || k > n)
      throw std::invalid_argument("cardinality cap must satisfy 1 <= k <= n");
    Constraint c;
    c.n_ = n;
    c.kind_ = Kind::kCardinality;
    c.k_ = k;
    return c;
  }

  // block_of[i] is the block of element i; caps[b] bounds block b.
  static Constraint partition(std::vector<int> block_of, std::vector<int> caps) {
    const int n = int(block_of.size());
    const int nb = int(caps.size());
    if (n < 1) throw std::invalid_argument("dimension must be positive");
    if (nb < 1) throw std::invalid_argument("partition needs at least one block");
    std::vector<int> sizes(nb, 0);
    for (int b : block_of) {
      if (b < 0 || b >= nb)
        throw std::invalid_argument("block index out of range");
      ++sizes[b];
    }
    for (int b = 0; b < nb; ++b) {
      if (sizes[b] == 0)
        throw std::invalid_argument("every block must own an element");
      if (caps[b] < 1 || caps[b] > sizes[b])
        throw std::invalid_argument("block caps must satisfy 1 <= cap <= |block|");
    }
    Constraint c;
    c.n_ = n;
    c.kind_ = Kind::kPartition;
    c.block_of_ = std::move(block_of);
    c.caps_ = std::move(caps);
    return c;
  }

  static Constraint independence_oracle(int n, IndependenceFn fn,
                                        int rank_hint) {
    if (n < 1) throw std::invalid_argument("dimension must be positive");
    if (rank_hint < 1) throw std::invalid_argument("rank hint must be >= 1");
    if (!fn) throw std::invalid_argument("independence callback required");
    Constraint c;
    c.n_ = n;
    c.kind_ = Kind::kOracle;
    c.oracle_ = std::move(fn);
    c.rank_hint_ = rank_hint;
    return c;
  }

  int dimension() const { return n_; }
  Kind kind() const { return kind_; }

  int rank() const {
    switch (kind_) {
      case Kind::kCardinality:
        return k_;
      case Kind::kPartition:
        return std::accumulate(caps_.begin(), caps_.end(), 0);
      case Kind::kOracle:
      default:
        return rank_hint_;
    }
  }

  int cardinality_cap() const {
    if (kind_ != Kind::kCardinality)
      throw capability_error("not a cardinality constraint");
    return k_;
  }

  const std::vector<int>& block_of() const { return block_of_; }
  const std::vector<int>& caps() const { return caps_; }

  bool independent(const Subset& set) const {
    check_subset(set, n_);
    switch (kind_) {
      case Kind::kCardinality:
        return int(set.size()) <= k_;
      case Kind::kPartition: {
        std::vector<int> used(caps_.size(), 0);
        for (int i : set)
          if (++used[block_of_[i]] > caps_[block_of_[i]]) return false;
        return true;
      }
      case Kind::kOracle:
      default:
        return oracle_(set);
    }
  }

 private:
  Constraint() = default;

  int n_ = 0;
  Kind kind_ = Kind::kCardinality;
  int k_ = 0;                  // cardinality
  std::vector<int> block_of_;  // partition
  std::vector<int> caps_;      // partition
  IndependenceFn oracle_;      // oracle
  int rank_hint_ = 0;          // oracle
};

// argmax_{v in C} <d, v>, realized as an extreme point via the matroid
// greedy over coordinates sorted by descending d (ties: lower index first).
// Coordinates with d_i <= 0 are dropped: the polytope is down-closed, so
// excluding them is the true argmax even when noise makes d_t negative.
inline ExtremePoint lmo(std::span<const double> direction,
                        const Constraint& c) {
  const int n = c.dimension();
  if (int(direction.size()) != n)
    throw std::invalid_argument("direction dimension mismatch");
  for (double v : direction)
    if (!std::isfinite(v))
      throw std::invalid_argument("direction must be finite");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (direction[a] != direction[b]) return direction[a] > direction[b];
    return a < b;
  });

  ExtremePoint out;
  out.coords.assign(n, 0.0);
  Subset chosen;
  for (int i : order) {
    if (!(direction[i] > 0.0)) break;
    Subset candidate = chosen;
    candidate.insert(std::upper_bound(candidate.begin(), candidate.end(), i),
                     i);
    if (c.independent(candidate)) chosen = std::move(candidate);
  }
  for (int i : chosen) out.coords[i] = 1.0;
  out.support = std::move(chosen);
  return out;
}

namespace detail {

// Matroid rank of `mask` computed by greedy insertion through the oracle.
inline int oracle_rank(const Constraint& c, std::uint32_t mask) {
  Subset s;
  for (int i = 0; i < c.dimension(); ++i) {
    if (!(mask & (std::uint32_t{1} << i))) continue;
    Subset candidate = s;
    candidate.push_back(i);
    if (c.independent(candidate)) s = std::move(candidate);
  }
  return int(s.size());
}

}  // namespace detail

// Membership of x in the matroid polytope within tol.  Cardinality and
// partition variants check box and block-sum inequalities directly; the
// oracle variant checks the full family of rank inequalities
// x(A) <= rank(A), which is exact but enumerative (n <= 12).
inline bool is_feasible(std::span<const double> x, const Constraint& c,
                        double tol) {
  const int n = c.dimension();
  if (int(x.size()) != n)
    throw std::invalid_argument("point dimension mismatch");
  for (double v : x)
    if (!std::isfinite(v) || v < -tol || v > 1.0 + tol) return false;

  switch (c.kind()) {
    case Constraint::Kind::kCardinality: {
      double sum = 0.0;
      for (double v : x) sum += v;
      return sum <= c.cardinality_cap() + tol;
    }
    case Constraint::Kind::kPartition: {
      std::vector<double> sums(c.caps().size(), 0.0);
      for (int i = 0; i < n; ++i) sums[c.block_of()[i]] += x[i];
      for (std::size_t b = 0; b < sums.size(); ++b)
        if (sums[b] > c.caps()[b] + tol) return false;
      return true;
    }
    case Constraint::Kind::kOracle:
    default: {
      if (n > 12)
        throw capability_error(
            "oracle-matroid membership is enumerative and capped at n <= 12");
      const std::uint32_t limit = std::uint32_t{1} << n;
      for (std::uint32_t mask = 1; mask < limit; ++mask) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
          if (mask & (std::uint32_t{1} << i)) sum += x[i];
        if (sum > detail::oracle_rank(c, mask) + tol) return false;
      }
      return true;
    }
  }
}

namespace detail {

// Euclidean projection of y onto {x in [0,1]^m : sum x <= cap}: clip, and
// if the clipped point overshoots the cap, shift by the dual variable
// lambda with sum clip(y - lambda, 0, 1) = cap (water filling).
inline void project_block(std::span<const double> y, double cap,
                          std::span<double> out) {
  const std::size_t m = y.size();
  double clipped_sum = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double v = std::clamp(y[i], 0.0, 1.0);
    out[i] = v;
    clipped_sum += v;
    hi = std::max(hi, y[i]);
  }
  if (clipped_sum <= cap) return;

  const auto shifted_sum = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      s += std::clamp(y[i] - lambda, 0.0, 1.0);
    return s;
  };

  // Bisect lambda, then polish with the closed form over the active set.
  double lo = 0.0;
  for (int it = 0; it < 1200 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (shifted_sum(mid) > cap)
      lo = mid;
    else
      hi = mid;
  }
  double lambda = 0.5 * (lo + hi);
  double ones = 0.0, active_sum = 0.0;
  int active = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (y[i] - lambda >= 1.0) {
      ones += 1.0;
    } else if (y[i] - lambda > 0.0) {
      active_sum += y[i];
      ++active;
    }
  }
  if (active > 0) lambda = (active_sum + ones - cap) / active;
  for (std::size_t i = 0; i < m; ++i)
    out[i] = std::clamp(y[i] - lambda, 0.0, 1.0);
}

}  // namespace detail

// Euclidean projection onto the constraint polytope; cardinality and
// partition only (the SGA baseline never needs more).
inline ContinuousPoint project(std::span<const double> y,
                               const Constraint& c) {
  const int n = c.dimension();
  if (int(y.size()) != n)
    throw std::invalid_argument("point dimension mismatch");
  for (double v : y)
    if (!std::isfinite(v)) throw std::invalid_argument("point must be finite");

  ContinuousPoint out(n, 0.0);
  switch (c.kind()) {
    case Constraint::Kind::kCardinality:
      detail::project_block(y, double(c.cardinality_cap()), out);
      return out;
    case Constraint::Kind::kPartition: {
      const int nb = int(c.caps().size());
      for (int b = 0; b < nb; ++b) {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
          if (c.block_of()[i] == b) idx.push_back(i);
        std::vector<double> yb(idx.size()), xb(idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) yb[j] = y[idx[j]];
        detail::project_block(yb, double(c.caps()[b]), xb);
        for (std::size_t j = 0; j < idx.size(); ++j) out[idx[j]] = xb[j];
      }
      return out;
    }
    case Constraint::Kind::kOracle:
    default:
      throw capability_error(
          "projection is only available for cardinality and partition "
          "constraints");
  }
}

// Tight Euclidean radius of the polytope: the norm of a maximum
// independent set's indicator.
inline double diameter(const Constraint& c) {
  return std::sqrt(double(c.rank()));
}

}  // namespace scg
