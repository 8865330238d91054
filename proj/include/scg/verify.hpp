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
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scg/common.hpp"
#include "scg/constraint.hpp"
#include "scg/multilinear.hpp"
#include "scg/objective.hpp"
#include "scg/rng.hpp"

namespace scg {

// One line of the machine-readable verdict file.
struct Verdict {
  std::string name;
  double metric = 0.0;
  std::string threshold;
  bool pass = false;
};

// Least-squares power-law fit of an error sequence on log-log axes.
struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int t_min = 0;
  int t_max = 0;
};

// Exhaustive maximizer of the expected value over independent sets.  Ties
// go to the lexicographically smallest set.  Cardinality constraints
// enumerate subsets of size <= k (n <= 20); other matroids scan all 2^n
// subsets (n <= 16).
inline std::pair<Subset, double> brute_force_opt(const SetObjective& f,
                                                 const Constraint& c) {
  if (f.n() != c.dimension())
    throw std::invalid_argument("objective and constraint dimensions differ");
  const int n = f.n();

  Subset best_set;
  double best_value = f.expected_value(best_set);
  const auto consider = [&](const Subset& s) {
    const double value = f.expected_value(s);
    if (value > best_value ||
        (value == best_value &&
         std::lexicographical_compare(s.begin(), s.end(), best_set.begin(),
                                      best_set.end()))) {
      best_value = value;
      best_set = s;
    }
  };

  if (c.kind() == Constraint::Kind::kCardinality) {
    if (n > kMaxExactN)
      throw capability_error("brute force is capped at n <= 20");
    const int k = c.cardinality_cap();
    Subset current;
    // Depth-first over increasing index sequences of size <= k, visiting
    // candidates in lexicographic set order.
    auto recurse = [&](auto&& self, int next) -> void {
      if (!current.empty()) consider(current);
      if (int(current.size()) == k) return;
      for (int i = next; i < n; ++i) {
        current.push_back(i);
        self(self, i + 1);
        current.pop_back();
      }
    };
    recurse(recurse, 0);
  } else {
    if (n > 16)
      throw capability_error(
          "general-matroid brute force is capped at n <= 16");
    const std::uint32_t limit = std::uint32_t{1} << n;
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
      const Subset s = mask_to_subset(mask, n);
      if (c.independent(s)) consider(s);
    }
  }
  return {best_set, best_value};
}

// Max deviation between central differences of the exact multilinear value
// and the exact gradient; multilinearity makes the difference pure
// rounding noise at interior points.
inline double fd_gradient_check(const SetObjective& f,
                                std::span<const double> x, double h) {
  const int n = f.n();
  if (int(x.size()) != n)
    throw std::invalid_argument("point dimension mismatch");
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
  for (double v : x)
    if (v < h || v > 1.0 - h)
      throw std::invalid_argument(
          "point must be interior: coordinates within [h, 1-h]");

  const GradientVector grad = exact_multilinear_grad(f, x);
  double worst = 0.0;
  std::vector<double> probe(x.begin(), x.end());
  for (int i = 0; i < n; ++i) {
    probe[i] = x[i] + h;
    const double up = exact_multilinear(f, probe);
    probe[i] = x[i] - h;
    const double down = exact_multilinear(f, probe);
    probe[i] = x[i];
    worst = std::max(worst, std::fabs((up - down) / (2.0 * h) - grad[i]));
  }
  return worst;
}

// Fits log(error) against log(t) over [t_min, t_max].
inline DecayFit decay_slope(std::span<const std::pair<int, double>> errors,
                            int t_min, int t_max) {
  if (t_min < 1 || t_max < t_min) throw std::invalid_argument("bad window");
  std::vector<double> xs, ys;
  for (const auto& [t, e] : errors) {
    if (t < t_min || t > t_max) continue;
    if (!(e > 0.0))
      throw std::invalid_argument("decay fit needs positive error values");
    xs.push_back(std::log(double(t)));
    ys.push_back(std::log(e));
  }
  if (xs.size() < 10)
    throw std::invalid_argument("decay fit needs at least 10 points in window");

  const double count = double(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  fit.t_min = t_min;
  fit.t_max = t_max;
  return fit;
}

// Empirical check of the coordinate-wise smoothness bound along ascent
// steps: max over trials of
//   max_j |grad_j F(x + v/T) - grad_j F(x)| / (m_f sqrt(r) ||v|| / T).
inline double lipschitz_scan(const SetObjective& f, const Constraint& c,
                             int T, int trials, Rng& rng) {
  if (f.n() != c.dimension())
    throw std::invalid_argument("objective and constraint dimensions differ");
  if (f.n() > 12)
    throw capability_error("lipschitz scan uses exact gradients; n <= 12");
  if (T < 1 || trials < 1)
    throw std::invalid_argument("T and trials must be >= 1");

  const int n = f.n();
  const double m_f = f.max_singleton();
  const double denom_scale = m_f * std::sqrt(double(c.rank())) / double(T);
  if (denom_scale == 0.0) return 0.0;  // identically zero objective

  double worst = 0.0;
  std::vector<double> direction(n);
  for (int trial = 0; trial < trials; ++trial) {
    // Random feasible base point: a convex combination of extreme points,
    // shrunk so one more 1/T step stays inside [0,1]^n.
    std::vector<double> x(n, 0.0);
    const int pieces = 3;
    double weight_left = 1.0;
    for (int p = 0; p < pieces; ++p) {
      for (int i = 0; i < n; ++i) direction[i] = rng.next_range(-1.0, 1.0);
      const ExtremePoint e = lmo(direction, c);
      const double w =
          p + 1 == pieces ? weight_left : weight_left * rng.next_double();
      weight_left -= w;
      for (int i = 0; i < n; ++i) x[i] += w * e.coords[i];
    }
    const double shrink = 1.0 - 1.0 / double(T);
    for (double& v : x) v *= shrink;

    for (int i = 0; i < n; ++i) direction[i] = rng.next_range(-1.0, 1.0);
    const ExtremePoint v = lmo(direction, c);
    double v_norm = 0.0;
    for (double coord : v.coords) v_norm += coord * coord;
    v_norm = std::sqrt(v_norm);
    if (v_norm == 0.0) continue;  // degenerate direction counts as ratio 0

    const GradientVector before = exact_multilinear_grad(f, x);
    std::vector<double> stepped = x;
    for (int i = 0; i < n; ++i) stepped[i] += v.coords[i] / double(T);
    const GradientVector after = exact_multilinear_grad(f, stepped);

    double change = 0.0;
    for (int j = 0; j < n; ++j)
      change = std::max(change, std::fabs(after[j] - before[j]));
    worst = std::max(worst, change / (denom_scale * v_norm));
  }
  return worst;
}

inline double approx_ratio(double achieved, double opt) {
  if (!(opt > 0.0)) throw std::invalid_argument("opt must be positive");
  return achieved / opt;
}

namespace detail {

// Per-block KKT residual of x as the projection of y onto
// {0 <= x <= 1, sum x <= cap}: stationarity x = clip(y - lambda),
// lambda >= 0, and complementary slackness.
inline double block_kkt_residual(std::span<const double> y,
                                 std::span<const double> x, double cap) {
  double residual = 0.0;
  double sum = 0.0;
  for (double v : x) {
    residual = std::max(residual, std::max(-v, v - 1.0));
    sum += v;
  }
  residual = std::max(residual, sum - cap);

  double lambda = 0.0;
  int interior = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 1e-9 && x[i] < 1.0 - 1e-9) {
      lambda += y[i] - x[i];
      ++interior;
    }
  }
  if (interior > 0) {
    lambda /= interior;
  } else if (sum >= cap - 1e-9) {
    // All coordinates at bounds; any multiplier in the bracket works.
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] >= 1.0 - 1e-9)
        hi = std::min(hi, y[i] - 1.0);
      else
        lo = std::max(lo, y[i]);
    }
    lambda = std::clamp(std::max(lo, 0.0), 0.0,
                        std::isfinite(hi) ? std::max(hi, 0.0) : 0.0);
  }
  lambda = std::max(lambda, 0.0);
  if (lambda > 1e-9) residual = std::max(residual, std::fabs(sum - cap));
  for (std::size_t i = 0; i < x.size(); ++i)
    residual =
        std::max(residual, std::fabs(x[i] - std::clamp(y[i] - lambda, 0.0, 1.0)));
  return residual;
}

}  // namespace detail

// Max KKT residual of x = project(y) over the constraint's blocks.
inline double projection_kkt_residual(std::span<const double> y,
                                      std::span<const double> x,
                                      const Constraint& c) {
  const int n = c.dimension();
  if (int(y.size()) != n || int(x.size()) != n)
    throw std::invalid_argument("point dimension mismatch");
  if (c.kind() == Constraint::Kind::kCardinality)
    return detail::block_kkt_residual(y, x, double(c.cardinality_cap()));
  if (c.kind() != Constraint::Kind::kPartition)
    throw capability_error("KKT residual needs cardinality or partition");
  double worst = 0.0;
  const int nb = int(c.caps().size());
  for (int b = 0; b < nb; ++b) {
    std::vector<double> yb, xb;
    for (int i = 0; i < n; ++i) {
      if (c.block_of()[i] == b) {
        yb.push_back(y[i]);
        xb.push_back(x[i]);
      }
    }
    worst = std::max(
        worst, detail::block_kkt_residual(yb, xb, double(c.caps()[b])));
  }
  return worst;
}

// Exhaustively verifies monotonicity and the lattice submodularity
// inequality f(A) + f(B) >= f(A|B) + f(A&B) of the expected function.
inline bool submodularity_audit(const SetObjective& f) {
  if (f.n() > 10)
    throw capability_error("submodularity audit is exhaustive; n <= 10");
  const auto& table = f.value_table();
  const std::uint32_t limit = std::uint32_t(table.size());
  constexpr double kTol = 1e-12;

  for (std::uint32_t a = 0; a < limit; ++a) {
    for (int i = 0; i < f.n(); ++i) {
      const std::uint32_t bit = std::uint32_t{1} << i;
      if (a & bit) continue;
      if (table[a] > table[a | bit] + kTol) return false;  // not monotone
    }
  }
  for (std::uint32_t a = 0; a < limit; ++a) {
    for (std::uint32_t b = a + 1; b < limit; ++b) {
      if (table[a] + table[b] < table[a | b] + table[a & b] - kTol)
        return false;
    }
  }
  return true;
}

}  // namespace scg
