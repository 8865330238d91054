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
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "scg/common.hpp"
#include "scg/constraint.hpp"
#include "scg/multilinear.hpp"
#include "scg/objective.hpp"
#include "scg/rng.hpp"

namespace scg {

enum class RhoSchedule { kLemma2, kExperiments };

// Averaging weight 4/(t+8)^{2/3}; t counts from 1.
inline double rho_schedule(int t) {
  if (t < 1) throw std::invalid_argument("iteration index starts at 1");
  return 4.0 / std::pow(double(t) + 8.0, 2.0 / 3.0);
}

// Alternative weight (1/2) t^{-2/3} used by the benchmark runs.
inline double rho_experiments(int t) {
  if (t < 1) throw std::invalid_argument("iteration index starts at 1");
  return 0.5 * std::pow(double(t), -2.0 / 3.0);
}

inline double rho_value(RhoSchedule schedule, int t) {
  return schedule == RhoSchedule::kLemma2 ? rho_schedule(t)
                                          : rho_experiments(t);
}

struct ScgConfig {
  int T = 100;
  int batch = 1;
  RhoSchedule schedule = RhoSchedule::kLemma2;
  std::uint64_t seed = 0;
  // Replace the stochastic estimator with the exact gradient (n <= 20).
  bool exact_gradients = false;
  // Keep the stochastic run but also record exact values and the exact
  // gradient error per iteration (n <= 20).
  bool exact_diagnostics = false;
};

struct SgaConfig {
  int T = 100;
  int batch = 1;
  double stepsize_c = 1.0;  // step mu_t = c / sqrt(t)
  std::uint64_t seed = 0;
  bool exact_gradients = false;
  bool exact_diagnostics = false;
};

struct FwConfig {
  int T = 100;
  int batch = 1;
  std::uint64_t seed = 0;
  bool exact_gradients = false;
  bool exact_diagnostics = false;
};

struct GreedyConfig {
  int k = 1;
  int batch = 1;
  std::uint64_t seed = 0;
};

// Uniform per-iteration record shared by every optimizer.  Row 0 is the
// initial state; rows 1..T follow the updates, so a finished trace has
// T+1 rows.  `wall_evals` follows the n*B-per-iteration accounting
// convention for simple function evaluations.
struct Trace {
  struct Row {
    int t = 0;
    double rho = 0.0;               // step parameter used at this iteration
    std::vector<double> x;          // state after the update
    std::vector<double> d;          // search direction / gradient estimate
    std::vector<double> v;          // LMO output (empty where not used)
    long long wall_evals = 0;       // cumulative, nondecreasing
    double value_est =
        std::numeric_limits<double>::quiet_NaN();  // estimate of F(x_t)
    double grad_err =
        std::numeric_limits<double>::quiet_NaN();  // ||grad F - d_t||^2
  };
  std::vector<Row> rows;
};

struct OptResult {
  ContinuousPoint x;
  Trace trace;
};

struct GreedyResult {
  Subset set;
  Trace trace;
};

namespace detail {

inline double squared_distance(std::span<const double> a,
                               std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

inline int sparsity(std::span<const double> x) {
  int count = 0;
  for (double v : x)
    if (std::fabs(v) > 1e-12) ++count;
  return count;
}

// Cheap one-sample estimate of F(x) from a stream that is independent of
// the optimizer's draws, so diagnostics never perturb trajectories.
inline double sampled_value(const SetObjective& f, std::span<const double> x,
                            Rng& diag_rng) {
  const int z = diag_rng.next_index(f.scenario_count());
  Subset s;
  for (int i = 0; i < f.n(); ++i)
    if (diag_rng.bernoulli(clamp01(x[i]))) s.push_back(i);
  return f.scenario_value(s, z);
}

inline void check_dims(const SetObjective& f, const Constraint& c) {
  if (f.n() != c.dimension())
    throw std::invalid_argument("objective and constraint dimensions differ");
}

}  // namespace detail

// Stochastic continuous greedy: averaged gradient direction
// d_t = (1 - rho_t) d_{t-1} + rho_t g_t, LMO step v_t, x += v_t / T.
// Starts from x = d = 0 and lands in the polytope after exactly T steps.
inline OptResult run_scg(const SetObjective& f, const Constraint& c,
                         const ScgConfig& cfg) {
  detail::check_dims(f, c);
  if (cfg.T < 1 || cfg.batch < 1)
    throw std::invalid_argument("T and batch must be >= 1");
  const int n = f.n();
  Rng rng(cfg.seed);
  Rng diag_rng(mix_seed(cfg.seed, 0x6d1a6ULL));

  ContinuousPoint x(n, 0.0);
  GradientVector d(n, 0.0);
  Trace trace;
  trace.rows.reserve(cfg.T + 1);

  Trace::Row row0;
  row0.x = x;
  row0.d = d;
  if (cfg.exact_diagnostics) {
    row0.value_est = exact_multilinear(f, x);
    const auto g0 = exact_multilinear_grad(f, x);
    row0.grad_err = detail::squared_distance(g0, d);
  } else {
    row0.value_est = detail::sampled_value(f, x, diag_rng);
  }
  trace.rows.push_back(std::move(row0));

  long long evals = 0;
  for (int t = 1; t <= cfg.T; ++t) {
    const ContinuousPoint eval_point = x;
    const GradientVector g =
        cfg.exact_gradients
            ? exact_multilinear_grad(f, eval_point)
            : estimate_stochastic_gradient(f, eval_point, cfg.batch, rng);
    const double rho = rho_value(cfg.schedule, t);
    for (int i = 0; i < n; ++i) d[i] = (1.0 - rho) * d[i] + rho * g[i];
    ExtremePoint v = lmo(d, c);
    for (int i = 0; i < n; ++i) x[i] += v.coords[i] / cfg.T;
    evals += (long long)(n)*cfg.batch;

    Trace::Row row;
    row.t = t;
    row.rho = rho;
    row.x = x;
    row.d = d;
    row.v = std::move(v.coords);
    row.wall_evals = evals;
    if (cfg.exact_diagnostics) {
      row.value_est = exact_multilinear(f, x);
      const auto exact = exact_multilinear_grad(f, eval_point);
      row.grad_err = detail::squared_distance(exact, d);
    } else {
      row.value_est = detail::sampled_value(f, x, diag_rng);
    }
    trace.rows.push_back(std::move(row));
  }
  return {std::move(x), std::move(trace)};
}

// Stochastic gradient ascent baseline: x <- project(x + (c/sqrt(t)) g_t).
// Returns the final iterate; the trace keeps the whole path so averaged or
// best-iterate conventions can be evaluated downstream.
inline OptResult run_sga(const SetObjective& f, const Constraint& c,
                         const SgaConfig& cfg) {
  detail::check_dims(f, c);
  if (cfg.T < 1 || cfg.batch < 1)
    throw std::invalid_argument("T and batch must be >= 1");
  if (c.kind() == Constraint::Kind::kOracle)
    throw capability_error(
        "SGA needs Euclidean projection; use a cardinality or partition "
        "constraint");
  const int n = f.n();
  Rng rng(cfg.seed);
  Rng diag_rng(mix_seed(cfg.seed, 0x6d1a6ULL));

  ContinuousPoint x(n, 0.0);
  Trace trace;
  trace.rows.reserve(cfg.T + 1);

  Trace::Row row0;
  row0.x = x;
  if (cfg.exact_diagnostics)
    row0.value_est = exact_multilinear(f, x);
  else
    row0.value_est = detail::sampled_value(f, x, diag_rng);
  trace.rows.push_back(std::move(row0));

  long long evals = 0;
  for (int t = 1; t <= cfg.T; ++t) {
    const ContinuousPoint eval_point = x;
    const GradientVector g =
        cfg.exact_gradients
            ? exact_multilinear_grad(f, eval_point)
            : estimate_stochastic_gradient(f, eval_point, cfg.batch, rng);
    const double step = cfg.stepsize_c / std::sqrt(double(t));
    std::vector<double> shifted(n);
    for (int i = 0; i < n; ++i) shifted[i] = x[i] + step * g[i];
    x = project(shifted, c);
    evals += (long long)(n)*cfg.batch;

    Trace::Row row;
    row.t = t;
    row.rho = step;
    row.x = x;
    row.d = g;
    row.wall_evals = evals;
    if (cfg.exact_diagnostics) {
      row.value_est = exact_multilinear(f, x);
      const auto exact = exact_multilinear_grad(f, eval_point);
      row.grad_err = detail::squared_distance(exact, g);
    } else {
      row.value_est = detail::sampled_value(f, x, diag_rng);
    }
    trace.rows.push_back(std::move(row));
  }
  return {std::move(x), std::move(trace)};
}

// Frank-Wolfe / continuous-greedy baseline: a fresh minibatch average goes
// straight into the LMO each iteration, with no averaging across
// iterations -- exactly the variance problem SCG's recursion removes.
inline OptResult run_fw(const SetObjective& f, const Constraint& c,
                        const FwConfig& cfg) {
  detail::check_dims(f, c);
  if (cfg.T < 1 || cfg.batch < 1)
    throw std::invalid_argument("T and batch must be >= 1");
  const int n = f.n();
  Rng rng(cfg.seed);
  Rng diag_rng(mix_seed(cfg.seed, 0x6d1a6ULL));

  ContinuousPoint x(n, 0.0);
  Trace trace;
  trace.rows.reserve(cfg.T + 1);

  Trace::Row row0;
  row0.x = x;
  if (cfg.exact_diagnostics)
    row0.value_est = exact_multilinear(f, x);
  else
    row0.value_est = detail::sampled_value(f, x, diag_rng);
  trace.rows.push_back(std::move(row0));

  long long evals = 0;
  for (int t = 1; t <= cfg.T; ++t) {
    const ContinuousPoint eval_point = x;
    const GradientVector g =
        cfg.exact_gradients
            ? exact_multilinear_grad(f, eval_point)
            : estimate_stochastic_gradient(f, eval_point, cfg.batch, rng);
    ExtremePoint v = lmo(g, c);
    for (int i = 0; i < n; ++i) x[i] += v.coords[i] / cfg.T;
    evals += (long long)(n)*cfg.batch;

    Trace::Row row;
    row.t = t;
    row.x = x;
    row.d = g;
    row.v = std::move(v.coords);
    row.wall_evals = evals;
    if (cfg.exact_diagnostics) {
      row.value_est = exact_multilinear(f, x);
      const auto exact = exact_multilinear_grad(f, eval_point);
      row.grad_err = detail::squared_distance(exact, g);
    } else {
      row.value_est = detail::sampled_value(f, x, diag_rng);
    }
    trace.rows.push_back(std::move(row));
  }
  return {std::move(x), std::move(trace)};
}

// Batch-mode discrete greedy: each round draws B scenarios once, scores
// every element's marginal gain against that shared sample, and adds the
// best (ties: lowest index).
inline GreedyResult run_batch_greedy(const SetObjective& f,
                                     const GreedyConfig& cfg) {
  if (cfg.k < 1 || cfg.k > f.n())
    throw std::invalid_argument("greedy cardinality must satisfy 1 <= k <= n");
  if (cfg.batch < 1) throw std::invalid_argument("batch size must be >= 1");
  const int n = f.n();
  Rng rng(cfg.seed);

  Subset chosen;
  std::vector<std::uint8_t> in_set(n, 0);
  Trace trace;
  trace.rows.reserve(cfg.k + 1);
  Trace::Row row0;
  row0.x.assign(n, 0.0);
  row0.value_est = 0.0;
  trace.rows.push_back(std::move(row0));

  long long evals = 0;
  std::vector<int> sample(cfg.batch);
  for (int round = 1; round <= cfg.k; ++round) {
    for (int b = 0; b < cfg.batch; ++b)
      sample[b] = rng.next_index(f.scenario_count());

    double best_gain = -std::numeric_limits<double>::infinity();
    int best_item = -1;
    for (int e = 0; e < n; ++e) {
      if (in_set[e]) continue;
      Subset candidate = chosen;
      candidate.insert(
          std::upper_bound(candidate.begin(), candidate.end(), e), e);
      double gain = 0.0;
      for (int z : sample)
        gain += f.scenario_value(candidate, z) - f.scenario_value(chosen, z);
      gain /= cfg.batch;
      if (gain > best_gain) {
        best_gain = gain;
        best_item = e;
      }
    }
    in_set[best_item] = 1;
    chosen.insert(
        std::upper_bound(chosen.begin(), chosen.end(), best_item), best_item);
    evals += (long long)(n)*cfg.batch;

    Trace::Row row;
    row.t = round;
    row.x.assign(n, 0.0);
    for (int i : chosen) row.x[i] = 1.0;
    row.wall_evals = evals;
    double est = 0.0;
    for (int z : sample) est += f.scenario_value(chosen, z);
    row.value_est = est / cfg.batch;
    trace.rows.push_back(std::move(row));
  }
  return {std::move(chosen), std::move(trace)};
}

}  // namespace scg
