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

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "scg/config.hpp"
#include "scg/constraint.hpp"
#include "scg/io.hpp"
#include "scg/multilinear.hpp"
#include "scg/objective.hpp"
#include "scg/optimize.hpp"
#include "scg/rounding.hpp"
#include "scg/verify.hpp"

namespace scg {

struct CellResult {
  std::string algorithm;
  int k = 0;
  int batch = 1;
  std::uint64_t seed = 0;
  double final_value = std::numeric_limits<double>::quiet_NaN();
  double rounded_value = std::numeric_limits<double>::quiet_NaN();
  long long total_evals = 0;
  long long wall_ms = 0;
  std::string status = "ok";
};

struct ExperimentOutput {
  std::vector<CellResult> cells;
  std::string summary_path;
  std::vector<Verdict> verdicts;  // filled when exact_diagnostics is on
  bool all_ok = true;
};

inline SetObjective build_objective(const ExperimentConfig& cfg) {
  if (cfg.data.source == DataSpec::Source::kTable) {
    if (cfg.objective != "explicit-table")
      throw data_error("table data requires objective = explicit-table");
    auto [n, values] = load_explicit_table(cfg.data.path);
    return SetObjective::explicit_table(n, std::move(values));
  }
  if (cfg.objective == "explicit-table")
    throw data_error("explicit-table objective requires data = table:<path>");

  RatingMatrix ratings = [&] {
    switch (cfg.data.source) {
      case DataSpec::Source::kTriplet:
        return load_ratings(cfg.data.path, RatingsFormat::kTripletTsv);
      case DataSpec::Source::kMovieLens:
        return load_ratings(cfg.data.path, RatingsFormat::kMovieLensDat);
      case DataSpec::Source::kSynthetic:
      default:
        return gen_synthetic(cfg.data.users, cfg.data.items, cfg.data.density,
                             cfg.data.rating_max, cfg.data.seed);
    }
  }();
  return cfg.objective == "facility-location"
             ? SetObjective::facility_location(std::move(ratings))
             : SetObjective::concave_over_modular(std::move(ratings));
}

namespace detail {

// Exact multilinear value where enumeration is allowed, otherwise a
// fixed-budget Monte Carlo estimate from a dedicated stream.
inline double fractional_value(const SetObjective& f,
                               std::span<const double> x,
                               std::uint64_t seed) {
  if (f.n() <= kMaxExactN) return exact_multilinear(f, x);
  Rng rng(mix_seed(seed, 0xe57ULL));
  double total = 0.0;
  const int samples = 512;
  for (int s = 0; s < samples; ++s) total += sampled_value(f, x, rng);
  return total / samples;
}

inline std::string sanitize_status(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n') ch = ';';
  return s;
}

struct CellPlan {
  AlgorithmSpec alg;
  int k = 0;  // reported k column (cardinality cap, or matroid rank)
  Constraint constraint;
  std::uint64_t seed = 0;
  std::uint64_t cell_seed = 0;
  std::string trace_path;
  std::string iterates_path;  // empty unless dumping
};

inline CellResult run_cell(const SetObjective& f, const CellPlan& plan,
                           bool exact_diagnostics) {
  CellResult out;
  out.algorithm = plan.alg.name;
  out.k = plan.k;
  out.batch = plan.alg.batch;
  out.seed = plan.seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    Trace trace;
    ContinuousPoint x;
    Subset rounded;
    const bool diag = exact_diagnostics && f.n() <= kMaxExactN;
    if (plan.alg.name == "scg") {
      ScgConfig cfg{plan.alg.T, plan.alg.batch, plan.alg.schedule,
                    plan.cell_seed, false, diag};
      auto res = run_scg(f, plan.constraint, cfg);
      x = std::move(res.x);
      trace = std::move(res.trace);
    } else if (plan.alg.name == "sga") {
      SgaConfig cfg{plan.alg.T, plan.alg.batch, plan.alg.c, plan.cell_seed,
                    false, diag};
      auto res = run_sga(f, plan.constraint, cfg);
      x = std::move(res.x);
      trace = std::move(res.trace);
    } else if (plan.alg.name == "fw") {
      FwConfig cfg{plan.alg.T, plan.alg.batch, plan.cell_seed, false, diag};
      auto res = run_fw(f, plan.constraint, cfg);
      x = std::move(res.x);
      trace = std::move(res.trace);
    } else {  // greedy
      GreedyConfig cfg{plan.constraint.cardinality_cap(), plan.alg.batch,
                       plan.cell_seed};
      auto res = run_batch_greedy(f, cfg);
      rounded = std::move(res.set);
      trace = std::move(res.trace);
    }

    if (plan.alg.name == "greedy") {
      out.final_value = f.expected_value(rounded);
      out.rounded_value = out.final_value;
    } else {
      out.final_value = fractional_value(f, x, plan.cell_seed);
      Rng round_rng(mix_seed(plan.cell_seed, 0x20adULL));
      rounded = pipage_round(x, plan.constraint, round_rng).set;
      out.rounded_value = f.expected_value(rounded);
    }
    out.total_evals = trace.rows.back().wall_evals;
    write_trace_csv(plan.trace_path, trace);
    if (!plan.iterates_path.empty())
      write_iterates_csv(plan.iterates_path, trace);
  } catch (const std::exception& e) {
    out.status = sanitize_status(e.what());
  }
  out.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

}  // namespace detail

inline std::string summary_to_csv(std::span<const CellResult> cells) {
  std::string out =
      "algorithm,k,B,seed,final_value,rounded_value,total_evals,wall_ms,"
      "status\n";
  for (const auto& c : cells) {
    out += c.algorithm;
    out += ',';
    out += std::to_string(c.k);
    out += ',';
    out += std::to_string(c.batch);
    out += ',';
    out += std::to_string(c.seed);
    out += ',';
    out += format_double(c.final_value);
    out += ',';
    out += format_double(c.rounded_value);
    out += ',';
    out += std::to_string(c.total_evals);
    out += ',';
    out += std::to_string(c.wall_ms);
    out += ',';
    out += c.status;
    out += '\n';
  }
  return out;
}

// Drops the wall_ms column; everything else is covered by the
// reproducibility contract.
inline std::string strip_timing_column(const std::string& summary_csv) {
  std::string out;
  std::size_t pos = 0;
  while (pos < summary_csv.size()) {
    std::size_t end = summary_csv.find('\n', pos);
    if (end == std::string::npos) end = summary_csv.size();
    const std::string line = summary_csv.substr(pos, end - pos);
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else
        cur += ch;
    }
    fields.push_back(cur);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i == 7) continue;  // wall_ms
      if (!out.empty() && out.back() != '\n') out += ',';
      out += fields[i];
    }
    out += '\n';
    pos = end + 1;
  }
  return out;
}

std::vector<Verdict> run_verification(const ExperimentConfig& cfg);

// Runs every (algorithm, k, seed) cell: optimize, round (pipage for the
// continuous methods), re-evaluate the rounded set exactly, and emit one
// trace CSV per cell plus a summary CSV.  A failing cell is recorded in
// its summary row; the sweep continues.
inline ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  const SetObjective f = build_objective(cfg);
  const int n = f.n();

  std::vector<int> ks;
  if (!cfg.k_sweep.empty()) {
    if (cfg.constraint.rfind("cardinality", 0) != 0)
      throw data_error("k_sweep requires a cardinality constraint");
    ks = cfg.k_sweep;
    for (int k : ks)
      if (k < 1 || k > n) throw data_error("k_sweep values must be in [1, n]");
  } else {
    ks = {-1};  // marker: use the constraint string as written
  }

  std::filesystem::create_directories(cfg.output_dir);

  std::vector<detail::CellPlan> plans;
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    const auto& alg = cfg.algorithms[a];
    for (int k : ks) {
      Constraint c = k < 0 ? parse_constraint(cfg.constraint, n)
                           : Constraint::cardinality(n, k);
      const int k_label =
          c.kind() == Constraint::Kind::kCardinality ? c.cardinality_cap()
                                                     : c.rank();
      for (std::uint64_t seed : cfg.seeds) {
        // The cell stream depends on (seed, algorithm) but not on k, so a
        // k-sweep replays the same draws: greedy runs at increasing k are
        // then exact prefixes of one another.
        detail::CellPlan plan{alg, k_label, c, seed, mix_seed(seed, a),
                              "", ""};
        const std::string stem = "trace_" + alg.name + "_B" +
                                 std::to_string(alg.batch) + "_k" +
                                 std::to_string(k_label) + "_seed" +
                                 std::to_string(seed);
        plan.trace_path =
            (std::filesystem::path(cfg.output_dir) / (stem + ".csv")).string();
        if (cfg.dump_iterates)
          plan.iterates_path =
              (std::filesystem::path(cfg.output_dir) / (stem + "_x.csv"))
                  .string();
        plans.push_back(std::move(plan));
      }
    }
  }

  ExperimentOutput output;
  output.cells.resize(plans.size());
  if (cfg.jobs <= 1) {
    for (std::size_t i = 0; i < plans.size(); ++i)
      output.cells[i] = detail::run_cell(f, plans[i], cfg.exact_diagnostics);
  } else {
    std::atomic<std::size_t> next{0};
    const int workers = std::min<int>(cfg.jobs, int(plans.size()));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < plans.size();
             i = next.fetch_add(1))
          output.cells[i] =
              detail::run_cell(f, plans[i], cfg.exact_diagnostics);
      });
    }
    for (auto& t : pool) t.join();
  }

  for (const auto& cell : output.cells)
    if (cell.status != "ok") output.all_ok = false;

  output.summary_path =
      (std::filesystem::path(cfg.output_dir) / "summary.csv").string();
  write_file_atomic(output.summary_path, summary_to_csv(output.cells));

  if (cfg.exact_diagnostics && n <= 10)
    output.verdicts = run_verification(cfg);

  return output;
}

// ---------------------------------------------------------------------
// Verification battery: turns the library's statistical and exact claims
// into one verdict line each on the configured instance.  Needs the exact
// oracles, so the instance must have n <= 10 and a cardinality or
// partition constraint.
inline std::vector<Verdict> run_verification(const ExperimentConfig& cfg) {
  const SetObjective f = build_objective(cfg);
  const int n = f.n();
  if (n > 10)
    throw data_error("verification needs n <= 10 for the exact oracles");
  const Constraint c = parse_constraint(cfg.constraint, n);
  if (c.kind() == Constraint::Kind::kOracle)
    throw data_error(
        "verification needs a cardinality or partition constraint");

  const std::uint64_t master = cfg.seeds.front();
  std::vector<Verdict> verdicts;

  // Monotone submodular expected function.
  const bool audit_ok = submodularity_audit(f);
  verdicts.push_back(
      {"submodularity_audit", audit_ok ? 1.0 : 0.0, ">=1", audit_ok});

  // Estimator unbiasedness against the enumeration gradient.
  {
    Rng rng(mix_seed(master, 0x01ULL));
    const std::vector<double> x(n, 0.5);
    const GradientVector exact = exact_multilinear_grad(f, x);
    const int samples = 20000;
    std::vector<double> sum(n, 0.0), sum_sq(n, 0.0);
    for (int s = 0; s < samples; ++s) {
      const GradientVector g = estimate_stochastic_gradient(f, x, 1, rng);
      for (int i = 0; i < n; ++i) {
        sum[i] += g[i];
        sum_sq[i] += g[i] * g[i];
      }
    }
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const double mean = sum[i] / samples;
      const double var =
          std::max(0.0, (sum_sq[i] - samples * mean * mean) / (samples - 1));
      const double se = std::sqrt(var / samples);
      const double dev = std::fabs(mean - exact[i]);
      worst = std::max(worst, se > 0.0 ? dev / se : (dev > 1e-12 ? 1e9 : 0.0));
    }
    verdicts.push_back({"estimator_unbiased", worst, "<=3", worst <= 3.0});
  }

  // LMO against brute force over independent sets.
  {
    Rng rng(mix_seed(master, 0x02ULL));
    double worst = 0.0;
    std::vector<double> d(n);
    const std::uint32_t limit = std::uint32_t{1} << n;
    for (int trial = 0; trial < 300; ++trial) {
      for (double& v : d) v = rng.next_range(-1.0, 1.0);
      const ExtremePoint v = lmo(d, c);
      double got = 0.0;
      for (int i : v.support) got += d[i];
      double best = 0.0;
      for (std::uint32_t mask = 1; mask < limit; ++mask) {
        const Subset s = mask_to_subset(mask, n);
        if (!c.independent(s)) continue;
        double val = 0.0;
        for (int i : s) val += d[i];
        best = std::max(best, val);
      }
      worst = std::max(worst, std::fabs(best - got));
    }
    verdicts.push_back({"lmo_bruteforce", worst, "<=1e-9", worst <= 1e-9});
  }

  // Projection KKT conditions, idempotence, and sampled optimality.
  {
    Rng rng(mix_seed(master, 0x03ULL));
    double worst = 0.0;
    std::vector<double> y(n);
    for (int trial = 0; trial < 300; ++trial) {
      for (double& v : y) v = rng.next_range(-1.5, 2.5);
      const ContinuousPoint x = project(y, c);
      if (!is_feasible(x, c, 1e-9)) worst = std::max(worst, 1.0);
      worst = std::max(worst, projection_kkt_residual(y, x, c));
      const ContinuousPoint again = project(x, c);
      for (int i = 0; i < n; ++i)
        worst = std::max(worst, std::fabs(again[i] - x[i]));
      double dist = 0.0;
      for (int i = 0; i < n; ++i) dist += (y[i] - x[i]) * (y[i] - x[i]);
      for (int probe = 0; probe < 20; ++probe) {
        std::vector<double> dir(n);
        for (double& v : dir) v = rng.next_range(-1.0, 1.0);
        const ExtremePoint e = lmo(dir, c);
        const double w = rng.next_double();
        double other = 0.0;
        for (int i = 0; i < n; ++i) {
          const double z = w * e.coords[i];
          other += (y[i] - z) * (y[i] - z);
        }
        worst = std::max(worst, dist - other);
      }
    }
    verdicts.push_back({"projection_kkt", worst, "<=1e-9", worst <= 1e-9});
  }

  // Pipage rounding: feasibility always, marginals preserved, value no
  // worse than the multilinear value.
  {
    Rng rng(mix_seed(master, 0x04ULL));
    std::vector<double> x(n, 0.0);
    std::vector<double> dir(n);
    double weight_left = 1.0;
    for (int p = 0; p < 4; ++p) {
      for (double& v : dir) v = rng.next_range(-1.0, 1.0);
      const ExtremePoint e = lmo(dir, c);
      const double w = p == 3 ? weight_left : weight_left * rng.next_double();
      weight_left -= w;
      for (int i = 0; i < n; ++i) x[i] += w * e.coords[i];
    }
    const int trials = 4000;
    int infeasible = 0;
    std::vector<double> freq(n, 0.0);
    double value_sum = 0.0, value_sq = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      const RoundingOutcome r = pipage_round(x, c, rng);
      if (!c.independent(r.set)) ++infeasible;
      for (int i : r.set) freq[i] += 1.0;
      const double val = f.expected_value(r.set);
      value_sum += val;
      value_sq += val * val;
    }
    verdicts.push_back({"pipage_feasible", double(infeasible), "==0",
                        infeasible == 0});
    double worst_marginal = 0.0;
    for (int i = 0; i < n; ++i) {
      const double p = freq[i] / trials;
      const double se = std::sqrt(x[i] * (1.0 - x[i]) / trials);
      const double dev = std::fabs(p - x[i]);
      worst_marginal = std::max(
          worst_marginal, se > 0.0 ? dev / se : (dev > 0.0 ? 1e9 : 0.0));
    }
    verdicts.push_back({"pipage_marginals", worst_marginal, "<=3",
                        worst_marginal <= 3.0});
    const double mean = value_sum / trials;
    const double var =
        std::max(0.0, (value_sq - trials * mean * mean) / (trials - 1));
    const double se = std::sqrt(var / trials);
    const double deficit_sigmas =
        se > 0.0 ? (exact_multilinear(f, x) - mean) / se
                 : (exact_multilinear(f, x) - mean > 1e-12 ? 1e9 : 0.0);
    verdicts.push_back(
        {"pipage_value", deficit_sigmas, "<=3", deficit_sigmas <= 3.0});
  }

  // Coordinate-wise smoothness of the multilinear gradient along LMO steps.
  {
    Rng rng(mix_seed(master, 0x05ULL));
    const double ratio = lipschitz_scan(f, c, 100, 300, rng);
    verdicts.push_back(
        {"lipschitz_ratio", ratio, "<=1+1e-9", ratio <= 1.0 + 1e-9});
  }

  // Gradient-error decay and the approximation guarantee, using the
  // config's SCG settings across its seed list.
  {
    AlgorithmSpec scg_spec;
    scg_spec.name = "scg";
    for (const auto& alg : cfg.algorithms)
      if (alg.name == "scg") {
        scg_spec = alg;
        break;
      }
    const int T = std::max(scg_spec.T, 300);

    std::vector<double> err_sum(T + 1, 0.0);
    double final_sum = 0.0;
    for (std::uint64_t seed : cfg.seeds) {
      ScgConfig run_cfg{T, scg_spec.batch, scg_spec.schedule,
                        mix_seed(master, 0x06ULL, seed), false, true};
      const OptResult res = run_scg(f, c, run_cfg);
      for (int t = 1; t <= T; ++t) err_sum[t] += res.trace.rows[t].grad_err;
      final_sum += exact_multilinear(f, res.x);
    }
    std::vector<std::pair<int, double>> errors;
    for (int t = 1; t <= T; ++t)
      errors.emplace_back(t, err_sum[t] / double(cfg.seeds.size()));
    const DecayFit fit = decay_slope(errors, 100, T);
    const bool slope_ok = fit.slope >= -0.85 && fit.slope <= -0.50;
    verdicts.push_back(
        {"decay_slope", fit.slope, "[-0.85,-0.50]", slope_ok});
    verdicts.push_back(
        {"decay_r2", fit.r_squared, ">=0.8", fit.r_squared >= 0.8});

    const auto [opt_set, opt] = brute_force_opt(f, c);
    const double ratio =
        approx_ratio(final_sum / double(cfg.seeds.size()), opt);
    const double floor = 1.0 - std::exp(-1.0) - 0.02;
    verdicts.push_back({"approx_ratio", ratio,
                        ">=" + format_double(floor), ratio >= floor});
  }

  std::filesystem::create_directories(cfg.output_dir);
  const std::string path =
      (std::filesystem::path(cfg.output_dir) / "verdicts.csv").string();
  write_verdicts(path, verdicts);
  return verdicts;
}

}  // namespace scg
