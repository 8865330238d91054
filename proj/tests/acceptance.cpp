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

// End-to-end acceptance suite.  Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "scg/scg.hpp"

using namespace scg;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
  if (!pass) ++failures;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir =
      std::filesystem::temp_directory_path() / "scg-acceptance" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// 1. The stochastic gradient estimator is unbiased: per-coordinate sample
// means land within three standard errors of the enumeration gradient.
void criterion_estimator_unbiased() {
  const SetObjective f =
      SetObjective::facility_location(gen_synthetic(6, 8, 0.5, 5, 55));
  const std::vector<double> x(8, 0.5);
  const GradientVector exact = exact_multilinear_grad(f, x);

  const int reps = 10, samples = 100000;
  int checks = 0, within = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(mix_seed(900, rep));
    std::vector<double> sum(8, 0.0), sum_sq(8, 0.0);
    for (int s = 0; s < samples; ++s) {
      const GradientVector g = estimate_stochastic_gradient(f, x, 1, rng);
      for (int i = 0; i < 8; ++i) {
        sum[i] += g[i];
        sum_sq[i] += g[i] * g[i];
      }
    }
    for (int i = 0; i < 8; ++i) {
      const double mean = sum[i] / samples;
      const double var =
          std::max(0.0, (sum_sq[i] - samples * mean * mean) / (samples - 1));
      const double se = std::sqrt(var / samples);
      ++checks;
      if (std::fabs(mean - exact[i]) <= 3.0 * se) ++within;
    }
  }
  const double frac = double(within) / checks;
  report("criterion-1-estimator-unbiasedness", frac >= 0.99,
         std::to_string(within) + "/" + std::to_string(checks) +
             " coordinate means within 3 SE (need >= 99%)");
}

// 2. Gradient-averaging error decays like t^(-2/3): the log-log slope of
// the 20-seed mean of ||grad F(x_t) - d_t||^2 sits in [-0.85, -0.50].
// Sparse ratings with many users keep the per-sample gradient variance
// roughly stationary along the trajectory, so the rho_t envelope is what
// the fit sees.
void criterion_decay() {
  const SetObjective f =
      SetObjective::facility_location(gen_synthetic(100, 10, 0.06, 5, 82));
  const Constraint c = Constraint::cardinality(10, 3);
  const int T = 2000, seeds = 20;

  std::vector<double> mean_err(T + 1, 0.0);
  for (int s = 0; s < seeds; ++s) {
    ScgConfig cfg;
    cfg.T = T;
    cfg.seed = mix_seed(7000, s);
    cfg.exact_diagnostics = true;
    const OptResult res = run_scg(f, c, cfg);
    for (int t = 1; t <= T; ++t)
      mean_err[t] += res.trace.rows[t].grad_err / seeds;
  }
  std::vector<std::pair<int, double>> errors;
  for (int t = 1; t <= T; ++t) errors.emplace_back(t, mean_err[t]);
  const DecayFit fit = decay_slope(errors, 100, T);
  const bool pass =
      fit.slope >= -0.85 && fit.slope <= -0.50 && fit.r_squared >= 0.8;
  std::ostringstream detail;
  detail << "slope=" << fit.slope << " (want [-0.85,-0.50], target -2/3), r2="
         << fit.r_squared << " (want >= 0.8)";
  report("criterion-2-lemma2-decay", pass, detail.str());
}

// 3. SCG reaches the (1 - 1/e) approximation with margin 0.02 on every
// instance: mean over 10 seeds of F(x_T) vs brute-force OPT.
void criterion_approximation() {
  Rng inst_rng(4242);
  const double floor = 1.0 - std::exp(-1.0) - 0.02;
  double worst_ratio = 1e9;
  bool pass = true;
  for (int inst = 0; inst < 10; ++inst) {
    const int n = 6 + inst_rng.next_index(5);        // 6..10
    const int k = 1 + inst_rng.next_index(3);        // 1..3
    const int users = 10 + inst_rng.next_index(15);  // 10..24
    const RatingMatrix m =
        gen_synthetic(users, n, 0.45, 5, mix_seed(500, inst));
    const SetObjective f = inst % 2 == 0
                               ? SetObjective::facility_location(m)
                               : SetObjective::concave_over_modular(m);
    const Constraint c = Constraint::cardinality(n, k);
    const auto [opt_set, opt] = brute_force_opt(f, c);

    double mean_value = 0.0;
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
      ScgConfig cfg;
      cfg.T = 500;
      cfg.seed = mix_seed(600 + inst, s);
      const OptResult res = run_scg(f, c, cfg);
      mean_value += exact_multilinear(f, res.x) / seeds;
    }
    const double ratio = approx_ratio(mean_value, opt);
    worst_ratio = std::min(worst_ratio, ratio);
    pass = pass && ratio >= floor;
  }
  std::ostringstream detail;
  detail << "worst mean-ratio over 10 instances = " << worst_ratio
         << " (need >= " << floor << ")";
  report("criterion-3-approximation", pass, detail.str());
}

// 4. Pipage rounding: always feasible, preserves marginals, and does not
// lose expected value beyond Monte Carlo noise.
void criterion_rounding() {
  bool pass = true;
  std::ostringstream detail;
  for (int inst = 0; inst < 3; ++inst) {
    const int n = inst == 2 ? 10 : 8;
    const RatingMatrix m = gen_synthetic(12, n, 0.5, 5, mix_seed(800, inst));
    const SetObjective f = inst % 2 == 0
                               ? SetObjective::facility_location(m)
                               : SetObjective::concave_over_modular(m);
    const Constraint c = Constraint::cardinality(n, 3);

    // Fractional feasible point from a short SCG run.
    ScgConfig cfg;
    cfg.T = 23;
    cfg.seed = inst;
    const ContinuousPoint x = run_scg(f, c, cfg).x;

    Rng rng(mix_seed(801, inst));
    const int trials = 10000;
    int infeasible = 0;
    std::vector<double> freq(n, 0.0);
    double sum = 0.0, sum_sq = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      const RoundingOutcome out = pipage_round(x, c, rng);
      if (!c.independent(out.set)) ++infeasible;
      for (int i : out.set) freq[i] += 1.0;
      const double v = f.expected_value(out.set);
      sum += v;
      sum_sq += v * v;
    }
    double worst_marginal = 0.0;
    for (int i = 0; i < n; ++i) {
      const double p = freq[i] / trials;
      const double se = std::sqrt(x[i] * (1.0 - x[i]) / trials);
      const double dev = std::fabs(p - x[i]);
      worst_marginal =
          std::max(worst_marginal, se > 0.0 ? dev / se : (dev > 0.0 ? 1e9 : 0.0));
    }
    const double mean = sum / trials;
    const double se_value = std::sqrt(
        std::max(0.0, (sum_sq - trials * mean * mean) / (trials - 1)) /
        trials);
    const double value_floor = exact_multilinear(f, x) - 3.0 * se_value;
    const bool inst_ok =
        infeasible == 0 && worst_marginal <= 3.0 && mean >= value_floor;
    pass = pass && inst_ok;
    detail << "[inst " << inst << ": infeasible=" << infeasible
           << " marginal_dev=" << worst_marginal << "sigma value_mean=" << mean
           << " floor=" << value_floor << "] ";
  }
  report("criterion-4-pipage-rounding", pass, detail.str());
}

// 5. Coordinate-wise smoothness along ascent steps never exceeds the
// m_f sqrt(r) bound.
void criterion_lipschitz() {
  const SetObjective f =
      SetObjective::facility_location(gen_synthetic(14, 8, 0.5, 5, 808));
  const Constraint c = Constraint::cardinality(8, 3);
  Rng rng(909);
  const double ratio = lipschitz_scan(f, c, 100, 1000, rng);
  report("criterion-5-lipschitz-scan", ratio <= 1.0 + 1e-9,
         "max violation ratio = " + format_double(ratio) +
             " (need <= 1 + 1e-9)");
}

// 6. Qualitative benchmark reproduction: with B = 1, SCG's rounded value
// beats SGA and FW on at least 8 of 10 paired seeds.  The wide rating
// range makes single-sample gradients noisy, which is the regime where
// gradient averaging separates from plain ascent; SCG runs the same
// (1/2) t^(-2/3) schedule the benchmark figures use.
void criterion_benchmark_ordering() {
  const SetObjective f =
      SetObjective::facility_location(gen_synthetic(200, 100, 0.1, 50, 2));
  const Constraint c = Constraint::cardinality(100, 20);
  const int T = 500;
  int scg_vs_sga = 0, scg_vs_fw = 0;
  for (int s = 0; s < 10; ++s) {
    ScgConfig a;
    a.T = T;
    a.schedule = RhoSchedule::kExperiments;
    a.seed = mix_seed(1000, s);
    SgaConfig b;
    b.T = T;
    b.seed = mix_seed(2000, s);
    FwConfig w;
    w.T = T;
    w.seed = mix_seed(3000, s);

    Rng round_rng(mix_seed(4000, s));
    const double scg_val =
        f.expected_value(pipage_round(run_scg(f, c, a).x, c, round_rng).set);
    const double sga_val =
        f.expected_value(pipage_round(run_sga(f, c, b).x, c, round_rng).set);
    const double fw_val =
        f.expected_value(pipage_round(run_fw(f, c, w).x, c, round_rng).set);
    if (scg_val >= sga_val) ++scg_vs_sga;
    if (scg_val >= fw_val) ++scg_vs_fw;
  }
  const bool pass = scg_vs_sga >= 8 && scg_vs_fw >= 8;
  report("criterion-6-benchmark-ordering", pass,
         "SCG>=SGA on " + std::to_string(scg_vs_sga) +
             "/10 seeds, SCG>=FW on " + std::to_string(scg_vs_fw) +
             "/10 seeds (need >= 8/10 each)");
}

// 7. The constraint layer agrees with brute force and the KKT conditions
// on 1000 random inputs each.
void criterion_constraint_oracles() {
  Rng rng(111);
  const Constraint card = Constraint::cardinality(8, 3);
  const Constraint part =
      Constraint::partition({0, 0, 0, 1, 1, 2, 2, 2}, {2, 1, 2});

  int lmo_failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Constraint& c = trial % 2 == 0 ? card : part;
    std::vector<double> d(8);
    for (double& v : d) v = rng.next_range(-1.0, 1.0);
    const ExtremePoint v = lmo(d, c);
    double got = 0.0;
    for (int i : v.support) got += d[i];
    if (std::fabs(got - testor::naive_lmo_value(d, c)) > 1e-9 ||
        !c.independent(v.support))
      ++lmo_failures;
  }

  int proj_failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Constraint& c = trial % 2 == 0 ? card : part;
    std::vector<double> y(8);
    for (double& v : y) v = rng.next_range(-2.0, 3.0);
    const ContinuousPoint x = project(y, c);
    if (!is_feasible(x, c, 1e-9) || projection_kkt_residual(y, x, c) > 1e-9)
      ++proj_failures;
    const ContinuousPoint again = project(x, c);
    for (int i = 0; i < 8; ++i)
      if (std::fabs(again[i] - x[i]) > 1e-9) {
        ++proj_failures;
        break;
      }
  }
  report("criterion-7-constraint-oracles",
         lmo_failures == 0 && proj_failures == 0,
         "lmo mismatches=" + std::to_string(lmo_failures) +
             ", projection KKT failures=" + std::to_string(proj_failures) +
             " (need 0 at 1e-9)");
}

// 8. Evaluation accounting on the shipped smoke config matches the nBT and
// nkB closed forms exactly.
void criterion_accounting() {
  ExperimentConfig cfg =
      parse_config_file(std::string(SCG_CONFIG_DIR) + "/smoke.cfg");
  cfg.output_dir = fresh_dir("smoke").string();
  const ExperimentOutput out = run_experiment(cfg);

  bool pass = out.cells.size() == 3;
  std::ostringstream detail;
  const int n = 7;
  for (const auto& cell : out.cells) {
    long long want = 0;
    if (cell.algorithm == "greedy")
      want = (long long)(n)*cell.k * cell.batch;
    else {
      const auto& alg = cell.algorithm == "scg" ? cfg.algorithms[0]
                                                : cfg.algorithms[1];
      want = (long long)(n)*alg.batch * alg.T;
    }
    detail << "[" << cell.algorithm << ": got=" << cell.total_evals
           << " want=" << want << "] ";
    pass = pass && cell.total_evals == want && cell.status == "ok";
  }
  report("criterion-8-eval-accounting", pass, detail.str());
}

// 9. Two invocations of the full desk config produce byte-identical
// outputs once the timing column is stripped.
void criterion_determinism() {
  ExperimentConfig cfg =
      parse_config_file(std::string(SCG_CONFIG_DIR) + "/desk.cfg");
  const auto dir_a = fresh_dir("desk-a");
  const auto dir_b = fresh_dir("desk-b");

  cfg.output_dir = dir_a.string();
  const ExperimentOutput first = run_experiment(cfg);
  cfg.output_dir = dir_b.string();
  run_experiment(cfg);

  bool pass = first.all_ok && !first.verdicts.empty();
  for (const auto& v : first.verdicts) pass = pass && v.pass;
  std::string first_mismatch;
  int compared = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir_a)) {
    const std::string name = entry.path().filename().string();
    const std::string a = slurp(entry.path().string());
    const std::string b = slurp((dir_b / name).string());
    ++compared;
    const bool same = name == "summary.csv"
                          ? strip_timing_column(a) == strip_timing_column(b)
                          : a == b;
    if (!same && first_mismatch.empty()) first_mismatch = name;
    pass = pass && same;
  }
  pass = pass && compared > 0;
  report("criterion-9-determinism", pass,
         std::to_string(compared) + " output files compared" +
             (first_mismatch.empty() ? "" : ", first mismatch: " +
                                                first_mismatch));
}

}  // namespace

int main() {
  criterion_estimator_unbiased();
  criterion_decay();
  criterion_approximation();
  criterion_rounding();
  criterion_lipschitz();
  criterion_benchmark_ordering();
  criterion_constraint_oracles();
  criterion_accounting();
  criterion_determinism();
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
