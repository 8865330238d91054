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

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>

#include "scg/config.hpp"
#include "scg/experiment.hpp"
#include "scg/io.hpp"
#include "scg/objective.hpp"

namespace scg {

// Exit codes: 0 success, 1 configuration/usage error, 2 failed verification.

namespace detail {

inline int cmd_run(const std::string& config_path) {
  const ExperimentConfig cfg = parse_config_file(config_path);
  const ExperimentOutput out = run_experiment(cfg);
  std::cout << "wrote " << out.summary_path << " (" << out.cells.size()
            << " cells)\n";
  for (const auto& cell : out.cells)
    if (cell.status != "ok")
      std::cout << "cell " << cell.algorithm << " k=" << cell.k
                << " seed=" << cell.seed << " failed: " << cell.status << "\n";
  return 0;
}

inline int cmd_verify(const std::string& config_path) {
  const ExperimentConfig cfg = parse_config_file(config_path);
  const auto verdicts = run_verification(cfg);
  bool all_pass = true;
  for (const auto& v : verdicts) {
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << v.name
              << " metric=" << format_double(v.metric)
              << " threshold=" << v.threshold << "\n";
    all_pass = all_pass && v.pass;
  }
  return all_pass ? 0 : 2;
}

inline int cmd_gen_data(const std::string& spec_text,
                        const std::string& out_path) {
  const DataSpec spec = parse_data_spec("synthetic:" + spec_text);
  const RatingMatrix m = gen_synthetic(spec.users, spec.items, spec.density,
                                       spec.rating_max, spec.seed);
  std::string out;
  for (int u = 0; u < m.num_users(); ++u)
    for (const auto& [item, rating] : m.row(u))
      out += std::to_string(u) + "\t" + std::to_string(item) + "\t" +
             format_double(rating) + "\n";
  write_file_atomic(out_path, out);
  std::cout << "wrote " << out_path << " (" << m.entry_count()
            << " ratings)\n";
  return 0;
}

inline int cmd_inspect(const std::string& path, std::string format) {
  if (format.empty()) {
    std::ifstream probe(path);
    if (!probe) throw data_error("cannot open ratings file: " + path);
    std::string first_line;
    std::getline(probe, first_line);
    format = first_line.find("::") != std::string::npos ? "movielens"
                                                        : "triplet";
  }
  const RatingMatrix m =
      load_ratings(path, format == "movielens" ? RatingsFormat::kMovieLensDat
                                               : RatingsFormat::kTripletTsv);
  const SetObjective f = SetObjective::facility_location(m);
  const double cells = double(m.num_users()) * double(m.num_items());
  std::cout << "N=" << m.num_users() << "\n"
            << "n=" << m.num_items() << "\n"
            << "ratings=" << m.entry_count() << "\n"
            << "density=" << format_double(double(m.entry_count()) / cells)
            << "\n"
            << "m_f=" << format_double(f.max_singleton()) << "\n"
            << "sigma_bound=" << format_double(f.sigma_upper_bound()) << "\n";
  return 0;
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv) {
  CLI::App app{
      "Benchmark harness for constrained stochastic submodular maximization"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "run the experiment grid of a config");
  run->add_option("config", run_config, "config file")->required();

  std::string verify_config;
  auto* verify =
      app.add_subcommand("verify", "run the verification suite of a config");
  verify->add_option("config", verify_config, "config file")->required();

  std::string gen_spec, gen_out;
  auto* gen = app.add_subcommand("gen-data", "generate synthetic ratings");
  gen->add_option("spec", gen_spec,
                  "users=U,items=I,density=D,rating_max=R,seed=S")
      ->required();
  gen->add_option("out", gen_out, "output triplet file")->required();

  std::string inspect_path, inspect_format;
  auto* inspect = app.add_subcommand("inspect", "summarize a ratings file");
  inspect->add_option("ratings", inspect_path, "ratings file")->required();
  inspect->add_option("--format", inspect_format, "triplet | movielens");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (run->parsed()) return detail::cmd_run(run_config);
    if (verify->parsed()) return detail::cmd_verify(verify_config);
    if (gen->parsed()) return detail::cmd_gen_data(gen_spec, gen_out);
    return detail::cmd_inspect(inspect_path, inspect_format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace scg
