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

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "scg/common.hpp"
#include "scg/constraint.hpp"
#include "scg/optimize.hpp"

namespace scg {

struct AlgorithmSpec {
  std::string name;  // scg | sga | fw | greedy
  int T = 100;
  int batch = 1;
  double c = 1.0;  // SGA stepsize constant
  RhoSchedule schedule = RhoSchedule::kLemma2;
};

struct DataSpec {
  enum class Source { kTriplet, kMovieLens, kSynthetic, kTable };
  Source source = Source::kSynthetic;
  std::string path;
  int users = 50;
  int items = 20;
  double density = 0.2;
  int rating_max = 5;
  std::uint64_t seed = 1;
};

struct ExperimentConfig {
  std::string objective = "facility-location";
  DataSpec data;
  std::string constraint = "cardinality:1";
  std::vector<AlgorithmSpec> algorithms;
  std::vector<int> k_sweep;  // empty: use the constraint as written
  std::vector<std::uint64_t> seeds;
  std::string output_dir = "out";
  bool exact_diagnostics = false;
  bool dump_iterates = false;
  int jobs = 1;
};

// Named independence-oracle matroids reachable from config files as
// `matroid:<name>`.  Register factories at startup; the library ships
// `pairs` (elements paired {0,1},{2,3},... with one pick per pair) as a
// worked example of the oracle path.
using MatroidFactory = std::function<Constraint(int n)>;

inline std::map<std::string, MatroidFactory>& matroid_registry() {
  static std::map<std::string, MatroidFactory> registry{
      {"pairs", [](int n) {
         return Constraint::independence_oracle(
             n,
             [](const Subset& s) {
               int prev_pair = -1;
               for (int i : s) {
                 if (i / 2 == prev_pair) return false;
                 prev_pair = i / 2;
               }
               return true;
             },
             (n + 1) / 2);
       }}};
  return registry;
}

inline void register_matroid_plugin(const std::string& name,
                                    MatroidFactory factory) {
  matroid_registry()[name] = std::move(factory);
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  parts.push_back(current);
  return parts;
}

inline long long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(trim(s), &used);
    if (used != trim(s).size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw data_error("cannot parse integer for " + what + ": '" + s + "'");
  }
}

inline double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(trim(s), &used);
    if (used != trim(s).size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw data_error("cannot parse number for " + what + ": '" + s + "'");
  }
}

inline bool parse_bool(const std::string& s, const std::string& what) {
  const std::string v = trim(s);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw data_error("cannot parse boolean for " + what + ": '" + s + "'");
}

}  // namespace detail

// Grammar: `cardinality:k`, `partition:b0,b1,...|c0,c1,...` (per-element
// block ids, then per-block caps), or `matroid:<plugin name>`.
inline Constraint parse_constraint(const std::string& grammar, int n) {
  const auto colon = grammar.find(':');
  if (colon == std::string::npos)
    throw data_error("constraint grammar needs 'kind:spec': " + grammar);
  const std::string kind = detail::trim(grammar.substr(0, colon));
  const std::string spec = detail::trim(grammar.substr(colon + 1));

  if (kind == "cardinality") {
    const long long k = detail::parse_int(spec, "cardinality cap");
    if (k < 1 || k > n) throw data_error("cardinality cap must be in [1, n]");
    return Constraint::cardinality(n, int(k));
  }
  if (kind == "partition") {
    const auto bar = spec.find('|');
    if (bar == std::string::npos)
      throw data_error("partition grammar is 'partition:blocks|caps'");
    std::vector<int> block_of, caps;
    for (const auto& tok : detail::split(spec.substr(0, bar), ','))
      block_of.push_back(int(detail::parse_int(tok, "block id")));
    for (const auto& tok : detail::split(spec.substr(bar + 1), ','))
      caps.push_back(int(detail::parse_int(tok, "block cap")));
    if (int(block_of.size()) != n)
      throw data_error("partition must assign a block to each of n elements");
    try {
      return Constraint::partition(std::move(block_of), std::move(caps));
    } catch (const std::invalid_argument& e) {
      throw data_error(std::string("bad partition: ") + e.what());
    }
  }
  if (kind == "matroid") {
    const auto& registry = matroid_registry();
    const auto it = registry.find(spec);
    if (it == registry.end())
      throw data_error("unknown matroid plugin: " + spec);
    return it->second(n);
  }
  throw data_error("unknown constraint kind: " + kind);
}

// `triplet:<path>`, `movielens:<path>`, `table:<path>`, or
// `synthetic:users=U,items=I,density=D,rating_max=R,seed=S`.
inline DataSpec parse_data_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw data_error("data spec needs 'source:detail': " + text);
  const std::string kind = detail::trim(text.substr(0, colon));
  const std::string rest = detail::trim(text.substr(colon + 1));

  DataSpec spec;
  if (kind == "triplet") {
    spec.source = DataSpec::Source::kTriplet;
    spec.path = rest;
    return spec;
  }
  if (kind == "movielens") {
    spec.source = DataSpec::Source::kMovieLens;
    spec.path = rest;
    return spec;
  }
  if (kind == "table") {
    spec.source = DataSpec::Source::kTable;
    spec.path = rest;
    return spec;
  }
  if (kind == "synthetic") {
    spec.source = DataSpec::Source::kSynthetic;
    for (const auto& field : detail::split(rest, ',')) {
      const auto eq = field.find('=');
      if (eq == std::string::npos)
        throw data_error("synthetic spec fields are key=value: " + field);
      const std::string key = detail::trim(field.substr(0, eq));
      const std::string value = detail::trim(field.substr(eq + 1));
      if (key == "users")
        spec.users = int(detail::parse_int(value, "users"));
      else if (key == "items")
        spec.items = int(detail::parse_int(value, "items"));
      else if (key == "density")
        spec.density = detail::parse_real(value, "density");
      else if (key == "rating_max")
        spec.rating_max = int(detail::parse_int(value, "rating_max"));
      else if (key == "seed")
        spec.seed = std::uint64_t(detail::parse_int(value, "seed"));
      else
        throw data_error("unknown synthetic field: " + key);
    }
    return spec;
  }
  throw data_error("unknown data source: " + kind);
}

// Line-oriented `key = value` config with one `[algorithm]` block per
// method; `#` starts a comment.
inline ExperimentConfig parse_config(std::istream& in,
                                     const std::string& origin) {
  ExperimentConfig cfg;
  AlgorithmSpec* current = nullptr;
  std::string line;
  std::size_t line_no = 0;

  const auto fail = [&](const std::string& what) {
    throw data_error(origin + ":" + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    if (line == "[algorithm]") {
      cfg.algorithms.emplace_back();
      current = &cfg.algorithms.back();
      continue;
    }
    if (line.front() == '[') fail("unknown section " + line);

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));

    if (current) {
      if (key == "name")
        current->name = value;
      else if (key == "T")
        current->T = int(detail::parse_int(value, "T"));
      else if (key == "B")
        current->batch = int(detail::parse_int(value, "B"));
      else if (key == "c")
        current->c = detail::parse_real(value, "c");
      else if (key == "schedule") {
        if (value == "lemma2")
          current->schedule = RhoSchedule::kLemma2;
        else if (value == "experiments")
          current->schedule = RhoSchedule::kExperiments;
        else
          fail("unknown schedule: " + value);
      } else
        fail("unknown algorithm key: " + key);
      continue;
    }

    if (key == "objective")
      cfg.objective = value;
    else if (key == "data")
      cfg.data = parse_data_spec(value);
    else if (key == "constraint")
      cfg.constraint = value;
    else if (key == "k_sweep") {
      for (const auto& tok : detail::split(value, ','))
        cfg.k_sweep.push_back(int(detail::parse_int(tok, "k_sweep")));
    } else if (key == "seeds") {
      for (const auto& tok : detail::split(value, ','))
        cfg.seeds.push_back(std::uint64_t(detail::parse_int(tok, "seeds")));
    } else if (key == "output")
      cfg.output_dir = value;
    else if (key == "exact_diagnostics")
      cfg.exact_diagnostics = detail::parse_bool(value, key);
    else if (key == "dump_iterates")
      cfg.dump_iterates = detail::parse_bool(value, key);
    else if (key == "jobs")
      cfg.jobs = int(detail::parse_int(value, "jobs"));
    else
      fail("unknown key: " + key);
  }

  if (cfg.objective != "facility-location" &&
      cfg.objective != "concave-over-modular" &&
      cfg.objective != "explicit-table")
    throw data_error(origin + ": unknown objective: " + cfg.objective);
  if (cfg.seeds.empty())
    throw data_error(origin + ": config needs a nonempty seeds list");
  if (cfg.algorithms.empty())
    throw data_error(origin + ": config needs at least one [algorithm]");
  for (const auto& alg : cfg.algorithms) {
    if (alg.name != "scg" && alg.name != "sga" && alg.name != "fw" &&
        alg.name != "greedy")
      throw data_error(origin + ": unknown algorithm: " + alg.name);
    if (alg.T < 1 || alg.batch < 1)
      throw data_error(origin + ": T and B must be >= 1");
  }
  if (cfg.jobs < 1) throw data_error(origin + ": jobs must be >= 1");
  return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open config file: " + path);
  return parse_config(in, path);
}

}  // namespace scg
