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
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "scg/common.hpp"
#include "scg/optimize.hpp"
#include "scg/rating_matrix.hpp"
#include "scg/rng.hpp"
#include "scg/verify.hpp"

namespace scg {

enum class RatingsFormat { kTripletTsv, kMovieLensDat };

// Shortest round-trip-exact decimal form; keeps CSV output byte-stable.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

struct RawRating {
  long long user;
  long long item;
  double rating;
};

inline void parse_error(std::size_t line, const std::string& what) {
  throw data_error("line " + std::to_string(line) + ": " + what);
}

inline std::vector<RawRating> parse_triplets(std::istream& in,
                                             RatingsFormat format) {
  std::vector<RawRating> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    RawRating r{};
    if (format == RatingsFormat::kTripletTsv) {
      std::istringstream fields(line);
      if (!(fields >> r.user >> r.item >> r.rating))
        parse_error(line_no, "expected 'user item rating'");
      std::string extra;
      if (fields >> extra) parse_error(line_no, "trailing fields");
    } else {
      // user::item::rating::timestamp, timestamp ignored
      std::string part[4];
      std::size_t pos = 0;
      for (int f = 0; f < 4; ++f) {
        const std::size_t next = line.find("::", pos);
        if (f < 3 && next == std::string::npos)
          parse_error(line_no, "expected 'user::item::rating::timestamp'");
        part[f] = line.substr(pos, next == std::string::npos
                                       ? std::string::npos
                                       : next - pos);
        pos = next == std::string::npos ? std::string::npos : next + 2;
      }
      try {
        std::size_t used = 0;
        r.user = std::stoll(part[0], &used);
        if (used != part[0].size()) throw std::invalid_argument("user");
        r.item = std::stoll(part[1], &used);
        if (used != part[1].size()) throw std::invalid_argument("item");
        r.rating = std::stod(part[2], &used);
        if (used != part[2].size()) throw std::invalid_argument("rating");
      } catch (const std::exception&) {
        parse_error(line_no, "malformed field");
      }
    }
    if (r.user < 0 || r.item < 0) parse_error(line_no, "negative index");
    if (!(r.rating >= 0.0)) parse_error(line_no, "negative rating");
    out.push_back(r);
  }
  if (out.empty()) throw data_error("ratings file holds no entries");
  return out;
}

}  // namespace detail

// Triplet files use their indices verbatim (0-based); MovieLens-style ids
// are arbitrary and get remapped to dense 0-based indices in ascending id
// order.  A repeated (user, item) pair overwrites (last wins) with a
// warning.
inline RatingMatrix load_ratings(std::istream& in, RatingsFormat format,
                                 std::ostream* warnings = nullptr) {
  const auto raw = detail::parse_triplets(in, format);
  std::ostream& warn = warnings ? *warnings : std::cerr;

  std::vector<detail::RawRating> entries = raw;
  if (format == RatingsFormat::kMovieLensDat) {
    std::map<long long, int> user_ids, item_ids;
    for (const auto& r : raw) {
      user_ids.emplace(r.user, 0);
      item_ids.emplace(r.item, 0);
    }
    int next = 0;
    for (auto& [id, dense] : user_ids) dense = next++;
    next = 0;
    for (auto& [id, dense] : item_ids) dense = next++;
    for (auto& r : entries) {
      r.user = user_ids[r.user];
      r.item = item_ids[r.item];
    }
  }

  long long max_user = 0, max_item = 0;
  for (const auto& r : entries) {
    max_user = std::max(max_user, r.user);
    max_item = std::max(max_item, r.item);
  }
  if (max_user + 1 > 2'000'000 || max_item + 1 > 2'000'000)
    throw data_error("ratings matrix dimensions are implausibly large");

  RatingMatrix m(int(max_user) + 1, int(max_item) + 1);
  std::map<std::pair<int, int>, bool> seen;
  for (const auto& r : entries) {
    const std::pair<int, int> key{int(r.user), int(r.item)};
    if (auto [it, inserted] = seen.emplace(key, true); !inserted)
      warn << "warning: duplicate rating for user " << key.first << " item "
           << key.second << "; keeping the last value\n";
    m.set(key.first, key.second, r.rating);
  }
  return m;
}

inline RatingMatrix load_ratings(const std::string& path,
                                 RatingsFormat format,
                                 std::ostream* warnings = nullptr) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open ratings file: " + path);
  return load_ratings(in, format, warnings);
}

// Desk-scale stand-in for a real ratings corpus: every (user, item) cell is
// present independently with probability `density`, rated uniformly on
// {1..rating_max}.
inline RatingMatrix gen_synthetic(int num_users, int num_items,
                                  double density, int rating_max,
                                  std::uint64_t seed) {
  if (!(density > 0.0 && density <= 1.0))
    throw std::invalid_argument("density must lie in (0,1]");
  if (rating_max < 1)
    throw std::invalid_argument("rating_max must be >= 1");
  RatingMatrix m(num_users, num_items);
  Rng rng(seed);
  for (int u = 0; u < num_users; ++u)
    for (int i = 0; i < num_items; ++i)
      if (rng.next_double() < density)
        m.set(u, i, double(1 + rng.next_index(rating_max)));
  return m;
}

// Explicit-table objective file: first line n, then 2^n lines
// `bitmask value`.
inline std::pair<int, std::vector<double>> load_explicit_table(
    std::istream& in) {
  int n = 0;
  if (!(in >> n)) throw data_error("table file: missing ground-set size");
  if (n < 1 || n > kMaxExactN)
    throw data_error("table file: n must lie in [1, 20]");
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> values(size, -1.0);
  std::size_t filled = 0;
  std::uint64_t mask = 0;
  double value = 0.0;
  while (in >> mask >> value) {
    if (mask >= size) throw data_error("table file: bitmask out of range");
    if (values[mask] >= 0.0) throw data_error("table file: duplicate bitmask");
    if (!(value >= 0.0)) throw data_error("table file: negative value");
    values[mask] = value;
    ++filled;
  }
  if (filled != size)
    throw data_error("table file: expected " + std::to_string(size) +
                     " entries, found " + std::to_string(filled));
  return {n, std::move(values)};
}

inline std::pair<int, std::vector<double>> load_explicit_table(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open table file: " + path);
  return load_explicit_table(in);
}

inline void write_file_atomic(const std::string& path,
                              const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("cannot write file: " + tmp);
    out << contents;
  }
  std::filesystem::rename(tmp, path);
}

inline std::string trace_to_csv(const Trace& trace) {
  std::string out = "t,rho,value_est,grad_err,evals,x_sparsity\n";
  for (const auto& row : trace.rows) {
    out += std::to_string(row.t);
    out += ',';
    out += format_double(row.rho);
    out += ',';
    out += format_double(row.value_est);
    out += ',';
    out += format_double(row.grad_err);
    out += ',';
    out += std::to_string(row.wall_evals);
    out += ',';
    out += std::to_string(detail::sparsity(row.x));
    out += '\n';
  }
  return out;
}

inline void write_trace_csv(const std::string& path, const Trace& trace) {
  write_file_atomic(path, trace_to_csv(trace));
}

inline std::string verdicts_to_csv(std::span<const Verdict> verdicts) {
  std::string out = "name,metric,threshold,status\n";
  for (const auto& v : verdicts) {
    out += v.name;
    out += ',';
    out += format_double(v.metric);
    out += ',';
    out += v.threshold;
    out += ',';
    out += v.pass ? "pass" : "fail";
    out += '\n';
  }
  return out;
}

inline void write_verdicts(const std::string& path,
                           std::span<const Verdict> verdicts) {
  write_file_atomic(path, verdicts_to_csv(verdicts));
}

// Full per-iteration iterates; large, so gated behind a config flag.
inline void write_iterates_csv(const std::string& path, const Trace& trace) {
  std::string out = "t";
  const std::size_t n = trace.rows.empty() ? 0 : trace.rows.front().x.size();
  for (std::size_t i = 0; i < n; ++i) out += ",x" + std::to_string(i);
  out += '\n';
  for (const auto& row : trace.rows) {
    out += std::to_string(row.t);
    for (double v : row.x) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace scg
