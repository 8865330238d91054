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
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scg/common.hpp"
#include "scg/rating_matrix.hpp"

namespace scg {

struct GroundSet {
  int n = 0;
  std::vector<std::string> labels;  // empty, or one unique label per element

  GroundSet() = default;
  explicit GroundSet(int n_, std::vector<std::string> labels_ = {})
      : n(n_), labels(std::move(labels_)) {
    if (n < 1) throw std::invalid_argument("ground set must be nonempty");
    if (!labels.empty()) {
      if (int(labels.size()) != n)
        throw std::invalid_argument("label count must equal ground set size");
      std::set<std::string> distinct(labels.begin(), labels.end());
      if (int(distinct.size()) != n)
        throw std::invalid_argument("labels must be unique");
    }
  }
};

enum class ObjectiveKind { kFacilityLocation, kConcaveOverModular, kExplicitTable };

// f(S, user) = max_{j in S} r_{user,j}; 0 on the empty set.
inline double eval_facility_location(const RatingMatrix& m,
                                     std::span<const int> set, int user) {
  check_subset(set, m.num_items());
  double best = 0.0;
  const auto& row = m.row(user);  // range-checks the user
  for (int j : set) {
    auto it = row.find(j);
    if (it != row.end() && it->second > best) best = it->second;
  }
  return best;
}

// f(S, user) = sqrt(sum_{j in S} r_{user,j}); 0 on the empty set.
inline double eval_concave_over_modular(const RatingMatrix& m,
                                        std::span<const int> set, int user) {
  check_subset(set, m.num_items());
  double total = 0.0;
  const auto& row = m.row(user);
  for (int j : set) {
    auto it = row.find(j);
    if (it != row.end()) total += it->second;
  }
  return std::sqrt(total);
}

// A stochastic set function f~(S, z) with a finite scenario set sampled
// uniformly.  Immutable after construction; safe to share across threads.
class SetObjective {
 public:
  static SetObjective facility_location(RatingMatrix ratings,
                                        std::vector<std::string> labels = {}) {
    return SetObjective(ObjectiveKind::kFacilityLocation, std::move(ratings),
                        std::move(labels));
  }

  static SetObjective concave_over_modular(
      RatingMatrix ratings, std::vector<std::string> labels = {}) {
    return SetObjective(ObjectiveKind::kConcaveOverModular, std::move(ratings),
                        std::move(labels));
  }

  // Deterministic objective given by its full value table (one scenario).
  // values[mask] is the value of the subset encoded by mask; n <= 20.
  static SetObjective explicit_table(int n, std::vector<double> values) {
    return SetObjective(n, std::move(values));
  }

  ObjectiveKind kind() const { return kind_; }
  int n() const { return ground_.n; }
  const GroundSet& ground() const { return ground_; }
  int scenario_count() const { return scenario_count_; }

  // f~(S, z)
  double scenario_value(std::span<const int> set, int z) const {
    check_scenario(z);
    switch (kind_) {
      case ObjectiveKind::kFacilityLocation:
        return eval_facility_location(ratings_, set, z);
      case ObjectiveKind::kConcaveOverModular:
        return eval_concave_over_modular(ratings_, set, z);
      case ObjectiveKind::kExplicitTable:
      default:
        check_subset(set, n());
        return table_[subset_to_mask(set)];
    }
  }

  // Exact average of f~(S, .) over the uniform scenario distribution.
  double expected_value(std::span<const int> set) const {
    check_subset(set, n());
    if (kind_ == ObjectiveKind::kExplicitTable)
      return table_[subset_to_mask(set)];
    double total = 0.0;
    for (int z = 0; z < scenario_count_; ++z) total += scenario_value(set, z);
    return total / scenario_count_;
  }

  // max_i f({i}) over expected singleton values (the gradient cap m_f).
  double max_singleton() const {
    double best = 0.0;
    for (int j = 0; j < n(); ++j) {
      const int single[1] = {j};
      best = std::max(best, expected_value(single));
    }
    return best;
  }

  // sqrt(n) * max_j E[f~({j}, z)^2]^{1/2}, the stochastic-gradient
  // variance cap reported alongside runs.
  double sigma_upper_bound() const {
    double worst = 0.0;
    for (int j = 0; j < n(); ++j) {
      const int single[1] = {j};
      double mean_sq = 0.0;
      for (int z = 0; z < scenario_count_; ++z) {
        double v = scenario_value(single, z);
        mean_sq += v * v;
      }
      mean_sq /= scenario_count_;
      worst = std::max(worst, mean_sq);
    }
    return std::sqrt(double(n())) * std::sqrt(worst);
  }

  // Full expected-value table indexed by subset bitmask; built once and
  // cached.  Only available for n <= kMaxExactN.
  const std::vector<double>& value_table() const {
    if (n() > kMaxExactN)
      throw capability_error(
          "value table requires n <= 20; use estimate_stochastic_gradient "
          "for larger ground sets");
    std::call_once(cache_->once, [this] { build_table(); });
    return cache_->table;
  }

  // Adds f~(S u {i}, z) - f~(S \ {i}, z) for every i to acc, sharing one
  // sampled set S (given by membership flags) across all coordinates.
  void add_scenario_marginals(const std::vector<std::uint8_t>& members, int z,
                              std::vector<double>& acc) const {
    check_scenario(z);
    switch (kind_) {
      case ObjectiveKind::kFacilityLocation:
        marginals_facility(members, z, acc);
        break;
      case ObjectiveKind::kConcaveOverModular:
        marginals_concave(members, z, acc);
        break;
      case ObjectiveKind::kExplicitTable:
      default:
        marginals_table(members, acc);
        break;
    }
  }

 private:
  SetObjective(ObjectiveKind kind, RatingMatrix ratings,
               std::vector<std::string> labels)
      : ground_(ratings.num_items(), std::move(labels)),
        kind_(kind),
        ratings_(std::move(ratings)),
        scenario_count_(ratings_.num_users()) {}

  SetObjective(int n, std::vector<double> values)
      : ground_(n),
        kind_(ObjectiveKind::kExplicitTable),
        ratings_(1, 1),
        table_(std::move(values)),
        scenario_count_(1) {
    if (n > kMaxExactN)
      throw capability_error("explicit tables are capped at n <= 20");
    if (table_.size() != (std::size_t{1} << n))
      throw std::invalid_argument("explicit table must have 2^n entries");
    for (double v : table_)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument(
            "explicit table values must be finite and nonnegative");
  }

  void check_scenario(int z) const {
    if (z < 0 || z >= scenario_count_)
      throw std::out_of_range("scenario index out of range");
  }

  // One O(2^n) sweep per scenario, folding each scenario's table into the
  // running average.
  void build_table() const {
    const int nn = n();
    const std::size_t size = std::size_t{1} << nn;
    if (kind_ == ObjectiveKind::kExplicitTable) {
      cache_->table = table_;
      return;
    }
    std::vector<double> acc(size, 0.0), per_user(size, 0.0);
    const bool facility = kind_ == ObjectiveKind::kFacilityLocation;
    for (int z = 0; z < scenario_count_; ++z) {
      per_user[0] = 0.0;
      for (std::size_t mask = 1; mask < size; ++mask) {
        const int low = std::countr_zero(mask);
        const std::size_t rest = mask & (mask - 1);
        const double r = ratings_.rating(z, low);
        per_user[mask] =
            facility ? std::max(per_user[rest], r) : per_user[rest] + r;
      }
      if (facility) {
        for (std::size_t mask = 0; mask < size; ++mask) acc[mask] += per_user[mask];
      } else {
        for (std::size_t mask = 0; mask < size; ++mask)
          acc[mask] += std::sqrt(per_user[mask]);
      }
    }
    for (double& v : acc) v /= scenario_count_;
    cache_->table = std::move(acc);
  }

  void marginals_facility(const std::vector<std::uint8_t>& members, int z,
                          std::vector<double>& acc) const {
    // Track the best and second-best rating inside S; every coordinate's
    // marginal then costs O(1).
    double best = 0.0, second = 0.0;
    int best_item = -1;
    const auto& row = ratings_.row(z);
    for (const auto& [item, r] : row) {
      if (!members[item]) continue;
      if (r > best) {
        second = best;
        best = r;
        best_item = item;
      } else if (r > second) {
        second = r;
      }
    }
    for (const auto& [item, r] : row) {
      if (members[item]) continue;
      if (r > best) acc[item] += r - best;
    }
    if (best_item >= 0) acc[best_item] += best - second;
  }

  void marginals_concave(const std::vector<std::uint8_t>& members, int z,
                         std::vector<double>& acc) const {
    double total = 0.0;
    const auto& row = ratings_.row(z);
    for (const auto& [item, r] : row)
      if (members[item]) total += r;
    const double base = std::sqrt(total);
    for (const auto& [item, r] : row) {
      if (r == 0.0) continue;
      if (members[item])
        acc[item] += base - std::sqrt(std::max(0.0, total - r));
      else
        acc[item] += std::sqrt(total + r) - base;
    }
  }

  void marginals_table(const std::vector<std::uint8_t>& members,
                       std::vector<double>& acc) const {
    std::uint32_t mask = 0;
    for (int i = 0; i < n(); ++i)
      if (members[i]) mask |= (std::uint32_t{1} << i);
    for (int i = 0; i < n(); ++i) {
      const std::uint32_t bit = std::uint32_t{1} << i;
      acc[i] += table_[mask | bit] - table_[mask & ~bit];
    }
  }

  struct TableCache {
    std::once_flag once;
    std::vector<double> table;
  };

  GroundSet ground_;
  ObjectiveKind kind_;
  RatingMatrix ratings_;
  std::vector<double> table_;  // explicit-table kind only
  int scenario_count_;
  std::shared_ptr<TableCache> cache_ = std::make_shared<TableCache>();
};

}  // namespace scg
