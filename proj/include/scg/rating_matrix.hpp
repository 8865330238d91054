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

#include <map>
#include <stdexcept>
#include <vector>

namespace scg {

// Sparse user x item nonnegative scores; a missing entry reads as 0.
// Rows double as the empirical scenario distribution: scenario z = user z.
class RatingMatrix {
 public:
  RatingMatrix(int num_users, int num_items)
      : num_users_(num_users), num_items_(num_items), rows_(num_users_) {
    if (num_users < 1 || num_items < 1)
      throw std::invalid_argument("RatingMatrix dimensions must be positive");
  }

  int num_users() const { return num_users_; }
  int num_items() const { return num_items_; }

  // Negative ratings are rejected, never clamped.  Re-setting an entry
  // overwrites it (last wins).
  void set(int user, int item, double rating) {
    check_user(user);
    if (item < 0 || item >= num_items_)
      throw std::out_of_range("item index out of range");
    if (!(rating >= 0.0))
      throw std::invalid_argument("ratings must be nonnegative");
    rows_[user][item] = rating;
  }

  double rating(int user, int item) const {
    check_user(user);
    const auto& row = rows_[user];
    auto it = row.find(item);
    return it == row.end() ? 0.0 : it->second;
  }

  const std::map<int, double>& row(int user) const {
    check_user(user);
    return rows_[user];
  }

  std::size_t entry_count() const {
    std::size_t c = 0;
    for (const auto& row : rows_) c += row.size();
    return c;
  }

 private:
  void check_user(int user) const {
    if (user < 0 || user >= num_users_)
      throw std::out_of_range("user index out of range");
  }

  int num_users_;
  int num_items_;
  std::vector<std::map<int, double>> rows_;
};

}  // namespace scg
