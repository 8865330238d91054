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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace scg {

// Indices of a subset of the ground set {0..n-1}, strictly increasing.
using Subset = std::vector<int>;

// A point of [0,1]^n (multilinear-extension domain).
using ContinuousPoint = std::vector<double>;

// A gradient or search direction; entries may carry any sign.
using GradientVector = std::vector<double>;

// Exact/enumeration paths are size-capped; crossing the cap, or asking a
// constraint variant for an operation it does not support, raises this.
class capability_error : public std::runtime_error {
 public:
  explicit capability_error(const std::string& what)
      : std::runtime_error(what) {}
};

// Malformed or inconsistent input (ratings files, table files, configs).
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

inline void check_subset(std::span<const int> set, int n) {
  int prev = -1;
  for (int i : set) {
    if (i < 0 || i >= n) throw std::out_of_range("subset index out of range");
    if (i <= prev)
      throw std::invalid_argument("subset indices must be strictly increasing");
    prev = i;
  }
}

// Largest ground-set size for which 2^n enumeration oracles are allowed.
inline constexpr int kMaxExactN = 20;

inline std::uint32_t subset_to_mask(std::span<const int> set) {
  std::uint32_t mask = 0;
  for (int i : set) mask |= (std::uint32_t{1} << i);
  return mask;
}

inline Subset mask_to_subset(std::uint32_t mask, int n) {
  Subset s;
  for (int i = 0; i < n; ++i)
    if (mask & (std::uint32_t{1} << i)) s.push_back(i);
  return s;
}

}  // namespace scg
