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

#include <cmath>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "scg/constraint.hpp"
#include "scg/rng.hpp"
#include "scg/verify.hpp"

using namespace scg;

namespace {

Constraint pairs_matroid(int n) {
  // One pick per adjacent pair {0,1}, {2,3}, ...
  return Constraint::independence_oracle(
      n,
      [](const Subset& s) {
        int prev = -1;
        for (int i : s) {
          if (i / 2 == prev) return false;
          prev = i / 2;
        }
        return true;
      },
      (n + 1) / 2);
}

}  // namespace

TEST_SUITE("constraint") {
  TEST_CASE("lmo picks the top coordinates") {
    const Constraint c = Constraint::cardinality(3, 2);
    const ExtremePoint v = lmo(std::vector<double>{3.0, 1.0, 2.0}, c);
    CHECK(v.coords == std::vector<double>{1.0, 0.0, 1.0});
    CHECK(v.support == Subset{0, 2});
  }

  TEST_CASE("lmo drops nonpositive coordinates") {
    const Constraint c = Constraint::cardinality(2, 1);
    const ExtremePoint v = lmo(std::vector<double>{-1.0, -2.0}, c);
    CHECK(v.coords == std::vector<double>{0.0, 0.0});
    CHECK(v.support.empty());
  }

  TEST_CASE("lmo on a partition matroid") {
    const Constraint c = Constraint::partition({0, 0, 1, 1}, {1, 1});
    const ExtremePoint v = lmo(std::vector<double>{5.0, 4.0, 3.0, 2.0}, c);
    CHECK(v.coords == std::vector<double>{1.0, 0.0, 1.0, 0.0});
  }

  TEST_CASE("lmo dimension mismatch") {
    const Constraint c = Constraint::cardinality(3, 1);
    CHECK_THROWS_AS(lmo(std::vector<double>{1.0}, c), std::invalid_argument);
  }

  TEST_CASE("lmo equals brute force over independent sets") {
    Rng rng(7);
    const Constraint card = Constraint::cardinality(8, 3);
    const Constraint part =
        Constraint::partition({0, 0, 0, 1, 1, 2, 2, 2}, {2, 1, 2});
    const Constraint oracle = pairs_matroid(8);
    for (const Constraint* c : {&card, &part, &oracle}) {
      for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> d(8);
        for (double& v : d) v = rng.next_range(-1.0, 1.0);
        const ExtremePoint v = lmo(d, *c);
        double got = 0.0;
        for (int i : v.support) got += d[i];
        CHECK(got == doctest::Approx(testor::naive_lmo_value(d, *c))
                         .epsilon(1e-12));
        CHECK(c->independent(v.support));
        CHECK(int(v.support.size()) <= c->rank());
      }
    }
  }

  TEST_CASE("lmo is invariant under positive rescaling") {
    Rng rng(8);
    const Constraint c = Constraint::cardinality(6, 3);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> d(6), scaled(6);
      for (double& v : d) v = rng.next_range(-1.0, 1.0);
      for (double s : {0.5, 2.0, 1000.0}) {
        for (int i = 0; i < 6; ++i) scaled[i] = s * d[i];
        CHECK(lmo(scaled, c).support == lmo(d, c).support);
      }
    }
  }

  TEST_CASE("feasibility checks") {
    const Constraint c = Constraint::cardinality(3, 2);
    CHECK(is_feasible(std::vector<double>{0.5, 0.5, 1.0}, c, 1e-9));
    CHECK_FALSE(is_feasible(std::vector<double>{0.7, 0.7, 0.7}, c, 1e-9));
    CHECK_FALSE(is_feasible(std::vector<double>{-0.1, 0.0, 0.0}, c, 1e-9));
  }

  TEST_CASE("averages of lmo outputs stay feasible") {
    Rng rng(9);
    const Constraint card = Constraint::cardinality(7, 3);
    const Constraint part = Constraint::partition({0, 0, 1, 1, 2, 2, 2},
                                                  {1, 2, 1});
    for (const Constraint* c : {&card, &part}) {
      std::vector<double> x(7, 0.0);
      const int T = 40;
      for (int t = 0; t < T; ++t) {
        std::vector<double> d(7);
        for (double& v : d) v = rng.next_range(-1.0, 1.0);
        const ExtremePoint v = lmo(d, *c);
        for (int i = 0; i < 7; ++i) x[i] += v.coords[i] / T;
      }
      CHECK(is_feasible(x, *c, 1e-9));
    }
  }

  TEST_CASE("oracle-matroid membership via rank inequalities") {
    const Constraint c = pairs_matroid(4);
    CHECK(is_feasible(std::vector<double>{0.5, 0.5, 1.0, 0.0}, c, 1e-9));
    // x_0 + x_1 > 1 violates the rank of the pair {0,1}.
    CHECK_FALSE(is_feasible(std::vector<double>{0.6, 0.6, 0.0, 0.0}, c, 1e-9));

    const Constraint big = pairs_matroid(13);
    CHECK_THROWS_AS(is_feasible(std::vector<double>(13, 0.0), big, 1e-9),
                    capability_error);
  }

  TEST_CASE("projection worked example") {
    const Constraint c = Constraint::cardinality(3, 2);
    const ContinuousPoint x = project(std::vector<double>{0.5, 0.9, 0.8}, c);
    CHECK(x[0] == doctest::Approx(0.5 - 0.2 / 3));
    CHECK(x[1] == doctest::Approx(0.9 - 0.2 / 3));
    CHECK(x[2] == doctest::Approx(0.8 - 0.2 / 3));
    CHECK(x[0] + x[1] + x[2] == doctest::Approx(2.0));
  }

  TEST_CASE("projection fixes feasible points") {
    const Constraint c = Constraint::cardinality(3, 2);
    const std::vector<double> y{0.2, 0.3, 0.9};
    const ContinuousPoint x = project(y, c);
    for (int i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(y[i]));
  }

  TEST_CASE("projection clips then shifts symmetric oversized input") {
    const Constraint c = Constraint::cardinality(2, 1);
    const ContinuousPoint x = project(std::vector<double>{5.0, 5.0}, c);
    CHECK(x[0] == doctest::Approx(0.5));
    CHECK(x[1] == doctest::Approx(0.5));

    // Brute-force grid confirms no feasible point is closer.
    const double best = (5.0 - 0.5) * (5.0 - 0.5) * 2;
    for (double a = 0.0; a <= 1.0; a += 0.01) {
      for (double b = 0.0; b <= std::min(1.0, 1.0 - a + 1e-12); b += 0.01) {
        const double dist = (5.0 - a) * (5.0 - a) + (5.0 - b) * (5.0 - b);
        CHECK(dist >= best - 1e-9);
      }
    }
  }

  TEST_CASE("projection satisfies KKT, idempotence, and optimality") {
    Rng rng(10);
    const Constraint card = Constraint::cardinality(8, 3);
    const Constraint part =
        Constraint::partition({0, 1, 0, 1, 2, 2, 0, 1}, {2, 1, 1});
    for (const Constraint* c : {&card, &part}) {
      for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> y(8);
        for (double& v : y) v = rng.next_range(-2.0, 3.0);
        const ContinuousPoint x = project(y, *c);
        CHECK(is_feasible(x, *c, 1e-9));
        CHECK(projection_kkt_residual(y, x, *c) <= 1e-9);

        const ContinuousPoint twice = project(x, *c);
        for (int i = 0; i < 8; ++i)
          CHECK(std::fabs(twice[i] - x[i]) <= 1e-9);

        double dist = 0.0;
        for (int i = 0; i < 8; ++i) dist += (y[i] - x[i]) * (y[i] - x[i]);
        for (int probe = 0; probe < 25; ++probe) {
          std::vector<double> d(8);
          for (double& v : d) v = rng.next_range(-1.0, 1.0);
          const ExtremePoint e = lmo(d, *c);
          const double w = rng.next_double();
          double other = 0.0;
          for (int i = 0; i < 8; ++i) {
            const double z = w * e.coords[i];
            other += (y[i] - z) * (y[i] - z);
          }
          CHECK(dist <= other + 1e-9);
        }
      }
    }
  }

  TEST_CASE("projection rejects oracle matroids") {
    const Constraint c = pairs_matroid(4);
    CHECK_THROWS_AS(project(std::vector<double>(4, 0.5), c),
                    capability_error);
  }

  TEST_CASE("diameter") {
    CHECK(diameter(Constraint::cardinality(8, 4)) == doctest::Approx(2.0));
    CHECK(diameter(Constraint::partition({0, 0, 1, 1}, {1, 1})) ==
          doctest::Approx(std::sqrt(2.0)));
    CHECK(diameter(Constraint::independence_oracle(
              12, [](const Subset&) { return true; }, 9)) ==
          doctest::Approx(3.0));
  }

  TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(Constraint::cardinality(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(Constraint::cardinality(3, 4), std::invalid_argument);
    CHECK_THROWS_AS(Constraint::partition({0, 0}, {3}), std::invalid_argument);
    CHECK_THROWS_AS(Constraint::partition({0, 2}, {1, 1}),
                    std::invalid_argument);
  }
}
