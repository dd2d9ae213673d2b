// Copyright 2026 The Shiftlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shiftlab/schedules.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

namespace shiftlab {
namespace {

void ExpectSchedule(const ShiftSchedule& s, std::vector<double> expected,
                    double tol) {
  ASSERT_EQ(s.values().size(), expected.size());
  for (size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(s.values()[i], expected[i], tol) << "entry " << i;
  }
}

// Random feasible schedule: sorted uniforms between the fixed endpoints.
ShiftSchedule RandomSchedule(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> v(n + 1);
  for (int i = 1; i < n; ++i) v[i] = unif(rng);
  v[0] = 0.0;
  v[n] = 1.0;
  std::sort(v.begin(), v.end());
  return ShiftSchedule(v);
}

TEST(ShiftScheduleTest, EnforcesInvariants) {
  EXPECT_THROW(ShiftSchedule({0.1, 1.0}), std::invalid_argument);
  EXPECT_THROW(ShiftSchedule({0.0, 0.9}), std::invalid_argument);
  EXPECT_THROW(ShiftSchedule({0.0, 0.6, 0.5, 1.0}), std::invalid_argument);
  EXPECT_THROW(ShiftSchedule({0.0}), std::invalid_argument);
}

TEST(OptimalDiscreteScheduleTest, Examples) {
  ExpectSchedule(OptimalDiscreteSchedule(1.0, 2.0, 2), {0.0, 0.4, 1.0}, 1e-15);
  ExpectSchedule(OptimalDiscreteSchedule(0.3, 0.7, 1), {0.0, 1.0}, 0.0);
  ExpectSchedule(OptimalDiscreteSchedule(0.0, 1.0, 4),
                 {0.0, 0.25, 0.5, 0.75, 1.0}, 1e-15);
  EXPECT_THROW(OptimalDiscreteSchedule(2.0, 2.0, 3), std::domain_error);
  EXPECT_THROW(OptimalDiscreteSchedule(1.0, 0.0, 3), std::invalid_argument);
}

TEST(DiscreteCostTest, Examples) {
  const ShiftSchedule s({0.0, 0.4, 1.0});
  EXPECT_NEAR(DiscreteCost(s, 1.0, 2.0), 3.2, 1e-15);
  EXPECT_NEAR(DiscreteCost(ShiftSchedule({0.0, 1.0}), 0.7, 1.3), 1.69, 1e-15);
  EXPECT_NEAR(OptimalDiscreteCost(1.0, 2.0, 2), 3.2, 1e-15);
  EXPECT_NEAR(OptimalDiscreteCost(0.0, 1.0, 5), 0.2, 1e-15);
}

TEST(BruteForceScheduleTest, Examples) {
  ExpectSchedule(BruteForceSchedule(1.0, 2.0, 2), {0.0, 0.4, 1.0}, 1e-10);
  ExpectSchedule(BruteForceSchedule(1.0, 2.0, 1), {0.0, 1.0}, 0.0);
  EXPECT_THROW(BruteForceSchedule(1.0, 2.0, 17), std::invalid_argument);
}

TEST(ScheduleProperty, ClosedFormMatchesOracleAndDominatesRandomSchedules) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double c2 = 0.1 + 3.0 * unif(rng);
    const double c1 = c2 * unif(rng) * 0.999;
    const int n = 2 + trial % 7;
    const ShiftSchedule closed = OptimalDiscreteSchedule(c1, c2, n);
    const ShiftSchedule oracle = BruteForceSchedule(c1, c2, n);
    for (int i = 0; i <= n; ++i) EXPECT_NEAR(closed[i], oracle[i], 1e-8);
    const double r = 1.0 - c1 / c2;
    const double formula =
        c2 * c2 * (1.0 - r * r) / (1.0 - std::pow(r, 2 * n));
    const double cost = DiscreteCost(closed, c1, c2);
    EXPECT_NEAR(cost, formula, 1e-10 * formula);
    EXPECT_NEAR(DiscreteCost(oracle, c1, c2), formula, 1e-8 * formula);
    for (int k = 0; k < 100; ++k) {
      EXPECT_LE(cost, DiscreteCost(RandomSchedule(n, rng), c1, c2) *
                          (1.0 + 1e-12));
    }
    // Strictly increasing when r < 1.
    for (int i = 0; i < n; ++i) EXPECT_LT(closed[i], closed[i + 1]);
  }
}

TEST(ContinuousScheduleTest, SinhValues) {
  const ContinuousSchedule s = ContinuousScheduleSinh(1.0, 1.0);
  EXPECT_EQ(s.Value(0.0), 0.0);
  EXPECT_NEAR(s.Value(1.0), 1.0, 1e-15);
  EXPECT_NEAR(s.Value(0.5), 0.443409441985036954, 1e-15);
  // Small L approaches the linear schedule.
  const ContinuousSchedule tiny = ContinuousScheduleSinh(1e-4, 2.0);
  for (int i = 0; i <= 20; ++i) {
    const double t = 2.0 * i / 20;
    EXPECT_NEAR(tiny.Value(t), t / 2.0, 1e-6);
  }
  // Analytic derivative against a central difference.
  const double eps = 1e-6;
  for (double t : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(s.Derivative(t), (s.Value(t + eps) - s.Value(t - eps)) / (2 * eps),
                1e-8);
  }
}

TEST(ContinuousScheduleTest, RejectsBadEndpoints) {
  EXPECT_THROW(ContinuousSchedule(
                   1.0, [](double t) { return 0.5 * t; },
                   [](double) { return 0.5; }),
               std::invalid_argument);
  EXPECT_THROW(ContinuousScheduleSinh(0.0, 1.0), std::invalid_argument);
}

TEST(ContinuousCostTest, Examples) {
  EXPECT_NEAR(ContinuousCost(ContinuousScheduleSinh(1.0, 1.0), 1.0),
              2.31303528549933130, 1e-8);
  EXPECT_NEAR(OptimalContinuousCost(1.0, 1.0), 2.31303528549933130, 1e-14);
  EXPECT_NEAR(ContinuousCost(LinearContinuousSchedule(2.0), 0.0), 0.5, 1e-12);
}

TEST(ContinuousCostTest, PerturbedSchedulesCostMore) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(-0.3, 0.3);
  const double l = 1.0;
  const double horizon = 1.0;
  const ContinuousSchedule base = ContinuousScheduleSinh(l, horizon);
  const double optimum = ContinuousCost(base, l);
  for (int k = 0; k < 20; ++k) {
    const double eps = unif(rng);
    const int mode = 1 + k % 3;
    // Bump sin(mode pi t / T) vanishes at both endpoints.
    auto value = [base, eps, mode, horizon](double t) {
      return base.Value(t) + eps * std::sin(mode * M_PI * t / horizon);
    };
    auto derivative = [base, eps, mode, horizon](double t) {
      return base.Derivative(t) +
             eps * mode * M_PI / horizon * std::cos(mode * M_PI * t / horizon);
    };
    // The constructor samples monotonicity; skip bumps that break it.
    try {
      const ContinuousSchedule perturbed(horizon, value, derivative);
      EXPECT_GT(ContinuousCost(perturbed, l), optimum);
    } catch (const std::invalid_argument&) {
      const double alt = eps / 10.0;
      const ContinuousSchedule perturbed(
          horizon,
          [base, alt](double t) { return base.Value(t) + alt * std::sin(M_PI * t); },
          [base, alt](double t) {
            return base.Derivative(t) + alt * M_PI * std::cos(M_PI * t);
          });
      EXPECT_GT(ContinuousCost(perturbed, l), optimum);
    }
  }
}

TEST(ScheduleCsvTest, WritesHeaderAndRows) {
  std::ostringstream out;
  WriteScheduleCsv(OptimalDiscreteSchedule(1.0, 2.0, 2), out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "n,a");
  std::ostringstream cont;
  WriteScheduleCsv(ContinuousScheduleSinh(1.0, 1.0), 11, cont);
  EXPECT_EQ(cont.str().substr(0, cont.str().find('\n')), "t,a");
  EXPECT_EQ(std::ranges::count(cont.str(), '\n'), 12);
}

}  // namespace
}  // namespace shiftlab
