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

// Shift schedules distribute a terminal shift v over the steps of a chain,
// v_n = a_n v with a_0 = 0 and a_N = 1. The per-step price of moving from
// a_n to a_{n+1} is (c1 a_n + c2 (a_{n+1} - a_n))^2; with r = 1 - c1 / c2
// and b_{n+1} = a_{n+1} - r a_n the total cost is c2^2 sum b_n^2, which is
// minimized by b_i proportional to r^{N-i}.

#ifndef SHIFTLAB_SCHEDULES_H_
#define SHIFTLAB_SCHEDULES_H_

#include <functional>
#include <ostream>
#include <vector>

namespace shiftlab {

// a_0 = 0 <= a_1 <= ... <= a_N = 1.
class ShiftSchedule {
 public:
  // Throws std::invalid_argument if the endpoint or monotonicity invariants
  // fail.
  explicit ShiftSchedule(std::vector<double> values);

  int steps() const { return static_cast<int>(values_.size()) - 1; }
  const std::vector<double>& values() const { return values_; }
  double operator[](int n) const { return values_[n]; }

 private:
  std::vector<double> values_;
};

// t -> a_t on [0, T] with a_0 = 0, a_T = 1 and a known derivative.
class ContinuousSchedule {
 public:
  using Fn = std::function<double(double)>;

  // Validates the endpoints and monotonicity on a 257-point sampling grid.
  ContinuousSchedule(double horizon, Fn value, Fn derivative);

  double horizon() const { return horizon_; }
  double Value(double t) const { return value_(t); }
  double Derivative(double t) const { return derivative_(t); }

 private:
  double horizon_;
  Fn value_;
  Fn derivative_;
};

// Closed-form minimizer of DiscreteCost: b_i = r^{N-i} (1 - r^2) / (1 - r^{2N})
// followed by a_n = r a_{n-1} + b_n. Requires 0 <= c1 < c2 and N >= 1;
// c1 == 0 yields the linear schedule. The inequality constraints of the
// program are inactive at this point; a violation throws std::logic_error.
ShiftSchedule OptimalDiscreteSchedule(double c1, double c2, int steps);

// sum_{n<N} (c1 a_n + c2 (a_{n+1} - a_n))^2.
double DiscreteCost(const ShiftSchedule& schedule, double c1, double c2);

// c2^2 (1 - r^2) / (1 - r^{2N}) with r = 1 - c1 / c2; c2^2 / N at r == 1.
double OptimalDiscreteCost(double c1, double c2, int steps);

// Minimizes DiscreteCost over free a_1..a_{N-1} by assembling the
// (N-1) x (N-1) tridiagonal normal equations and solving them directly.
// Requires 1 <= N <= 16. Throws std::logic_error if the solution is not
// monotone.
ShiftSchedule BruteForceSchedule(double c1, double c2, int steps);

// a_t = sinh(L t) / sinh(L T), derivative L cosh(L t) / sinh(L T).
ContinuousSchedule ContinuousScheduleSinh(double lipschitz, double horizon);

// a_t = t / T.
ContinuousSchedule LinearContinuousSchedule(double horizon);

// int_0^T (L a_t + a'_t)^2 dt by composite Simpson on 2^12 panels, with a
// Richardson comparison against 2^11 panels. Throws std::runtime_error if the
// estimated relative error exceeds 1e-10.
double ContinuousCost(const ContinuousSchedule& schedule, double lipschitz);

// 2 L / (1 - exp(-2 L T)); 1 / T at L == 0.
double OptimalContinuousCost(double lipschitz, double horizon);

// CSV "n,a" rows with header.
void WriteScheduleCsv(const ShiftSchedule& schedule, std::ostream& out);

// CSV "t,a" rows sampled at `samples` equispaced points (inclusive).
void WriteScheduleCsv(const ContinuousSchedule& schedule, int samples,
                      std::ostream& out);

}  // namespace shiftlab

#endif  // SHIFTLAB_SCHEDULES_H_
