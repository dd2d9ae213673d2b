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
#include <stdexcept>
#include <string>
#include <utility>

#include "shiftlab/kernels.h"
#include "shiftlab/report.h"

namespace shiftlab {
namespace {

constexpr int kMonotoneSamples = 257;
constexpr double kMonotoneSlack = 1e-12;
constexpr int kSimpsonPanels = 1 << 12;
constexpr double kQuadratureTolerance = 1e-10;
constexpr int kMaxBruteForceSteps = 16;

void CheckCostCoefficients(double c1, double c2) {
  if (!(c2 > 0.0) || !std::isfinite(c2)) {
    throw std::invalid_argument("c2 must be finite and > 0");
  }
  if (!(c1 >= 0.0)) throw std::invalid_argument("c1 must be >= 0");
  if (!(c1 < c2)) {
    throw std::domain_error(
        "closed-form schedule requires c1 < c2 (r = 1 - c1/c2 in (0, 1])");
  }
}

double Simpson(const std::function<double(double)>& f, double lo, double hi,
               int panels) {
  const double h = (hi - lo) / panels;
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < panels; ++i) {
    const double v = f(lo + i * h);
    if (i % 2 == 1) {
      odd += v;
    } else {
      even += v;
    }
  }
  return h / 3.0 * (f(lo) + f(hi) + 4.0 * odd + 2.0 * even);
}

}  // namespace

ShiftSchedule::ShiftSchedule(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw std::invalid_argument("schedule needs at least two entries");
  }
  if (values_.front() != 0.0) throw std::invalid_argument("a_0 must be 0");
  if (values_.back() != 1.0) throw std::invalid_argument("a_N must be 1");
  for (size_t n = 1; n < values_.size(); ++n) {
    if (!(values_[n] >= values_[n - 1])) {
      throw std::invalid_argument("schedule must be nondecreasing (index " +
                                  std::to_string(n) + ")");
    }
  }
}

ContinuousSchedule::ContinuousSchedule(double horizon, Fn value,
                                       Fn derivative)
    : horizon_(horizon),
      value_(std::move(value)),
      derivative_(std::move(derivative)) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
    throw std::invalid_argument("horizon must be finite and > 0");
  }
  if (!value_ || !derivative_) {
    throw std::invalid_argument("schedule maps must be callable");
  }
  if (std::abs(value_(0.0)) > kMonotoneSlack ||
      std::abs(value_(horizon_) - 1.0) > kMonotoneSlack) {
    throw std::invalid_argument("continuous schedule must run from 0 to 1");
  }
  double previous = value_(0.0);
  for (int i = 1; i < kMonotoneSamples; ++i) {
    const double current = value_(horizon_ * i / (kMonotoneSamples - 1));
    if (current < previous - kMonotoneSlack) {
      throw std::invalid_argument("continuous schedule must be nondecreasing");
    }
    previous = current;
  }
}

ShiftSchedule OptimalDiscreteSchedule(double c1, double c2, int steps) {
  CheckCostCoefficients(c1, c2);
  if (steps < 1) throw std::invalid_argument("step count must be >= 1");
  const double r = 1.0 - c1 / c2;
  // (1 - r^2) / (1 - r^{2N}) is the reciprocal of sum_{k<N} r^{2k}.
  const double scale = 1.0 / GeometricVarianceFactor(r, steps);
  std::vector<double> a(steps + 1, 0.0);
  for (int i = 1; i <= steps; ++i) {
    const double b = std::pow(r, steps - i) * scale;
    a[i] = r * a[i - 1] + b;
  }
  if (std::abs(a[steps] - 1.0) > 1e-12) {
    throw std::logic_error("closed-form schedule does not reach 1");
  }
  a[steps] = 1.0;
  for (int n = 1; n <= steps; ++n) {
    if (a[n] < a[n - 1]) {
      throw std::logic_error("closed-form schedule violates feasibility");
    }
  }
  return ShiftSchedule(std::move(a));
}

double DiscreteCost(const ShiftSchedule& schedule, double c1, double c2) {
  double total = 0.0;
  const auto& a = schedule.values();
  for (int n = 0; n < schedule.steps(); ++n) {
    const double term = c1 * a[n] + c2 * (a[n + 1] - a[n]);
    total += term * term;
  }
  return total;
}

double OptimalDiscreteCost(double c1, double c2, int steps) {
  CheckCostCoefficients(c1, c2);
  return c2 * c2 / GeometricVarianceFactor(1.0 - c1 / c2, steps);
}

ShiftSchedule BruteForceSchedule(double c1, double c2, int steps) {
  if (!(c2 > 0.0)) throw std::invalid_argument("c2 must be > 0");
  if (!(c1 >= 0.0)) throw std::invalid_argument("c1 must be >= 0");
  if (steps < 1 || steps > kMaxBruteForceSteps) {
    throw std::invalid_argument("brute-force schedule supports 1 <= N <= 16");
  }
  if (steps == 1) return ShiftSchedule({0.0, 1.0});

  // Step n contributes (alpha a_n + beta a_{n+1})^2.
  const double alpha = c1 - c2;
  const double beta = c2;
  const int m = steps - 1;
  std::vector<double> lower(m, alpha * beta);
  std::vector<double> diag(m, alpha * alpha + beta * beta);
  std::vector<double> upper(m, alpha * beta);
  std::vector<double> rhs(m, 0.0);
  rhs[m - 1] = -alpha * beta;  // a_N = 1 moved to the right-hand side.

  // Thomas algorithm.
  for (int i = 1; i < m; ++i) {
    if (diag[i - 1] == 0.0) throw std::logic_error("singular normal equations");
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  if (diag[m - 1] == 0.0) throw std::logic_error("singular normal equations");
  std::vector<double> a(steps + 1, 0.0);
  a[steps] = 1.0;
  a[m] = rhs[m - 1] / diag[m - 1];
  for (int i = m - 2; i >= 0; --i) {
    a[i + 1] = (rhs[i] - upper[i] * a[i + 2]) / diag[i];
  }
  for (int n = 1; n <= steps; ++n) {
    if (a[n] < a[n - 1]) {
      throw std::logic_error("unconstrained optimum is not monotone");
    }
  }
  return ShiftSchedule(std::move(a));
}

ContinuousSchedule ContinuousScheduleSinh(double lipschitz, double horizon) {
  if (!(lipschitz > 0.0)) throw std::invalid_argument("L must be > 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  const double denom = -std::expm1(-2.0 * lipschitz * horizon);
  // sinh(Lt)/sinh(LT) = e^{L(t-T)} (1 - e^{-2Lt}) / (1 - e^{-2LT}).
  auto value = [=](double t) {
    return std::exp(lipschitz * (t - horizon)) *
           (-std::expm1(-2.0 * lipschitz * t)) / denom;
  };
  auto derivative = [=](double t) {
    return lipschitz * std::exp(lipschitz * (t - horizon)) *
           (1.0 + std::exp(-2.0 * lipschitz * t)) / denom;
  };
  return ContinuousSchedule(horizon, value, derivative);
}

ContinuousSchedule LinearContinuousSchedule(double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  return ContinuousSchedule(
      horizon, [horizon](double t) { return t / horizon; },
      [horizon](double) { return 1.0 / horizon; });
}

double ContinuousCost(const ContinuousSchedule& schedule, double lipschitz) {
  auto integrand = [&](double t) {
    const double u = lipschitz * schedule.Value(t) + schedule.Derivative(t);
    return u * u;
  };
  const double fine = Simpson(integrand, 0.0, schedule.horizon(), kSimpsonPanels);
  const double coarse =
      Simpson(integrand, 0.0, schedule.horizon(), kSimpsonPanels / 2);
  const double error = std::abs(fine - coarse) / 15.0;
  if (!std::isfinite(fine) ||
      error > kQuadratureTolerance * std::max(1.0, std::abs(fine))) {
    throw std::runtime_error("schedule cost quadrature did not converge; "
                             "estimated error " + FormatDouble(error));
  }
  return fine;
}

double OptimalContinuousCost(double lipschitz, double horizon) {
  if (!(lipschitz >= 0.0)) throw std::invalid_argument("L must be >= 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  if (lipschitz == 0.0) return 1.0 / horizon;
  return 2.0 * lipschitz / (-std::expm1(-2.0 * lipschitz * horizon));
}

void WriteScheduleCsv(const ShiftSchedule& schedule, std::ostream& out) {
  out << "n,a\n";
  for (int n = 0; n <= schedule.steps(); ++n) {
    out << n << ',' << FormatDouble(schedule[n]) << '\n';
  }
}

void WriteScheduleCsv(const ContinuousSchedule& schedule, int samples,
                      std::ostream& out) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  out << "t,a\n";
  for (int i = 0; i < samples; ++i) {
    const double t = schedule.horizon() * i / (samples - 1);
    out << FormatDouble(t) << ',' << FormatDouble(schedule.Value(t)) << '\n';
  }
}

}  // namespace shiftlab
