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

#include "shiftlab/bounds.h"

#include <cmath>
#include <stdexcept>

#include "shiftlab/kernels.h"

namespace shiftlab {
namespace {

void CheckNorm(double norm_v) {
  if (!(norm_v >= 0.0) || !std::isfinite(norm_v)) {
    throw std::invalid_argument("|v| must be finite and >= 0");
  }
}

// 1 / (1 - exp(-2 rate t)); 1 at t = infinity.
double TimeFactor(double rate, double t) {
  if (std::isinf(t) && t > 0) return 1.0;
  if (!(t > 0.0)) throw std::invalid_argument("time must be > 0");
  return 1.0 / (-std::expm1(-2.0 * rate * t));
}

}  // namespace

std::string BoundKindName(BoundKind kind) {
  switch (kind) {
    case BoundKind::kSrtQ:
      return "SRT_q";
    case BoundKind::kSrt1:
      return "SRT_1";
    case BoundKind::kShP:
      return "SH_p";
    case BoundKind::kShLog:
      return "SH_log";
    case BoundKind::kLge:
      return "LGE";
    case BoundKind::kMultiStep:
      return "multi_step";
  }
  return "unknown";
}

BoundKind ParseBoundKind(const std::string& name) {
  for (BoundKind kind : {BoundKind::kSrtQ, BoundKind::kSrt1, BoundKind::kShP,
                         BoundKind::kShLog, BoundKind::kLge,
                         BoundKind::kMultiStep}) {
    if (BoundKindName(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown bound kind: " + name);
}

OneStepConstants EulerOneStepConstants(RenyiOrder q, double lipschitz,
                                       double ellipticity, double h) {
  if (!(ellipticity > 0.0)) throw std::invalid_argument("lambda must be > 0");
  if (!(h > 0.0)) throw std::invalid_argument("h must be > 0");
  const double qv = q.value();
  return {lipschitz * std::sqrt(qv * h) / std::sqrt(2.0 * ellipticity),
          std::sqrt(qv) / std::sqrt(2.0 * h * ellipticity)};
}

RegularityBound MultiStepBound(double c1, double c2, int steps,
                               double norm_v) {
  CheckNorm(norm_v);
  if (!(c2 > 0.0)) throw std::invalid_argument("c2 must be > 0");
  if (!(c1 >= 0.0)) throw std::invalid_argument("c1 must be >= 0");
  if (!(c1 < c2)) throw std::domain_error("multi-step bound requires c1 < c2");
  if (steps < 1) throw std::invalid_argument("N must be >= 1");
  const double r = 1.0 - c1 / c2;
  RegularityBound bound;
  bound.kind = BoundKind::kMultiStep;
  bound.value = c2 * c2 * norm_v * norm_v / GeometricVarianceFactor(r, steps);
  bound.parameters = {{"c1", c1},
                      {"c2", c2},
                      {"N", static_cast<double>(steps)},
                      {"norm_v", norm_v}};
  return bound;
}

RegularityBound DiscreteSrtBound(RenyiOrder q, double lipschitz,
                                 double ellipticity, double h, int steps,
                                 double norm_v) {
  CheckNorm(norm_v);
  if (!(ellipticity > 0.0)) throw std::invalid_argument("lambda must be > 0");
  if (!(lipschitz >= 0.0)) throw std::invalid_argument("L must be >= 0");
  if (!(h > 0.0)) throw std::invalid_argument("h must be > 0");
  if (!(lipschitz * h < 1.0)) throw std::domain_error("requires h < 1/L");
  if (steps < 1) throw std::invalid_argument("N must be >= 1");
  const double r = 1.0 - lipschitz * h;
  RegularityBound bound;
  bound.kind = q.IsKl() ? BoundKind::kSrt1 : BoundKind::kSrtQ;
  bound.value = q.value() * norm_v * norm_v /
                (2.0 * ellipticity * h * GeometricVarianceFactor(r, steps));
  bound.parameters = {{"q", q.value()},
                      {"L", lipschitz},
                      {"lambda", ellipticity},
                      {"h", h},
                      {"N", static_cast<double>(steps)},
                      {"norm_v", norm_v}};
  return bound;
}

RegularityBound ContinuousSrtBound(RenyiOrder q, double lipschitz,
                                   double ellipticity, double horizon,
                                   double norm_v) {
  CheckNorm(norm_v);
  if (!(ellipticity > 0.0)) throw std::invalid_argument("lambda must be > 0");
  if (!(lipschitz >= 0.0)) throw std::invalid_argument("L must be >= 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("T must be > 0");
  double prefactor;
  if (lipschitz == 0.0) {
    prefactor = q.value() / (2.0 * ellipticity * horizon);  // 0 at T = inf.
  } else {
    prefactor = q.value() * lipschitz / ellipticity *
                TimeFactor(lipschitz, horizon);
  }
  RegularityBound bound;
  bound.kind = q.IsKl() ? BoundKind::kSrt1 : BoundKind::kSrtQ;
  bound.value = prefactor * norm_v * norm_v;
  bound.parameters = {{"q", q.value()},
                      {"L", lipschitz},
                      {"lambda", ellipticity},
                      {"T", horizon},
                      {"norm_v", norm_v}};
  return bound;
}

RegularityBound TheoremConstant(BoundKind kind, double beta, double t,
                                double order, double norm_v) {
  CheckNorm(norm_v);
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("beta must be finite and > 0");
  }
  const double time_factor = TimeFactor(beta, t);
  const double v2 = norm_v * norm_v;
  RegularityBound bound;
  bound.kind = kind;
  bound.parameters = {{"beta", beta}, {"t", t}, {"norm_v", norm_v}};
  switch (kind) {
    case BoundKind::kLge:
      bound.value = 2.0 * beta * time_factor;
      break;
    case BoundKind::kShP:
      if (!(order > 1.0) || !std::isfinite(order)) {
        throw std::invalid_argument("SH_p requires a finite p > 1");
      }
      bound.value = beta * order * v2 / (2.0 * (order - 1.0)) * time_factor;
      bound.parameters["p"] = order;
      break;
    case BoundKind::kSrtQ:
      bound.value = beta * RenyiOrder(order).value() * v2 / 2.0 * time_factor;
      bound.parameters["q"] = order;
      break;
    case BoundKind::kShLog:
    case BoundKind::kSrt1:
      bound.value = beta * v2 / 2.0 * time_factor;
      break;
    case BoundKind::kMultiStep:
      throw std::invalid_argument("multi_step is not a Langevin constant");
  }
  return bound;
}

double HarnackFromRenyi(RenyiOrder q, double renyi_bound) {
  if (q.IsKl()) {
    throw std::invalid_argument(
        "q = 1 has no power Harnack form; use the log-Harnack constant");
  }
  if (!(renyi_bound >= 0.0)) throw std::invalid_argument("bound must be >= 0");
  return std::exp((q.value() - 1.0) * renyi_bound / q.value());
}

double RenyiFromHarnack(RenyiOrder q, double harnack_constant) {
  if (q.IsKl()) {
    throw std::invalid_argument(
        "q = 1 has no power Harnack form; use the log-Harnack constant");
  }
  if (!(harnack_constant >= 1.0)) {
    throw std::invalid_argument("Harnack constant must be >= 1");
  }
  return q.value() * std::log(harnack_constant) / (q.value() - 1.0);
}

}  // namespace shiftlab
