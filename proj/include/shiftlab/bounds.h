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

// Sharp forward-regularity constants.
//
// For an Ito diffusion with L-Lipschitz drift and sigma sigma^T >= lambda I,
// the Euler chain with step h < 1/L satisfies
//
//   R_q(delta_x P^N * delta_v || delta_x P^N)
//       <= q (1 - r^2) / (2 lambda h (1 - r^{2N})) |v|^2,   r = 1 - L h,
//
// and the diffusion itself satisfies the h -> 0 limit with prefactor
// q L / (lambda (1 - exp(-2 L T))). For the Langevin diffusion with a
// beta-smooth potential (lambda = 2, L = beta) these yield the constants of
// the shift reverse transport (SRT), shift Harnack (SH) and local
// gradient-entropy (LGE) inequalities, which are Holder-dual to each other.

#ifndef SHIFTLAB_BOUNDS_H_
#define SHIFTLAB_BOUNDS_H_

#include <limits>
#include <map>
#include <string>

#include "shiftlab/gaussian_info.h"

namespace shiftlab {

// Time argument meaning t = infinity: selects the stationary constants.
inline constexpr double kStationaryTime =
    std::numeric_limits<double>::infinity();

enum class BoundKind { kSrtQ, kSrt1, kShP, kShLog, kLge, kMultiStep };

std::string BoundKindName(BoundKind kind);
// Accepts "SRT_q", "SRT_1", "SH_p", "SH_log", "LGE", "multi_step". Throws
// std::invalid_argument for anything else.
BoundKind ParseBoundKind(const std::string& name);

struct RegularityBound {
  double value = 0.0;
  BoundKind kind = BoundKind::kSrtQ;
  std::map<std::string, double> parameters;
};

// Coefficients of the one-step estimate (c1 |w| + c2 |v - w|)^2 satisfied by
// the Euler kernel: c1 = L sqrt(q h / (2 lambda)), c2 = sqrt(q / (2 lambda h)).
struct OneStepConstants {
  double c1;
  double c2;
};
OneStepConstants EulerOneStepConstants(RenyiOrder q, double lipschitz,
                                       double ellipticity, double h);

// (1 - r^2) / (1 - r^{2N}) c2^2 |v|^2 with r = 1 - c1 / c2. Throws
// std::domain_error if c1 >= c2.
RegularityBound MultiStepBound(double c1, double c2, int steps, double norm_v);

// q (1 - r^2) / (2 lambda h (1 - r^{2N})) |v|^2. Throws std::domain_error if
// h >= 1 / L.
RegularityBound DiscreteSrtBound(RenyiOrder q, double lipschitz,
                                 double ellipticity, double h, int steps,
                                 double norm_v);

// q L / (lambda (1 - exp(-2 L T))) |v|^2; q L / lambda at T = kStationaryTime
// and q / (2 lambda T) at L == 0.
RegularityBound ContinuousSrtBound(RenyiOrder q, double lipschitz,
                                   double ellipticity, double horizon,
                                   double norm_v);

// Langevin constants for a potential with -beta I <= Hess V <= beta I:
//   LGE:    2 beta / (1 - e^{-2 beta t})             (norm_v, order unused)
//   SH_p:   beta p |v|^2 / (2 (p - 1) (1 - e^{-2 beta t}))   order = p > 1;
//           the log of the factor in (P_t f(. + v))^p <= C P_t(f^p)
//   SRT_q:  beta q |v|^2 / (2 (1 - e^{-2 beta t}))   order = q >= 1
//   SH_log, SRT_1: beta |v|^2 / (2 (1 - e^{-2 beta t}))
// t = kStationaryTime drops the (1 - e^{-2 beta t}) factor.
RegularityBound TheoremConstant(BoundKind kind, double beta, double t,
                                double order, double norm_v);

// Best constant C in mu(f(. + v)) <= C mu(f^p)^{1/p} given
// R_q(mu * delta_v || mu) <= renyi_bound: C = exp((q - 1) renyi_bound / q).
double HarnackFromRenyi(RenyiOrder q, double renyi_bound);

// Inverse of HarnackFromRenyi: q log(C) / (q - 1).
double RenyiFromHarnack(RenyiOrder q, double harnack_constant);

}  // namespace shiftlab

#endif  // SHIFTLAB_BOUNDS_H_
