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

// Shifted Renyi divergences on Gaussians with a shared isotropic covariance
// sigma^2 I, indexed by a signed shift z:
//
//   z >= 0  standard:  inf over translates mu * delta_w, |w| <= z
//   z <  0  dual:      sup over translates mu * delta_w, |w| <= -z
//
// Both reduce to q ((|dm| - z)_+)^2 / (2 sigma^2) with dm the mean gap. The
// standard value restricts the infimum to translates, so it is an upper
// bound on the infimum over the full W_inf ball.

#ifndef SHIFTLAB_SHIFTED_DIV_H_
#define SHIFTLAB_SHIFTED_DIV_H_

#include <string>

#include "shiftlab/gaussian_info.h"

namespace shiftlab {

// sup_{|v| <= z} R_q(mu * delta_v || nu) = q (|dm| + z)^2 / (2 sigma^2).
// Requires z >= 0 and equal isotropic covariances.
double DualShiftedRenyiGaussian(const GaussianMeasure& mu,
                                const GaussianMeasure& nu, double z,
                                RenyiOrder q);

// inf_{|w| <= z} R_q(mu * delta_w || nu) = q ((|dm| - z)_+)^2 / (2 sigma^2).
double StandardShiftedRenyiGaussianTranslate(const GaussianMeasure& mu,
                                             const GaussianMeasure& nu,
                                             double z, RenyiOrder q);

// Dispatch on the sign of z (negative selects the dual).
double UnifiedShiftedRenyiGaussian(const GaussianMeasure& mu,
                                   const GaussianMeasure& nu, double z,
                                   RenyiOrder q);

// S_q(N(0, sigma^2 I), a) = q a^2 / (2 sigma^2).
double GaussianSensitivity(double variance, double a, RenyiOrder q);

struct ConvolutionLemmaReport {
  double lhs = 0.0;   // shifted divergence of (mu * xi, nu * xi) at z
  double rhs = 0.0;   // shifted divergence of (mu, nu) at z + a, plus S_q
  double margin = 0.0;
  bool pass = false;
  std::string shift_case;   // "standard" (z >= 0) or "dual" (z < 0)
  std::string budget_case;  // "a<=|z|" or "a>|z|"
};

// Checks lhs <= rhs (+1e-12 relative) with closed-form sides. xi must be
// centered with isotropic covariance.
ConvolutionLemmaReport VerifyConvolutionLemma(const GaussianMeasure& mu,
                                              const GaussianMeasure& nu,
                                              const GaussianMeasure& xi,
                                              double z, double a,
                                              RenyiOrder q);

// Variance sigma^2 when cov == sigma^2 I exactly; throws otherwise.
double IsotropicVariance(const GaussianMeasure& measure);

}  // namespace shiftlab

#endif  // SHIFTLAB_SHIFTED_DIV_H_
