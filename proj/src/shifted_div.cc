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

#include "shiftlab/shifted_div.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shiftlab {
namespace {

// Shared variance and mean gap; throws on covariance mismatch.
double SharedVariance(const GaussianMeasure& mu, const GaussianMeasure& nu) {
  if (mu.dim() != nu.dim()) throw std::invalid_argument("dimension mismatch");
  const double s2 = IsotropicVariance(mu);
  if (IsotropicVariance(nu) != s2) {
    throw std::invalid_argument("covariance mismatch");
  }
  return s2;
}

double Formula(double gap, double z, double variance, RenyiOrder q) {
  const double reach = std::max(0.0, gap - z);
  return q.value() * reach * reach / (2.0 * variance);
}

void CheckFinite(double z) {
  if (!std::isfinite(z)) throw std::invalid_argument("shift must be finite");
}

}  // namespace

double IsotropicVariance(const GaussianMeasure& measure) {
  const Eigen::MatrixXd& cov = measure.covariance();
  const double s2 = cov(0, 0);
  const Eigen::MatrixXd expected =
      s2 * Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
  if (cov != expected) {
    throw std::invalid_argument("covariance is not isotropic");
  }
  return s2;
}

double DualShiftedRenyiGaussian(const GaussianMeasure& mu,
                                const GaussianMeasure& nu, double z,
                                RenyiOrder q) {
  CheckFinite(z);
  if (z < 0.0) throw std::invalid_argument("dual radius must be >= 0");
  const double s2 = SharedVariance(mu, nu);
  return Formula((mu.mean() - nu.mean()).norm(), -z, s2, q);
}

double StandardShiftedRenyiGaussianTranslate(const GaussianMeasure& mu,
                                             const GaussianMeasure& nu,
                                             double z, RenyiOrder q) {
  CheckFinite(z);
  if (z < 0.0) throw std::invalid_argument("shift radius must be >= 0");
  const double s2 = SharedVariance(mu, nu);
  return Formula((mu.mean() - nu.mean()).norm(), z, s2, q);
}

double UnifiedShiftedRenyiGaussian(const GaussianMeasure& mu,
                                   const GaussianMeasure& nu, double z,
                                   RenyiOrder q) {
  return z < 0.0 ? DualShiftedRenyiGaussian(mu, nu, -z, q)
                 : StandardShiftedRenyiGaussianTranslate(mu, nu, z, q);
}

double GaussianSensitivity(double variance, double a, RenyiOrder q) {
  if (!(variance > 0.0)) throw std::invalid_argument("variance must be > 0");
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("a must be finite and >= 0");
  }
  return q.value() * a * a / (2.0 * variance);
}

ConvolutionLemmaReport VerifyConvolutionLemma(const GaussianMeasure& mu,
                                              const GaussianMeasure& nu,
                                              const GaussianMeasure& xi,
                                              double z, double a,
                                              RenyiOrder q) {
  CheckFinite(z);
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("a must be finite and >= 0");
  }
  SharedVariance(mu, nu);
  if (xi.dim() != mu.dim()) throw std::invalid_argument("dimension mismatch");
  if (!xi.mean().isZero(0.0)) {
    throw std::invalid_argument("noise must be centered");
  }
  const double noise_var = IsotropicVariance(xi);
  const GaussianMeasure mu_xi = ConvolveGaussian(mu, xi);
  const GaussianMeasure nu_xi = ConvolveGaussian(nu, xi);

  ConvolutionLemmaReport report;
  report.lhs = UnifiedShiftedRenyiGaussian(mu_xi, nu_xi, z, q);
  report.rhs = UnifiedShiftedRenyiGaussian(mu, nu, z + a, q) +
               GaussianSensitivity(noise_var, a, q);
  report.margin = report.rhs - report.lhs;
  report.pass = report.lhs <= report.rhs * (1.0 + 1e-12) + 1e-15;
  report.shift_case = z < 0.0 ? "dual" : "standard";
  report.budget_case = a <= std::abs(z) ? "a<=|z|" : "a>|z|";
  return report;
}

}  // namespace shiftlab
