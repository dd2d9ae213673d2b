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

// Closed-form divergence calculus for Gaussian measures and conversions
// between the Renyi divergence and the power f-divergence D_q.
//
// Only the shared-covariance identity is provided:
//   R_q(N(a, S) || N(b, S)) = (q / 2) <a - b, S^{-1} (a - b)>.
// At q = 2 the chi-squared divergence satisfies R_2 = log(1 + chi^2).

#ifndef SHIFTLAB_GAUSSIAN_INFO_H_
#define SHIFTLAB_GAUSSIAN_INFO_H_

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace shiftlab {

// Order q >= 1 of a Renyi divergence. q == 1 denotes KL.
class RenyiOrder {
 public:
  // Throws std::invalid_argument unless q >= 1 and finite.
  explicit RenyiOrder(double q);

  double value() const { return q_; }
  bool IsKl() const { return q_ == 1.0; }

  // Holder conjugate p = q / (q - 1); +infinity at q == 1.
  double DualExponent() const;

 private:
  double q_;
};

// N(mean, covariance) with a symmetric positive-definite covariance. The
// Cholesky factor is computed once at construction.
class GaussianMeasure {
 public:
  // Throws std::invalid_argument on dimension mismatch, asymmetric or
  // non-SPD covariance.
  GaussianMeasure(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

  // N(mean, variance * I).
  static GaussianMeasure Isotropic(Eigen::VectorXd mean, double variance);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }

  // <u, Sigma^{-1} u>.
  double MahalanobisSquared(const Eigen::VectorXd& u) const;

  // Translate by v (convolution with a Dirac mass at v).
  GaussianMeasure Shifted(const Eigen::VectorXd& v) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  Eigen::LLT<Eigen::MatrixXd> cholesky_;
};

// R_q(a || b) for Gaussians sharing the same stored covariance matrix.
// Throws std::invalid_argument on dimension or covariance mismatch.
double RenyiGaussianSharedCov(const GaussianMeasure& a,
                              const GaussianMeasure& b, RenyiOrder q);

// R_q = log(1 + D_q) / (q - 1). Requires q > 1 and d_q >= 0.
double RenyiFromDq(double d_q, RenyiOrder q);

// D_q = exp((q - 1) R_q) - 1. Requires q > 1 and renyi >= 0.
double DqFromRenyi(double renyi, RenyiOrder q);

// a * noise: means unchanged, covariances add. The noise must be centered.
GaussianMeasure ConvolveGaussian(const GaussianMeasure& a,
                                 const GaussianMeasure& noise);

// Convolution with N(0, noise_covariance) where the noise covariance is only
// required to be symmetric positive semi-definite (e.g. 0 * I).
GaussianMeasure ConvolveGaussian(const GaussianMeasure& a,
                                 const Eigen::MatrixXd& noise_covariance);

}  // namespace shiftlab

#endif  // SHIFTLAB_GAUSSIAN_INFO_H_
