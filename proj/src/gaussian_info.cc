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

#include "shiftlab/gaussian_info.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace shiftlab {

RenyiOrder::RenyiOrder(double q) : q_(q) {
  if (!std::isfinite(q) || q < 1.0) {
    throw std::invalid_argument("Renyi order must be finite and >= 1, got " +
                                std::to_string(q));
  }
}

double RenyiOrder::DualExponent() const {
  if (IsKl()) return std::numeric_limits<double>::infinity();
  return q_ / (q_ - 1.0);
}

GaussianMeasure::GaussianMeasure(Eigen::VectorXd mean,
                                 Eigen::MatrixXd covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  const Eigen::Index d = mean_.size();
  if (d == 0) throw std::invalid_argument("Gaussian dimension must be >= 1");
  if (covariance_.rows() != d || covariance_.cols() != d) {
    throw std::invalid_argument("covariance shape does not match mean");
  }
  if (!covariance_.allFinite() || !mean_.allFinite()) {
    throw std::invalid_argument("Gaussian parameters must be finite");
  }
  if (covariance_ != covariance_.transpose()) {
    throw std::invalid_argument("covariance is not symmetric");
  }
  cholesky_.compute(covariance_);
  if (cholesky_.info() != Eigen::Success) {
    throw std::invalid_argument("covariance is not positive definite");
  }
}

GaussianMeasure GaussianMeasure::Isotropic(Eigen::VectorXd mean,
                                           double variance) {
  const Eigen::Index d = mean.size();
  Eigen::MatrixXd cov = variance * Eigen::MatrixXd::Identity(d, d);
  return GaussianMeasure(std::move(mean), std::move(cov));
}

double GaussianMeasure::MahalanobisSquared(const Eigen::VectorXd& u) const {
  if (u.size() != mean_.size()) {
    throw std::invalid_argument("vector dimension does not match Gaussian");
  }
  const Eigen::VectorXd w = cholesky_.matrixL().solve(u);
  return w.squaredNorm();
}

GaussianMeasure GaussianMeasure::Shifted(const Eigen::VectorXd& v) const {
  if (v.size() != mean_.size()) {
    throw std::invalid_argument("shift dimension does not match Gaussian");
  }
  return GaussianMeasure(mean_ + v, covariance_);
}

double RenyiGaussianSharedCov(const GaussianMeasure& a,
                              const GaussianMeasure& b, RenyiOrder q) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("Gaussian dimensions differ");
  }
  if (a.covariance() != b.covariance()) {
    throw std::invalid_argument("Gaussian covariances differ");
  }
  return 0.5 * q.value() * a.MahalanobisSquared(a.mean() - b.mean());
}

double RenyiFromDq(double d_q, RenyiOrder q) {
  if (q.IsKl()) {
    throw std::invalid_argument("D_q relation is undefined at q = 1");
  }
  if (!(d_q >= 0.0)) throw std::invalid_argument("D_q must be >= 0");
  return std::log1p(d_q) / (q.value() - 1.0);
}

double DqFromRenyi(double renyi, RenyiOrder q) {
  if (q.IsKl()) {
    throw std::invalid_argument("D_q relation is undefined at q = 1");
  }
  if (!(renyi >= 0.0)) throw std::invalid_argument("Renyi value must be >= 0");
  return std::expm1((q.value() - 1.0) * renyi);
}

GaussianMeasure ConvolveGaussian(const GaussianMeasure& a,
                                 const GaussianMeasure& noise) {
  if (!noise.mean().isZero(0.0)) {
    throw std::invalid_argument("noise Gaussian must be centered");
  }
  return ConvolveGaussian(a, noise.covariance());
}

GaussianMeasure ConvolveGaussian(const GaussianMeasure& a,
                                 const Eigen::MatrixXd& noise_covariance) {
  if (noise_covariance.rows() != a.dim() ||
      noise_covariance.cols() != a.dim()) {
    throw std::invalid_argument("noise dimension does not match Gaussian");
  }
  if (noise_covariance != noise_covariance.transpose()) {
    throw std::invalid_argument("noise covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(noise_covariance,
                                                     Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, noise_covariance.norm());
  if (eig.eigenvalues().minCoeff() < -1e-14 * scale) {
    throw std::invalid_argument("noise covariance is not positive semi-definite");
  }
  return GaussianMeasure(a.mean(), a.covariance() + noise_covariance);
}

}  // namespace shiftlab
