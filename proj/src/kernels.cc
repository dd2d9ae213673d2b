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

#include "shiftlab/kernels.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace shiftlab {
namespace {

constexpr int kLipschitzSpotChecks = 64;
constexpr double kSpotCheckBox = 10.0;
constexpr double kRelativeSlack = 1e-12;

}  // namespace

ItoModel::ItoModel(DriftFn drift, double lipschitz, Eigen::MatrixXd diffusion,
                   double ellipticity)
    : drift_(std::move(drift)),
      lipschitz_(lipschitz),
      diffusion_(std::move(diffusion)),
      ellipticity_(ellipticity) {
  if (!drift_) throw std::invalid_argument("drift must be callable");
  if (!(lipschitz_ >= 0.0) || !std::isfinite(lipschitz_)) {
    throw std::invalid_argument("Lipschitz constant must be finite and >= 0");
  }
  if (!(ellipticity_ > 0.0)) {
    throw std::invalid_argument("ellipticity must be > 0");
  }
  const Eigen::Index d = diffusion_.rows();
  if (d == 0 || diffusion_.cols() != d) {
    throw std::invalid_argument("diffusion matrix must be square");
  }
  sigma_sigma_t_ = diffusion_ * diffusion_.transpose();
  sigma_sigma_t_ = 0.5 * (sigma_sigma_t_ + sigma_sigma_t_.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma_sigma_t_,
                                                     Eigen::EigenvaluesOnly);
  const double smallest = eig.eigenvalues().minCoeff();
  if (ellipticity_ > smallest * (1.0 + kRelativeSlack)) {
    throw std::invalid_argument(
        "ellipticity exceeds the smallest eigenvalue of sigma sigma^T (" +
        std::to_string(smallest) + ")");
  }

  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unif(-kSpotCheckBox, kSpotCheckBox);
  for (int k = 0; k < kLipschitzSpotChecks; ++k) {
    Eigen::VectorXd x(d), y(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      x(i) = unif(rng);
      y(i) = unif(rng);
    }
    const Eigen::VectorXd bx = drift_(x);
    const Eigen::VectorXd by = drift_(y);
    if (bx.size() != d || by.size() != d) {
      throw std::invalid_argument("drift output dimension mismatch");
    }
    const double lhs = (bx - by).norm();
    const double rhs = lipschitz_ * (x - y).norm();
    if (lhs > rhs * (1.0 + kRelativeSlack) + 1e-300) {
      throw std::invalid_argument("drift violates the declared Lipschitz bound");
    }
  }
}

ItoModel ItoModel::OrnsteinUhlenbeck(int dim, double lipschitz) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  DriftFn drift = [lipschitz](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return -lipschitz * x;
  };
  Eigen::MatrixXd sigma =
      std::sqrt(2.0) * Eigen::MatrixXd::Identity(dim, dim);
  return ItoModel(std::move(drift), lipschitz, std::move(sigma), 2.0);
}

StepSize::StepSize(double h, double lipschitz)
    : h_(h), lipschitz_(lipschitz), r_(1.0 - lipschitz * h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("step size must be finite and > 0");
  }
  if (!(lipschitz >= 0.0)) {
    throw std::invalid_argument("Lipschitz constant must be >= 0");
  }
  if (!(lipschitz * h < 1.0)) {
    throw std::invalid_argument("step size must satisfy h < 1/L");
  }
}

double GeometricVarianceFactor(double r, int steps) {
  if (steps < 1) throw std::invalid_argument("step count must be >= 1");
  if (!(r > 0.0) || r > 1.0) {
    throw std::invalid_argument("contraction factor must lie in (0, 1]");
  }
  if (r == 1.0) return static_cast<double>(steps);
  const double log_r = std::log(r);
  return std::expm1(2.0 * steps * log_r) / std::expm1(2.0 * log_r);
}

GaussianMeasure EulerStepDistribution(const ItoModel& model,
                                      const StepSize& step,
                                      const Eigen::VectorXd& x) {
  if (x.size() != model.dim()) {
    throw std::invalid_argument("state dimension does not match model");
  }
  const double h = step.h();
  return GaussianMeasure(x + h * model.Drift(x),
                         h * model.diffusion_covariance());
}

GaussianMeasure OuDiscreteMarginal(double lipschitz, const StepSize& step,
                                   int steps, const Eigen::VectorXd& x) {
  if (lipschitz != step.lipschitz()) {
    throw std::invalid_argument("step size was built for a different L");
  }
  const double r = step.contraction();
  const double variance = 2.0 * step.h() * GeometricVarianceFactor(r, steps);
  return GaussianMeasure::Isotropic(std::pow(r, steps) * x, variance);
}

GaussianMeasure OuContinuousMarginal(double lipschitz, double horizon,
                                     const Eigen::VectorXd& x) {
  if (!(lipschitz > 0.0)) throw std::invalid_argument("L must be > 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  const double variance = -std::expm1(-2.0 * lipschitz * horizon) / lipschitz;
  return GaussianMeasure::Isotropic(std::exp(-lipschitz * horizon) * x,
                                    variance);
}

}  // namespace shiftlab
