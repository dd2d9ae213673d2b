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

// Euler kernels of Ito diffusions dX = b(X) dt + sigma dB and the exact
// Ornstein-Uhlenbeck marginals used as the tightness oracle.

#ifndef SHIFTLAB_KERNELS_H_
#define SHIFTLAB_KERNELS_H_

#include <functional>

#include <Eigen/Dense>

#include "shiftlab/gaussian_info.h"

namespace shiftlab {

using DriftFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Constant-coefficient Ito model. The drift is declared L-Lipschitz and the
// diffusion satisfies sigma sigma^T >= lambda I. Immutable after
// construction.
class ItoModel {
 public:
  // Checks lambda against the smallest eigenvalue of sigma sigma^T and
  // spot-checks the Lipschitz contract of the drift on random pairs drawn
  // from [-10, 10]^d. Throws std::invalid_argument on violation.
  ItoModel(DriftFn drift, double lipschitz, Eigen::MatrixXd diffusion,
           double ellipticity);

  // b(x) = -L x, sigma = sqrt(2) I (so lambda = 2).
  static ItoModel OrnsteinUhlenbeck(int dim, double lipschitz);

  int dim() const { return static_cast<int>(diffusion_.rows()); }
  double lipschitz() const { return lipschitz_; }
  double ellipticity() const { return ellipticity_; }
  const Eigen::MatrixXd& diffusion() const { return diffusion_; }
  // sigma sigma^T, symmetrized.
  const Eigen::MatrixXd& diffusion_covariance() const { return sigma_sigma_t_; }
  Eigen::VectorXd Drift(const Eigen::VectorXd& x) const { return drift_(x); }

 private:
  DriftFn drift_;
  double lipschitz_;
  Eigen::MatrixXd diffusion_;
  Eigen::MatrixXd sigma_sigma_t_;
  double ellipticity_;
};

// Step size h with contraction factor r = 1 - L h. Requires h > 0 and
// L h < 1; L == 0 gives r == 1 (the Brownian case).
class StepSize {
 public:
  StepSize(double h, double lipschitz);

  double h() const { return h_; }
  double lipschitz() const { return lipschitz_; }
  double contraction() const { return r_; }

 private:
  double h_;
  double lipschitz_;
  double r_;
};

// (1 - r^{2N}) / (1 - r^2) = sum_{k<N} r^{2k}, evaluated without
// cancellation; equals N at r == 1.
double GeometricVarianceFactor(double r, int steps);

// P_h(x, .) = N(x + h b(x), h sigma sigma^T).
GaussianMeasure EulerStepDistribution(const ItoModel& model,
                                      const StepSize& step,
                                      const Eigen::VectorXd& x);

// N-step marginal of the OU Euler chain P_h(x, .) = N(r x, 2h I):
// N(r^N x, 2h (1 - r^{2N}) / (1 - r^2) I).
GaussianMeasure OuDiscreteMarginal(double lipschitz, const StepSize& step,
                                   int steps, const Eigen::VectorXd& x);

// Law of X_T for dX = -L X dt + sqrt(2) dB started at x:
// N(exp(-LT) x, (1 - exp(-2LT)) / L I).
GaussianMeasure OuContinuousMarginal(double lipschitz, double horizon,
                                     const Eigen::VectorXd& x);

}  // namespace shiftlab

#endif  // SHIFTLAB_KERNELS_H_
