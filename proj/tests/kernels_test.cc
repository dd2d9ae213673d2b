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
#include <stdexcept>

#include <gtest/gtest.h>

namespace shiftlab {
namespace {

Eigen::VectorXd Scalar(double x) { return Eigen::VectorXd::Constant(1, x); }

TEST(ItoModelTest, ValidatesConstruction) {
  const Eigen::MatrixXd sigma = std::sqrt(2.0) * Eigen::MatrixXd::Identity(2, 2);
  auto zero = [](const Eigen::VectorXd& x) { return Eigen::VectorXd(0 * x); };
  EXPECT_NO_THROW(ItoModel(zero, 0.0, sigma, 2.0));
  // Ellipticity above the smallest eigenvalue of sigma sigma^T.
  EXPECT_THROW(ItoModel(zero, 0.0, sigma, 2.5), std::invalid_argument);
  // Drift steeper than the declared Lipschitz constant.
  auto steep = [](const Eigen::VectorXd& x) { return Eigen::VectorXd(-3.0 * x); };
  EXPECT_THROW(ItoModel(steep, 1.0, sigma, 2.0), std::invalid_argument);
  EXPECT_THROW(ItoModel(zero, -1.0, sigma, 2.0), std::invalid_argument);
}

TEST(StepSizeTest, RequiresStepBelowInverseLipschitz) {
  EXPECT_NEAR(StepSize(0.1, 1.0).contraction(), 0.9, 1e-15);
  EXPECT_EQ(StepSize(0.1, 0.0).contraction(), 1.0);
  EXPECT_THROW(StepSize(1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(StepSize(0.0, 1.0), std::invalid_argument);
}

TEST(EulerStepTest, Examples) {
  const ItoModel brownian(
      [](const Eigen::VectorXd& x) { return Eigen::VectorXd(0 * x); }, 0.0,
      std::sqrt(2.0) * Eigen::MatrixXd::Identity(3, 3), 2.0);
  const GaussianMeasure g =
      EulerStepDistribution(brownian, StepSize(0.1, 0.0), Eigen::VectorXd::Zero(3));
  EXPECT_TRUE(g.mean().isZero(0.0));
  EXPECT_TRUE(g.covariance().isApprox(0.2 * Eigen::MatrixXd::Identity(3, 3), 1e-15));

  const ItoModel ou = ItoModel::OrnsteinUhlenbeck(1, 1.0);
  const StepSize step(0.1, 1.0);
  const GaussianMeasure one = EulerStepDistribution(ou, step, Scalar(1.0));
  EXPECT_NEAR(one.mean()[0], 0.9, 1e-15);
  EXPECT_NEAR(one.covariance()(0, 0), 0.2, 1e-15);
}

TEST(OuMarginalTest, DiscreteExamples) {
  const StepSize step(0.1, 1.0);
  const GaussianMeasure two = OuDiscreteMarginal(1.0, step, 2, Scalar(1.0));
  EXPECT_NEAR(two.mean()[0], 0.81, 1e-15);
  EXPECT_NEAR(two.covariance()(0, 0), 0.362, 1e-15);

  const GaussianMeasure brownian =
      OuDiscreteMarginal(0.0, StepSize(0.1, 0.0), 5, Scalar(0.0));
  EXPECT_NEAR(brownian.covariance()(0, 0), 1.0, 1e-15);
  EXPECT_EQ(brownian.mean()[0], 0.0);

  const ItoModel ou = ItoModel::OrnsteinUhlenbeck(1, 1.0);
  const GaussianMeasure euler = EulerStepDistribution(ou, step, Scalar(-0.7));
  const GaussianMeasure marginal = OuDiscreteMarginal(1.0, step, 1, Scalar(-0.7));
  EXPECT_NEAR(euler.mean()[0], marginal.mean()[0], 1e-15);
  EXPECT_NEAR(euler.covariance()(0, 0), marginal.covariance()(0, 0), 1e-15);
}

TEST(OuMarginalTest, RejectsStepBuiltForAnotherModel) {
  EXPECT_THROW(OuDiscreteMarginal(2.0, StepSize(0.1, 1.0), 2, Scalar(0.0)),
               std::invalid_argument);
  EXPECT_THROW(OuDiscreteMarginal(1.0, StepSize(0.1, 1.0), 0, Scalar(0.0)),
               std::invalid_argument);
}

TEST(OuMarginalTest, ContinuousExamples) {
  const GaussianMeasure g = OuContinuousMarginal(1.0, 1.0, Scalar(1.0));
  EXPECT_NEAR(g.mean()[0], std::exp(-1.0), 1e-15);
  EXPECT_NEAR(g.covariance()(0, 0), 1.0 - std::exp(-2.0), 1e-15);
  const GaussianMeasure late = OuContinuousMarginal(2.0, 50.0, Scalar(3.0));
  EXPECT_NEAR(late.mean()[0], 0.0, 1e-15);
  EXPECT_NEAR(late.covariance()(0, 0), 0.5, 1e-15);
  EXPECT_THROW(OuContinuousMarginal(1.0, 0.0, Scalar(0.0)), std::invalid_argument);
}

TEST(OuMarginalTest, DiscreteConvergesToContinuous) {
  for (double l : {0.5, 1.0, 2.0}) {
    const double horizon = 1.0;
    const int n = 10000;
    const StepSize step(horizon / n, l);
    const GaussianMeasure d = OuDiscreteMarginal(l, step, n, Scalar(1.5));
    const GaussianMeasure c = OuContinuousMarginal(l, horizon, Scalar(1.5));
    EXPECT_NEAR(d.mean()[0] / c.mean()[0], 1.0, 1e-3);
    EXPECT_NEAR(d.covariance()(0, 0) / c.covariance()(0, 0), 1.0, 1e-3);
  }
}

TEST(GeometricVarianceTest, MatchesDirectSummation) {
  EXPECT_THROW(GeometricVarianceFactor(0.0, 3), std::invalid_argument);
  for (double r : {1e-3, 0.3, 0.9, 0.999, 1.0}) {
    for (int n = 1; n <= 20; ++n) {
      double sum = 0.0;
      for (int k = 0; k < n; ++k) sum += std::pow(r, 2 * k);
      EXPECT_NEAR(GeometricVarianceFactor(r, n), sum, 1e-12 * sum)
          << "r=" << r << " N=" << n;
    }
  }
}

TEST(SemigroupTest, IteratedEulerStepsEqualClosedForm) {
  // Pushes the mean through the linear drift and sums covariances.
  for (double l : {0.0, 0.5, 1.0, 3.0}) {
    for (double h : {0.01, 0.1, 0.3}) {
      if (l * h >= 1.0) continue;
      const int d = 2;
      const ItoModel ou = ItoModel::OrnsteinUhlenbeck(d, l);
      const StepSize step(h, l);
      Eigen::VectorXd mean(d);
      mean << 1.0, -2.0;
      const Eigen::VectorXd x0 = mean;
      Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
      for (int n = 1; n <= 12; ++n) {
        const GaussianMeasure kernel = EulerStepDistribution(ou, step, mean);
        const double r = step.contraction();
        mean = kernel.mean();
        cov = r * r * cov + kernel.covariance();
        const GaussianMeasure closed = OuDiscreteMarginal(l, step, n, x0);
        EXPECT_TRUE(closed.mean().isApprox(mean, 1e-13));
        EXPECT_TRUE(closed.covariance().isApprox(cov, 1e-13));
      }
    }
  }
}

}  // namespace
}  // namespace shiftlab
