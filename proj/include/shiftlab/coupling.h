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

// Finitely supported measures, optimal couplings, the convexity principle
// and a brute-force check of the shifted composition rule on finite spaces.

#ifndef SHIFTLAB_COUPLING_H_
#define SHIFTLAB_COUPLING_H_

#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shiftlab/gaussian_info.h"

namespace shiftlab {

class DiscreteMeasure {
 public:
  // Weights must be >= 0 and sum to 1 within 1e-12; atoms must be distinct
  // and share one dimension.
  DiscreteMeasure(std::vector<Eigen::VectorXd> atoms,
                  std::vector<double> weights);

  static DiscreteMeasure Dirac(Eigen::VectorXd atom);
  static DiscreteMeasure Uniform(std::vector<Eigen::VectorXd> atoms);

  int size() const { return static_cast<int>(atoms_.size()); }
  int dim() const { return static_cast<int>(atoms_.front().size()); }
  const std::vector<Eigen::VectorXd>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  Eigen::VectorXd WeightVector() const;

 private:
  std::vector<Eigen::VectorXd> atoms_;
  std::vector<double> weights_;
};

class Coupling {
 public:
  // Checks nonnegativity and both marginals within 1e-10.
  Coupling(Eigen::MatrixXd joint, const Eigen::VectorXd& first,
           const Eigen::VectorXd& second);

  const Eigen::MatrixXd& joint() const { return joint_; }

 private:
  Eigen::MatrixXd joint_;
};

using PairCost =
    std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

struct OptimalCoupling {
  Coupling coupling;
  double value;
};

// Exact minimizer of sum cost(v, v') gamma(v, v') over couplings of nu and
// nu_prime (at most 64 atoms each).
OptimalCoupling OtMinLinear(const DiscreteMeasure& nu,
                            const DiscreteMeasure& nu_prime,
                            const PairCost& cost);

// Right-hand side of the convexity principle for a Dirac bound rho:
//   q == 1: inf_gamma  int rho(v - v') dgamma
//   q > 1:  inf_gamma  log(int exp((q - 1) rho(v - v')) dgamma) / (q - 1).
// Requires rho(0) == 0 and rho >= 0 at every evaluated difference.
double ConvexityUpgrade(const std::function<double(const Eigen::VectorXd&)>& rho,
                        RenyiOrder q, const DiscreteMeasure& nu,
                        const DiscreteMeasure& nu_prime);

// R_q between probability vectors on a common finite set (KL at q == 1).
// +infinity when a is not absolutely continuous with respect to b.
double DiscreteRenyi(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                     RenyiOrder q);

// Finite instance of the shifted composition rule on Omega = {0..k-1}.
// mu_xy(x, y) and nu_xy(x, y) are joint laws of (X, Y); mu_x_prime is the law
// of the auxiliary variable X' under mu.
struct ShiftedCompositionInstance {
  Eigen::MatrixXd mu_xy;
  Eigen::VectorXd mu_x_prime;
  Eigen::MatrixXd nu_xy;
};

struct ShiftedCompositionReport {
  double lhs = 0.0;              // R_q(mu^Y || nu^Y)
  double shift_term = 0.0;       // R_q(mu^{X'} || nu^X)
  double coupling_term = 0.0;    // LP or bottleneck optimum
  double rhs = 0.0;
  double margin = 0.0;           // rhs - lhs
  bool pass = false;
  Eigen::MatrixXd coupling;      // optimal coupling of (mu^X, mu^{X'})
};

// Computes both sides exactly; pass iff lhs <= rhs + 1e-12 (1 + |rhs|).
// Requires |Omega| <= 6 and positive marginal weights of X under mu and nu;
// a zero-weight state is reported by index.
ShiftedCompositionReport VerifyShiftedCompositionFinite(
    const ShiftedCompositionInstance& instance, RenyiOrder q);

// Random instance with strictly positive weights (normalized exponential
// draws) on |Omega| = states.
ShiftedCompositionInstance RandomShiftedCompositionInstance(
    int states, std::mt19937_64& rng);

// Equal-variance 1D Gaussian mixture sum_i w_i N(m_i, variance).
struct GaussianMixture1D {
  std::vector<double> means;
  std::vector<double> weights;
  double variance = 1.0;

  double Density(double x) const;
};

// R_q (KL at q == 1) between two mixtures by composite Simpson quadrature on
// a window covering every component to 14 standard deviations.
double MixtureRenyi1D(const GaussianMixture1D& a, const GaussianMixture1D& b,
                      RenyiOrder q);

}  // namespace shiftlab

#endif  // SHIFTLAB_COUPLING_H_
