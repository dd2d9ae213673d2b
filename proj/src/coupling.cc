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

#include "shiftlab/coupling.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "shiftlab/transport.h"

namespace shiftlab {
namespace {

constexpr double kWeightSumTolerance = 1e-12;
constexpr double kMarginalTolerance = 1e-10;
constexpr int kMaxFiniteStates = 6;
constexpr int kMixtureNodes = 20000;  // even, for Simpson
constexpr double kMixtureWindow = 14.0;

double LogSumExp(const std::vector<double>& terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (double t : terms) top = std::max(top, t);
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return top + std::log(sum);
}

void CheckProbabilityVector(const Eigen::VectorXd& p, const std::string& what) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0) || !std::isfinite(p[i])) {
      throw std::invalid_argument(what + " has a negative or non-finite entry");
    }
  }
  if (std::abs(p.sum() - 1.0) > kWeightSumTolerance) {
    throw std::invalid_argument(what + " does not sum to 1");
  }
}

double LogMixtureDensity(const GaussianMixture1D& mix, double x) {
  std::vector<double> terms;
  terms.reserve(mix.means.size());
  const double log_norm = -0.5 * std::log(2.0 * M_PI * mix.variance);
  for (size_t i = 0; i < mix.means.size(); ++i) {
    if (mix.weights[i] <= 0.0) continue;
    const double d = x - mix.means[i];
    terms.push_back(std::log(mix.weights[i]) + log_norm -
                    0.5 * d * d / mix.variance);
  }
  return LogSumExp(terms);
}

void CheckMixture(const GaussianMixture1D& mix) {
  if (mix.means.empty() || mix.means.size() != mix.weights.size()) {
    throw std::invalid_argument("mixture needs matching means and weights");
  }
  if (!(mix.variance > 0.0)) {
    throw std::invalid_argument("mixture variance must be > 0");
  }
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(
      mix.weights.data(), static_cast<Eigen::Index>(mix.weights.size()));
  CheckProbabilityVector(w, "mixture weights");
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Eigen::VectorXd> atoms,
                                 std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty()) throw std::invalid_argument("measure needs an atom");
  if (atoms_.size() != weights_.size()) {
    throw std::invalid_argument("atoms and weights differ in length");
  }
  const auto d = atoms_.front().size();
  for (size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].size() != d || d == 0) {
      throw std::invalid_argument("atoms must share a positive dimension");
    }
    if (!atoms_[i].allFinite()) throw std::invalid_argument("atom not finite");
    for (size_t j = 0; j < i; ++j) {
      if (atoms_[i] == atoms_[j]) {
        throw std::invalid_argument("atoms must be distinct");
      }
    }
  }
  CheckProbabilityVector(WeightVector(), "measure weights");
}

DiscreteMeasure DiscreteMeasure::Dirac(Eigen::VectorXd atom) {
  return DiscreteMeasure({std::move(atom)}, {1.0});
}

DiscreteMeasure DiscreteMeasure::Uniform(std::vector<Eigen::VectorXd> atoms) {
  const size_t k = atoms.size();
  if (k == 0) throw std::invalid_argument("measure needs an atom");
  return DiscreteMeasure(std::move(atoms), std::vector<double>(k, 1.0 / k));
}

Eigen::VectorXd DiscreteMeasure::WeightVector() const {
  return Eigen::Map<const Eigen::VectorXd>(
      weights_.data(), static_cast<Eigen::Index>(weights_.size()));
}

Coupling::Coupling(Eigen::MatrixXd joint, const Eigen::VectorXd& first,
                   const Eigen::VectorXd& second)
    : joint_(std::move(joint)) {
  if (joint_.rows() != first.size() || joint_.cols() != second.size()) {
    throw std::invalid_argument("coupling shape does not match marginals");
  }
  if ((joint_.array() < 0.0).any()) {
    throw std::invalid_argument("coupling has a negative entry");
  }
  if ((joint_.rowwise().sum() - first).cwiseAbs().maxCoeff() >
          kMarginalTolerance ||
      (joint_.colwise().sum().transpose() - second).cwiseAbs().maxCoeff() >
          kMarginalTolerance) {
    throw std::invalid_argument("coupling marginals do not match");
  }
}

OptimalCoupling OtMinLinear(const DiscreteMeasure& nu,
                            const DiscreteMeasure& nu_prime,
                            const PairCost& cost) {
  if (nu.dim() != nu_prime.dim()) {
    throw std::invalid_argument("measures live in different dimensions");
  }
  Eigen::MatrixXd c(nu.size(), nu_prime.size());
  for (int i = 0; i < nu.size(); ++i) {
    for (int j = 0; j < nu_prime.size(); ++j) {
      c(i, j) = cost(nu.atoms()[i], nu_prime.atoms()[j]);
    }
  }
  const Eigen::VectorXd a = nu.WeightVector();
  const Eigen::VectorXd b = nu_prime.WeightVector();
  TransportResult solved = SolveTransport(a, b, c);
  if (std::isinf(solved.value)) {
    throw std::invalid_argument("every coupling has infinite cost");
  }
  return {Coupling(std::move(solved.plan), a, b), solved.value};
}

double ConvexityUpgrade(
    const std::function<double(const Eigen::VectorXd&)>& rho, RenyiOrder q,
    const DiscreteMeasure& nu, const DiscreteMeasure& nu_prime) {
  if (nu.dim() != nu_prime.dim()) {
    throw std::invalid_argument("measures live in different dimensions");
  }
  if (std::abs(rho(Eigen::VectorXd::Zero(nu.dim()))) > 1e-12) {
    throw std::invalid_argument("rho(0) must be 0");
  }
  Eigen::MatrixXd r(nu.size(), nu_prime.size());
  double top = 0.0;
  for (int i = 0; i < nu.size(); ++i) {
    for (int j = 0; j < nu_prime.size(); ++j) {
      r(i, j) = rho(nu.atoms()[i] - nu_prime.atoms()[j]);
      if (!(r(i, j) >= 0.0)) throw std::invalid_argument("rho must be >= 0");
      if (std::isfinite(r(i, j))) top = std::max(top, r(i, j));
    }
  }
  const Eigen::VectorXd a = nu.WeightVector();
  const Eigen::VectorXd b = nu_prime.WeightVector();
  if (q.IsKl()) return SolveTransport(a, b, r).value;
  // exp((q-1) rho) rescaled by its largest finite value to avoid overflow.
  const double k = q.value() - 1.0;
  Eigen::MatrixXd e = (k * (r.array() - top)).exp().matrix();
  const TransportResult solved = SolveTransport(a, b, e);
  if (std::isinf(solved.value)) return solved.value;
  return std::log(solved.value) / k + top;
}

double DiscreteRenyi(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                     RenyiOrder q) {
  if (a.size() != b.size()) throw std::invalid_argument("size mismatch");
  const double inf = std::numeric_limits<double>::infinity();
  if (q.IsKl()) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a[i] <= 0.0) continue;
      if (b[i] <= 0.0) return inf;
      total += a[i] * std::log(a[i] / b[i]);
    }
    return std::max(total, 0.0);
  }
  std::vector<double> terms;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] <= 0.0) continue;
    if (b[i] <= 0.0) return inf;
    terms.push_back(q.value() * std::log(a[i]) +
                    (1.0 - q.value()) * std::log(b[i]));
  }
  return std::max(LogSumExp(terms) / (q.value() - 1.0), 0.0);
}

ShiftedCompositionReport VerifyShiftedCompositionFinite(
    const ShiftedCompositionInstance& instance, RenyiOrder q) {
  const Eigen::MatrixXd& mu = instance.mu_xy;
  const Eigen::MatrixXd& nu = instance.nu_xy;
  const Eigen::Index kx = mu.rows();
  const Eigen::Index ky = mu.cols();
  if (kx < 1 || ky < 1 || kx > kMaxFiniteStates || ky > kMaxFiniteStates) {
    throw std::invalid_argument("finite verification supports |Omega| <= 6");
  }
  if (nu.rows() != kx || nu.cols() != ky ||
      instance.mu_x_prime.size() != kx) {
    throw std::invalid_argument("instance shapes disagree");
  }
  Eigen::VectorXd mu_flat = Eigen::Map<const Eigen::VectorXd>(mu.data(), mu.size());
  Eigen::VectorXd nu_flat = Eigen::Map<const Eigen::VectorXd>(nu.data(), nu.size());
  CheckProbabilityVector(mu_flat, "mu joint");
  CheckProbabilityVector(nu_flat, "nu joint");
  CheckProbabilityVector(instance.mu_x_prime, "mu X' marginal");

  const Eigen::VectorXd mu_x = mu.rowwise().sum();
  const Eigen::VectorXd nu_x = nu.rowwise().sum();
  for (Eigen::Index x = 0; x < kx; ++x) {
    if (!(mu_x[x] > 0.0)) {
      throw std::invalid_argument("mu^X(" + std::to_string(x) +
                                  ") = 0: conditional law of Y undefined");
    }
    if (!(nu_x[x] > 0.0)) {
      throw std::invalid_argument("nu^X(" + std::to_string(x) +
                                  ") = 0: conditional law of Y undefined");
    }
  }

  Eigen::MatrixXd cost(kx, kx);
  for (Eigen::Index x = 0; x < kx; ++x) {
    const Eigen::VectorXd mu_cond = mu.row(x).transpose() / mu_x[x];
    for (Eigen::Index xp = 0; xp < kx; ++xp) {
      const Eigen::VectorXd nu_cond = nu.row(xp).transpose() / nu_x[xp];
      cost(x, xp) = DiscreteRenyi(mu_cond, nu_cond, q);
    }
  }

  ShiftedCompositionReport report;
  report.lhs = DiscreteRenyi(mu.colwise().sum().transpose(),
                             nu.colwise().sum().transpose(), q);
  report.shift_term = DiscreteRenyi(instance.mu_x_prime, nu_x, q);
  const TransportResult solved =
      q.IsKl() ? SolveTransport(mu_x, instance.mu_x_prime, cost)
               : SolveBottleneck(mu_x, instance.mu_x_prime, cost);
  report.coupling_term = solved.value;
  report.coupling = solved.plan;
  report.rhs = report.shift_term + report.coupling_term;
  report.margin = report.rhs - report.lhs;
  report.pass = std::isinf(report.rhs) ||
                report.lhs <= report.rhs + 1e-12 * (1.0 + std::abs(report.rhs));
  return report;
}

ShiftedCompositionInstance RandomShiftedCompositionInstance(
    int states, std::mt19937_64& rng) {
  if (states < 1 || states > kMaxFiniteStates) {
    throw std::invalid_argument("states must lie in 1..6");
  }
  std::exponential_distribution<double> draw(1.0);
  auto random_matrix = [&](Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = draw(rng) + 1e-3;
    }
    return Eigen::MatrixXd(m / m.sum());
  };
  ShiftedCompositionInstance instance;
  instance.mu_xy = random_matrix(states, states);
  instance.mu_x_prime = random_matrix(states, 1).col(0);
  instance.nu_xy = random_matrix(states, states);
  return instance;
}

double GaussianMixture1D::Density(double x) const {
  return std::exp(LogMixtureDensity(*this, x));
}

double MixtureRenyi1D(const GaussianMixture1D& a, const GaussianMixture1D& b,
                      RenyiOrder q) {
  CheckMixture(a);
  CheckMixture(b);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const GaussianMixture1D* mix : {&a, &b}) {
    const double reach = kMixtureWindow * std::sqrt(mix->variance);
    for (double m : mix->means) {
      lo = std::min(lo, m - reach);
      hi = std::max(hi, m + reach);
    }
  }
  const double h = (hi - lo) / kMixtureNodes;
  std::vector<double> log_terms;
  double kl = 0.0;
  for (int i = 0; i <= kMixtureNodes; ++i) {
    const double x = lo + i * h;
    const double weight =
        (i == 0 || i == kMixtureNodes) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const double la = LogMixtureDensity(a, x);
    const double lb = LogMixtureDensity(b, x);
    if (q.IsKl()) {
      if (std::isfinite(la)) kl += weight * std::exp(la) * (la - lb);
    } else {
      log_terms.push_back(std::log(weight) + q.value() * la +
                          (1.0 - q.value()) * lb);
    }
  }
  if (q.IsKl()) return std::max(0.0, kl * h / 3.0);
  return std::max(
      0.0, (LogSumExp(log_terms) + std::log(h / 3.0)) / (q.value() - 1.0));
}

}  // namespace shiftlab
