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

#include "shiftlab/fokker_planck.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

#include "shiftlab/bounds.h"

namespace shiftlab {
namespace {

constexpr double kMassTolerance = 1e-6;
constexpr double kBoundaryRatio = 1e-12;
constexpr double kShiftMassTolerance = 1e-9;
constexpr double kMollifierWidth = 3.0;  // in grid spacings
constexpr int kRannacherSteps = 2;       // CN steps replaced by 2x as many BE
constexpr int kLipschitzPairs = 256;

// Bernoulli function z / (e^z - 1).
double Bernoulli(double z) {
  if (std::abs(z) < 1e-10) return 1.0 - 0.5 * z;
  return z / std::expm1(z);
}

struct Tridiagonal {
  std::vector<double> lower;  // lower[i] multiplies x[i - 1]
  std::vector<double> diag;
  std::vector<double> upper;  // upper[i] multiplies x[i + 1]
};

// Generator A of dp/dt = A p.
Tridiagonal BuildGenerator(const Potential1D& potential, const Grid1D& grid) {
  const int n = grid.n_points();
  const double dx = grid.spacing();
  Tridiagonal a{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                std::vector<double>(n, 0.0)};
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = potential.Value(grid.x(i));
  for (int k = 0; k + 1 < n; ++k) {
    // Flux J_k = (B(z) p_k - B(-z) p_{k+1}) / dx from node k to k + 1.
    const double z = v[k + 1] - v[k];
    const double forward = Bernoulli(z) / dx;
    const double backward = Bernoulli(-z) / dx;
    const double wk = grid.weight(k);
    const double wk1 = grid.weight(k + 1);
    a.diag[k] -= forward / wk;
    a.upper[k] += backward / wk;
    a.diag[k + 1] -= backward / wk1;
    a.lower[k + 1] += forward / wk1;
  }
  return a;
}

// Solves (I - theta dt A) x = (I + (1 - theta) dt A) p in place.
void ThetaStep(const Tridiagonal& a, double dt, double theta,
               std::vector<double>& p, std::vector<double>& scratch_c,
               std::vector<double>& scratch_d) {
  const int n = static_cast<int>(p.size());
  const double explicit_dt = (1.0 - theta) * dt;
  std::vector<double>& d = scratch_d;
  for (int i = 0; i < n; ++i) {
    double rhs = p[i] + explicit_dt * a.diag[i] * p[i];
    if (i > 0) rhs += explicit_dt * a.lower[i] * p[i - 1];
    if (i + 1 < n) rhs += explicit_dt * a.upper[i] * p[i + 1];
    d[i] = rhs;
  }
  // Thomas algorithm on I - theta dt A.
  std::vector<double>& c = scratch_c;
  const double s = theta * dt;
  double denom = 1.0 - s * a.diag[0];
  c[0] = -s * a.upper[0] / denom;
  d[0] /= denom;
  for (int i = 1; i < n; ++i) {
    const double lower = -s * a.lower[i];
    denom = (1.0 - s * a.diag[i]) - lower * c[i - 1];
    c[i] = (i + 1 < n) ? -s * a.upper[i] / denom : 0.0;
    d[i] = (d[i] - lower * d[i - 1]) / denom;
  }
  p[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) p[i] = d[i] - c[i] * p[i + 1];
}

double TrapezoidMass(const Grid1D& grid, const std::vector<double>& p) {
  double mass = 0.0;
  for (int i = 0; i < grid.n_points(); ++i) mass += grid.weight(i) * p[i];
  return mass;
}

// Mass of the density within |v| of either end of the grid.
double MassNearBoundary(const DensityField& density, double v) {
  const Grid1D& g = density.grid;
  const double reach = std::abs(v) + g.spacing();
  double mass = 0.0;
  for (int i = 0; i < g.n_points(); ++i) {
    const double x = g.x(i);
    if (x - g.lower() <= reach || g.upper() - x <= reach) {
      mass += g.weight(i) * density.values[i];
    }
  }
  return mass / density.Mass();
}

void CheckShiftInside(const DensityField& density, double v) {
  const Grid1D& g = density.grid;
  if (!std::isfinite(v) || std::abs(v) >= 0.5 * (g.upper() - g.lower())) {
    throw std::domain_error("shift exits the domain");
  }
  const double near = MassNearBoundary(density, v);
  if (near > kShiftMassTolerance) {
    throw std::domain_error("shift exits the domain: boundary-strip mass " +
                            FormatDouble(near));
  }
}

double LogSumExp(const std::vector<double>& terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (double t : terms) top = std::max(top, t);
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return top + std::log(sum);
}

Check MakeCheck(const std::string& name, double lhs, double rhs, bool pass) {
  Check check;
  check.name = name;
  check.lhs = lhs;
  check.rhs = rhs;
  check.margin = rhs - lhs;
  check.pass = pass;
  return check;
}

}  // namespace

Grid1D::Grid1D(double lower, double upper, int n_points)
    : lower_(lower), upper_(upper), n_points_(n_points) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(upper > lower)) {
    throw std::invalid_argument("grid needs finite lower < upper");
  }
  if (n_points < kMinGridPoints) {
    throw std::invalid_argument("grid needs at least 128 points");
  }
}

double Grid1D::weight(int i) const {
  const double dx = spacing();
  return (i == 0 || i == n_points_ - 1) ? 0.5 * dx : dx;
}

Grid1D DefaultGrid(double beta, double x0, int n_points) {
  if (!(beta > 0.0)) {
    throw std::invalid_argument("beta = 0 needs an explicit grid");
  }
  const double half_width = 10.0 * std::max(1.0, 1.0 / std::sqrt(beta));
  return Grid1D(x0 - half_width, x0 + half_width, n_points);
}

Potential1D::Potential1D(Fn value, Fn derivative, double beta)
    : value_(std::move(value)), derivative_(std::move(derivative)), beta_(beta) {
  if (!value_ || !derivative_) {
    throw std::invalid_argument("potential needs V and V'");
  }
  if (!(beta_ >= 0.0) || !std::isfinite(beta_)) {
    throw std::invalid_argument("beta must be finite and >= 0");
  }
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unif(-10.0, 10.0);
  for (int k = 0; k < kLipschitzPairs; ++k) {
    const double x = unif(rng);
    const double y = unif(rng);
    const double gap = std::abs(derivative_(x) - derivative_(y));
    if (gap > beta_ * std::abs(x - y) * (1.0 + 1e-9) + 1e-12) {
      throw std::invalid_argument(
          "V' violates the declared beta-Lipschitz bound");
    }
  }
}

Potential1D Potential1D::Quadratic(double beta) {
  return Potential1D([beta](double x) { return 0.5 * beta * x * x; },
                     [beta](double x) { return beta * x; }, beta);
}

double DensityField::Mass() const { return TrapezoidMass(grid, values); }

double DensityField::Interpolate(double x) const {
  const double pos = (x - grid.lower()) / grid.spacing();
  if (!(pos >= 0.0) || pos > grid.n_points() - 1) return 0.0;
  const int i = std::min(static_cast<int>(pos), grid.n_points() - 2);
  const double frac = pos - i;
  return (1.0 - frac) * values[i] + frac * values[i + 1];
}

double DensityField::Expectation(const std::function<double(double)>& g) const {
  double total = 0.0;
  for (int i = 0; i < grid.n_points(); ++i) {
    if (values[i] == 0.0) continue;
    total += grid.weight(i) * values[i] * g(grid.x(i));
  }
  return total / Mass();
}

DensityField SolveTransitionDensity(const Potential1D& potential, double x0,
                                    double t, const Grid1D& grid) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("t must be finite and > 0");
  }
  const double dx = grid.spacing();
  const double width = kMollifierWidth * dx;
  if (x0 - 10.0 * width < grid.lower() || x0 + 10.0 * width > grid.upper()) {
    throw std::invalid_argument("x0 too close to the grid boundary");
  }
  const int n = grid.n_points();
  std::vector<double> p(n);
  for (int i = 0; i < n; ++i) {
    const double u = (grid.x(i) - x0) / width;
    p[i] = std::exp(-0.5 * u * u);
  }
  const double mass0 = TrapezoidMass(grid, p);
  for (double& value : p) value /= mass0;

  double dt_max = dx;
  if (potential.beta() > 0.0) dt_max = std::min(dt_max, 0.1 / potential.beta());
  const int steps = std::max(1, static_cast<int>(std::ceil(t / dt_max)));
  const double dt = t / steps;
  const Tridiagonal a = BuildGenerator(potential, grid);
  std::vector<double> c(n);
  std::vector<double> d(n);

  auto after_step = [&]() {
    for (double& value : p) value = std::max(value, 0.0);
    const double mass = TrapezoidMass(grid, p);
    if (std::abs(mass - 1.0) > kMassTolerance) {
      throw std::runtime_error("Fokker-Planck mass drifted to " +
                               FormatDouble(mass));
    }
  };
  const int implicit = std::min(steps, kRannacherSteps);
  for (int k = 0; k < 2 * implicit; ++k) {
    ThetaStep(a, 0.5 * dt, 1.0, p, c, d);
    after_step();
  }
  for (int k = implicit; k < steps; ++k) {
    ThetaStep(a, dt, 0.5, p, c, d);
    after_step();
  }

  const double peak = *std::max_element(p.begin(), p.end());
  if (std::max(p.front(), p.back()) > kBoundaryRatio * peak) {
    throw std::runtime_error(
        "boundary density exceeds 1e-12 of the peak; widen the domain");
  }
  return DensityField{grid, std::move(p), t};
}

double RenyiShiftQuadrature(const DensityField& density, double v,
                            RenyiOrder q) {
  if (v == 0.0) return 0.0;
  CheckShiftInside(density, v);
  const Grid1D& g = density.grid;
  const int n = g.n_points();
  std::vector<double> mu(n);
  for (int i = 0; i < n; ++i) mu[i] = density.Interpolate(g.x(i) - v);
  const double mu_mass = TrapezoidMass(g, mu);
  const double nu_mass = density.Mass();

  if (q.IsKl()) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = mu[i] / mu_mass;
      const double b = density.values[i] / nu_mass;
      if (b <= kDensityFloor || a <= kDensityFloor) continue;
      total += g.weight(i) * a * std::log(a / b);
    }
    return total;
  }
  std::vector<double> terms;
  terms.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double a = mu[i] / mu_mass;
    const double b = density.values[i] / nu_mass;
    if (b <= kDensityFloor || a <= kDensityFloor) continue;
    terms.push_back(std::log(g.weight(i)) + q.value() * std::log(a) +
                    (1.0 - q.value()) * std::log(b));
  }
  return LogSumExp(terms) / (q.value() - 1.0);
}

Check VerifySrt(const DensityField& density, double beta, double v,
                RenyiOrder q) {
  const double lhs = RenyiShiftQuadrature(density, v, q);
  const BoundKind kind = q.IsKl() ? BoundKind::kSrt1 : BoundKind::kSrtQ;
  const double rhs =
      TheoremConstant(kind, beta, density.time, q.value(), std::abs(v)).value;
  return MakeCheck(BoundKindName(kind), lhs, rhs,
                   lhs <= rhs + kQuadratureRelTolerance * rhs);
}

Check VerifySrt(const Potential1D& potential, double x0, double v, double t,
                RenyiOrder q) {
  const DensityField density = SolveTransitionDensity(
      potential, x0, t, DefaultGrid(potential.beta(), x0));
  return VerifySrt(density, potential.beta(), v, q);
}

Check VerifyLgeAndHarnack(const DensityField& density, double beta,
                          const TestFunction& f, FunctionalMode mode, double p,
                          double v) {
  if (!f.value) throw std::invalid_argument("test function missing");
  const Grid1D& g = density.grid;
  const bool shifted = mode != FunctionalMode::kLge;
  if (shifted && v != 0.0) CheckShiftInside(density, v);
  for (int i = 0; i < g.n_points(); ++i) {
    if (!(f.value(g.x(i)) > 0.0) ||
        (shifted && !(f.value(g.x(i) + v) > 0.0))) {
      throw std::invalid_argument("test function " + f.name +
                                  " is not positive on the grid");
    }
  }
  const double t = density.time;
  const double nv = std::abs(v);
  switch (mode) {
    case FunctionalMode::kLge: {
      if (!f.derivative) {
        throw std::invalid_argument("LGE needs the derivative of f");
      }
      const double pf = density.Expectation(f.value);
      const double pdf = density.Expectation(f.derivative);
      const double pflogf = density.Expectation(
          [&](double y) { const double fy = f.value(y); return fy * std::log(fy); });
      const double entropy = pflogf - pf * std::log(pf);
      const double k = TheoremConstant(BoundKind::kLge, beta, t, 0.0, 0.0).value;
      const double lhs = pdf * pdf / pf;
      const double rhs = k * entropy;
      return MakeCheck("LGE", lhs, rhs,
                       lhs <= rhs + kQuadratureRelTolerance * std::abs(rhs) +
                                  1e-12);
    }
    case FunctionalMode::kShP: {
      const double e = TheoremConstant(BoundKind::kShP, beta, t, p, nv).value;
      const double shifted_mean =
          density.Expectation([&](double y) { return f.value(y + v); });
      const double power_mean =
          density.Expectation([&](double y) { return std::pow(f.value(y), p); });
      const double lhs = p * std::log(shifted_mean);
      const double rhs = e + std::log(power_mean);
      // Relative 1e-3 slack on the linear scale.
      return MakeCheck("SH_p", lhs, rhs,
                       lhs - rhs <= std::log1p(kQuadratureRelTolerance));
    }
    case FunctionalMode::kShLog: {
      const double e = TheoremConstant(BoundKind::kShLog, beta, t, 0.0, nv).value;
      const double lhs =
          density.Expectation([&](double y) { return f.value(y + v); });
      const double rhs =
          std::log(density.Expectation(
              [&](double y) { return std::exp(f.value(y)); })) +
          e;
      return MakeCheck("SH_log", lhs, rhs,
                       lhs <= rhs + kQuadratureRelTolerance * std::abs(rhs) +
                                  1e-12);
    }
  }
  throw std::invalid_argument("unknown functional mode");
}

TestFunction ExponentialTilt(double c) {
  return {[c](double y) { return std::exp(c * y); },
          [c](double y) { return c * std::exp(c * y); },
          "exp(" + FormatDouble(c) + "*x)"};
}

TestFunction AffineFunction(double c, double k) {
  return {[c, k](double y) { return c * y + k; }, [c](double) { return c; },
          FormatDouble(c) + "*x+" + FormatDouble(k)};
}

void WriteDensityCsv(const DensityField& density, std::ostream& out) {
  out << "x,p\n";
  for (int i = 0; i < density.grid.n_points(); ++i) {
    out << FormatDouble(density.grid.x(i)) << ','
        << FormatDouble(density.values[i]) << '\n';
  }
}

}  // namespace shiftlab
