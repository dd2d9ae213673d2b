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

// One-dimensional Fokker-Planck solver for the Langevin diffusion
// dX = -V'(X) dt + sqrt(2) dB and quadrature-based checks of the SRT_q,
// SH_p, SH_log and LGE inequalities against the sharp constants.
//
// The density is stored at grid nodes with half cells at both ends, so the
// trapezoidal mass is conserved exactly by the zero-flux finite-volume
// scheme. Interface fluxes use the Scharfetter-Gummel form, which keeps the
// discrete Gibbs density exp(-V) as an exact steady state. Time stepping is
// Crank-Nicolson with a backward-Euler start to damp the narrow initial
// Gaussian.

#ifndef SHIFTLAB_FOKKER_PLANCK_H_
#define SHIFTLAB_FOKKER_PLANCK_H_

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "shiftlab/gaussian_info.h"
#include "shiftlab/report.h"

namespace shiftlab {

inline constexpr int kMinGridPoints = 128;
inline constexpr double kDensityFloor = 1e-300;
inline constexpr double kQuadratureRelTolerance = 1e-3;

class Grid1D {
 public:
  Grid1D(double lower, double upper, int n_points);

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  int n_points() const { return n_points_; }
  double spacing() const { return (upper_ - lower_) / (n_points_ - 1); }
  double x(int i) const { return lower_ + i * spacing(); }
  // Trapezoidal weight of node i.
  double weight(int i) const;

 private:
  double lower_;
  double upper_;
  int n_points_;
};

// [x0 - w, x0 + w] with w = 10 max(1, beta^{-1/2}). Throws for beta <= 0.
Grid1D DefaultGrid(double beta, double x0, int n_points = 4096);

class Potential1D {
 public:
  using Fn = std::function<double(double)>;

  // Spot-checks |V'(x) - V'(y)| <= beta |x - y| on random pairs in [-10, 10].
  Potential1D(Fn value, Fn derivative, double beta);

  static Potential1D Quadratic(double beta);  // V(x) = beta x^2 / 2

  double Value(double x) const { return value_(x); }
  double Derivative(double x) const { return derivative_(x); }
  double beta() const { return beta_; }

 private:
  Fn value_;
  Fn derivative_;
  double beta_;
};

struct DensityField {
  Grid1D grid;
  std::vector<double> values;
  double time = 0.0;

  double Mass() const;
  // Linear interpolation; zero outside the grid.
  double Interpolate(double x) const;
  // int p g by trapezoid, with p normalized to unit mass.
  double Expectation(const std::function<double(double)>& g) const;
};

// Transition density p_t(x0, .) on the grid. Throws std::runtime_error if the
// mass drifts by more than 1e-6 or if the boundary density exceeds 1e-12 of
// the peak.
DensityField SolveTransitionDensity(const Potential1D& potential, double x0,
                                    double t, const Grid1D& grid);

// R_q(p(. - v) || p) by trapezoidal quadrature; KL at q == 1. Throws
// std::domain_error if the shift carries more than 1e-9 of mass off the grid.
double RenyiShiftQuadrature(const DensityField& density, double v,
                            RenyiOrder q);

// lhs = RenyiShiftQuadrature, rhs = SRT_q constant; pass iff
// lhs <= rhs + 1e-3 rhs.
Check VerifySrt(const DensityField& density, double beta, double v,
                RenyiOrder q);
Check VerifySrt(const Potential1D& potential, double x0, double v, double t,
                RenyiOrder q);

struct TestFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::string name;
};

enum class FunctionalMode { kLge, kShP, kShLog };

// Checks one functional inequality at (x0, t) with the sharp constant:
//   LGE:    (P f')^2 / P f  <=  K ent(f)
//   SH_p:   p log P f(. + v)  <=  E + log P f^p   (logarithmic form)
//   SH_log: P f(. + v)  <=  log P e^f + E
// f must be positive on the grid (and on the shifted grid).
Check VerifyLgeAndHarnack(const DensityField& density, double beta,
                          const TestFunction& f, FunctionalMode mode,
                          double p, double v);

// Test functions for which the OU semigroup attains equality.
TestFunction ExponentialTilt(double c);          // exp(c y)
TestFunction AffineFunction(double c, double k); // c y + k

// Header "x,p" then one row per node.
void WriteDensityCsv(const DensityField& density, std::ostream& out);

}  // namespace shiftlab

#endif  // SHIFTLAB_FOKKER_PLANCK_H_
