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

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "shiftlab/bounds.h"

namespace shiftlab {
namespace {

double GaussianPdf(double x, double mean, double variance) {
  const double u = x - mean;
  return std::exp(-0.5 * u * u / variance) / std::sqrt(2.0 * M_PI * variance);
}

// Root of the trapezoidal integral of (p - g)^2.
double L2Error(const DensityField& p, double mean, double variance) {
  double sum = 0.0;
  for (int i = 0; i < p.grid.n_points(); ++i) {
    const double e = p.values[i] - GaussianPdf(p.grid.x(i), mean, variance);
    sum += p.grid.weight(i) * e * e;
  }
  return std::sqrt(sum);
}

Potential1D PerturbedPotential() {
  return Potential1D([](double x) { return 0.5 * x * x + 0.1 * std::sin(x); },
                     [](double x) { return x + 0.1 * std::cos(x); }, 1.1);
}

TEST(Grid1DTest, ValidatesAndWeights) {
  EXPECT_THROW(Grid1D(0.0, 1.0, 127), std::invalid_argument);
  EXPECT_THROW(Grid1D(1.0, 0.0, 200), std::invalid_argument);
  const Grid1D g(-1.0, 1.0, 201);
  EXPECT_NEAR(g.spacing(), 0.01, 1e-15);
  EXPECT_NEAR(g.weight(0), 0.005, 1e-15);
  EXPECT_NEAR(g.weight(100), 0.01, 1e-15);
  const Grid1D d = DefaultGrid(0.25, 1.0);
  EXPECT_NEAR(d.lower(), 1.0 - 20.0, 1e-12);
  EXPECT_NEAR(d.upper(), 1.0 + 20.0, 1e-12);
  EXPECT_EQ(d.n_points(), 4096);
  EXPECT_THROW(DefaultGrid(0.0, 0.0), std::invalid_argument);
}

TEST(Potential1DTest, SpotChecksDeclaredBeta) {
  EXPECT_THROW(Potential1D([](double x) { return x * x; },
                           [](double x) { return 2.0 * x; }, 1.0),
               std::invalid_argument);
  EXPECT_NO_THROW(PerturbedPotential());
}

TEST(SolveTransitionDensityTest, OuMatchesExactGaussian) {
  const DensityField p = SolveTransitionDensity(Potential1D::Quadratic(1.0), 0.0,
                                                1.0, DefaultGrid(1.0, 0.0));
  EXPECT_NEAR(p.Mass(), 1.0, 1e-6);
  EXPECT_LT(L2Error(p, 0.0, 1.0 - std::exp(-2.0)), 1e-3);
  // Off-center start: mean decays as exp(-t).
  const DensityField q = SolveTransitionDensity(Potential1D::Quadratic(1.0), 1.5,
                                                0.7, DefaultGrid(1.0, 1.5));
  EXPECT_LT(L2Error(q, 1.5 * std::exp(-0.7), 1.0 - std::exp(-1.4)), 1e-3);
}

TEST(SolveTransitionDensityTest, FreeDiffusionIsHeatKernel) {
  const Potential1D flat([](double) { return 0.0; }, [](double) { return 0.0; },
                         0.0);
  const DensityField p =
      SolveTransitionDensity(flat, 0.4, 0.5, Grid1D(-15.0, 15.0, 4096));
  EXPECT_LT(L2Error(p, 0.4, 1.0), 1e-3);
}

TEST(SolveTransitionDensityTest, LongTimeIsStationary) {
  const DensityField p = SolveTransitionDensity(Potential1D::Quadratic(1.0), 0.5,
                                                12.0, DefaultGrid(1.0, 0.0));
  EXPECT_LT(L2Error(p, 0.0, 1.0), 1e-3);
}

TEST(SolveTransitionDensityTest, ErrorsOnSmallDomainAndBadInput) {
  EXPECT_THROW(SolveTransitionDensity(Potential1D::Quadratic(1.0), 0.0, 1.0,
                                      Grid1D(-3.0, 3.0, 512)),
               std::runtime_error);
  EXPECT_THROW(SolveTransitionDensity(Potential1D::Quadratic(1.0), 0.0, 0.0,
                                      DefaultGrid(1.0, 0.0)),
               std::invalid_argument);
  EXPECT_THROW(SolveTransitionDensity(Potential1D::Quadratic(1.0), 10.0, 1.0,
                                      DefaultGrid(1.0, 0.0)),
               std::invalid_argument);
}

class OuDensityTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    density_ = new DensityField(SolveTransitionDensity(
        Potential1D::Quadratic(1.0), 0.0, 1.0, DefaultGrid(1.0, 0.0)));
  }
  static void TearDownTestSuite() { delete density_; }
  static DensityField* density_;
};
DensityField* OuDensityTest::density_ = nullptr;

TEST_F(OuDensityTest, ShiftQuadratureValues) {
  EXPECT_EQ(RenyiShiftQuadrature(*density_, 0.0, RenyiOrder(2.0)), 0.0);
  const double kl = RenyiShiftQuadrature(*density_, 0.5, RenyiOrder(1.0));
  const double r2 = RenyiShiftQuadrature(*density_, 0.5, RenyiOrder(2.0));
  EXPECT_NEAR(kl / 0.144564705343708206, 1.0, 1e-3);
  EXPECT_NEAR(r2 / 0.289129410687416413, 1.0, 1e-3);
}

TEST_F(OuDensityTest, ShiftQuadratureNonnegativeAndMonotoneInOrder) {
  for (double v : {-1.0, 0.1, 0.5, 2.0}) {
    double previous = 0.0;
    for (double q : {1.0, 1.5, 2.0, 4.0}) {
      const double r = RenyiShiftQuadrature(*density_, v, RenyiOrder(q));
      EXPECT_GE(r, previous);
      previous = r;
    }
  }
}

TEST_F(OuDensityTest, ShiftOutsideDomainIsRejected) {
  EXPECT_THROW(RenyiShiftQuadrature(*density_, 10.5, RenyiOrder(1.0)),
               std::domain_error);
}

TEST_F(OuDensityTest, AllModesTightForQuadraticPotential) {
  const double beta = 1.0;
  const double t = 1.0;
  const double s2 = -std::expm1(-2.0 * beta * t) / beta;
  for (double v : {0.25, 0.5}) {
    for (double q : {1.0, 2.0, 3.0}) {
      const Check c = VerifySrt(*density_, beta, v, RenyiOrder(q));
      EXPECT_TRUE(c.pass);
      EXPECT_NEAR(c.lhs / c.rhs, 1.0, 1e-3) << "q=" << q << " v=" << v;
    }
    const double p = 2.0;
    const Check sh = VerifyLgeAndHarnack(*density_, beta,
                                         ExponentialTilt(v / ((p - 1.0) * s2)),
                                         FunctionalMode::kShP, p, v);
    EXPECT_TRUE(sh.pass);
    EXPECT_NEAR(sh.lhs - sh.rhs, 0.0, 1e-3);
    const Check lg = VerifyLgeAndHarnack(*density_, beta,
                                         AffineFunction(v / s2, 10.0),
                                         FunctionalMode::kShLog, p, v);
    EXPECT_TRUE(lg.pass);
    EXPECT_NEAR(lg.lhs / lg.rhs, 1.0, 1e-3);
  }
  const Check lge = VerifyLgeAndHarnack(*density_, beta, ExponentialTilt(0.3),
                                        FunctionalMode::kLge, 2.0, 0.0);
  EXPECT_TRUE(lge.pass);
  EXPECT_NEAR(lge.lhs / lge.rhs, 1.0, 1e-3);
}

TEST_F(OuDensityTest, ConstantFunctionMakesLgeVanish) {
  const TestFunction one{[](double) { return 1.0; }, [](double) { return 0.0; },
                         "1"};
  const Check c =
      VerifyLgeAndHarnack(*density_, 1.0, one, FunctionalMode::kLge, 2.0, 0.0);
  EXPECT_EQ(c.lhs, 0.0);
  EXPECT_NEAR(c.rhs, 0.0, 1e-12);
  EXPECT_TRUE(c.pass);
}

TEST_F(OuDensityTest, HarnackOnGaussianBumpAndDualCheck) {
  const double v = 0.4;
  const double p = 2.0;
  const TestFunction bump{
      [](double y) { return 1e-3 + std::exp(-0.5 * (y - 0.3) * (y - 0.3)); },
      [](double y) { return -(y - 0.3) * std::exp(-0.5 * (y - 0.3) * (y - 0.3)); },
      "bump"};
  const Check sh =
      VerifyLgeAndHarnack(*density_, 1.0, bump, FunctionalMode::kShP, p, v);
  EXPECT_TRUE(sh.pass);
  const RenyiOrder q(p / (p - 1.0));
  const Check srt = VerifySrt(*density_, 1.0, v, q);
  EXPECT_TRUE(srt.pass);
  // The SH_p exponent equals p log of the Harnack constant implied by SRT_q.
  const double exponent =
      TheoremConstant(BoundKind::kShP, 1.0, 1.0, p, v).value;
  EXPECT_NEAR(p * std::log(HarnackFromRenyi(q, srt.rhs)), exponent, 1e-12);
}

TEST_F(OuDensityTest, RejectsNonPositiveTestFunction) {
  EXPECT_THROW(VerifyLgeAndHarnack(*density_, 1.0, AffineFunction(1.0, 0.0),
                                   FunctionalMode::kLge, 2.0, 0.0),
               std::invalid_argument);
}

TEST(VerifySrtTest, PerturbedPotentialPasses) {
  const Check c = VerifySrt(PerturbedPotential(), 0.3, 0.5, 1.0, RenyiOrder(2.0));
  EXPECT_TRUE(c.pass) << c.lhs << " vs " << c.rhs;
  EXPECT_LT(c.lhs, c.rhs);
  const Check zero = VerifySrt(PerturbedPotential(), 0.3, 0.0, 1.0, RenyiOrder(2.0));
  EXPECT_EQ(zero.lhs, 0.0);
  EXPECT_TRUE(zero.pass);
}

TEST(VerifyLgeTest, ExponentialTiltHasSlackForPerturbedPotential) {
  const DensityField p = SolveTransitionDensity(PerturbedPotential(), 0.3, 1.0,
                                                DefaultGrid(1.1, 0.3));
  const Check c = VerifyLgeAndHarnack(p, 1.1, ExponentialTilt(0.3),
                                      FunctionalMode::kLge, 2.0, 0.0);
  EXPECT_TRUE(c.pass);
  EXPECT_GT(c.rhs - c.lhs, 0.0);
}

TEST(GridRefinementTest, HalvingSpacingChangesDivergenceLittle) {
  const Potential1D pot = PerturbedPotential();
  const double x0 = 0.2;
  const double t = 0.8;
  const double v = 0.5;
  const DensityField coarse =
      SolveTransitionDensity(pot, x0, t, DefaultGrid(1.1, x0, 2048));
  const DensityField fine =
      SolveTransitionDensity(pot, x0, t, DefaultGrid(1.1, x0, 4095));
  for (double q : {1.0, 2.0}) {
    const double a = RenyiShiftQuadrature(coarse, v, RenyiOrder(q));
    const double b = RenyiShiftQuadrature(fine, v, RenyiOrder(q));
    EXPECT_LT(std::abs(a - b) / b, 4.0 * kQuadratureRelTolerance);
  }
}

TEST(DensityCsvTest, HeaderAndRows) {
  const DensityField p = SolveTransitionDensity(
      Potential1D::Quadratic(1.0), 0.0, 0.5, Grid1D(-10.0, 10.0, 256));
  std::ostringstream out;
  WriteDensityCsv(p, out);
  EXPECT_EQ(out.str().substr(0, 4), "x,p\n");
  EXPECT_EQ(std::ranges::count(out.str(), '\n'), 257);
}

}  // namespace
}  // namespace shiftlab
