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

#include "shiftlab/expression.h"

#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

namespace shiftlab {
namespace {

TEST(ExpressionTest, EvaluatesGrammar) {
  EXPECT_DOUBLE_EQ(Expression::Parse("x^2/2")(3.0), 4.5);
  EXPECT_DOUBLE_EQ(Expression::Parse("-x + 2*3")(1.0), 5.0);
  EXPECT_DOUBLE_EQ(Expression::Parse("2^3^2")(0.0), 512.0);
  EXPECT_DOUBLE_EQ(Expression::Parse("-2^2")(0.0), -4.0);
  EXPECT_DOUBLE_EQ(Expression::Parse("(1 + x) * (1 - x)")(0.5), 0.75);
  EXPECT_NEAR(Expression::Parse("sin(pi/2) + cos(0) + exp(1)")(0.0),
              2.0 + std::exp(1.0), 1e-15);
  EXPECT_DOUBLE_EQ(Expression::Parse("1.5e-1 * x")(2.0), 0.3);
  EXPECT_DOUBLE_EQ(Expression::Parse("x^-1")(4.0), 0.25);
  EXPECT_DOUBLE_EQ(Expression::Constant(2.5)(100.0), 2.5);
  EXPECT_FALSE(Expression::Parse("2*pi").DependsOnX());
  EXPECT_TRUE(Expression::Parse("0*x + x").DependsOnX());
}

TEST(ExpressionTest, RejectsMalformedInput) {
  for (const char* bad : {"", "x +", "(x", "x)", "foo(x)", "x^x", "2 3", "sin x",
                          "x ** 2", "1..2"}) {
    EXPECT_THROW(Expression::Parse(bad), std::invalid_argument) << bad;
  }
}

TEST(ExpressionTest, DerivativeMatchesFiniteDifferences) {
  const char* cases[] = {"x^2/2 + 0.1*sin(x)", "exp(-x^2) * cos(3*x)",
                         "x^4/4 - x^2/2", "1/(1 + x^2)", "sin(x)^3",
                         "exp(0.3*x)", "-cos(x)/x", "x^0.5"};
  for (const char* text : cases) {
    const Expression f = Expression::Parse(text);
    const Expression df = f.Derivative();
    const Expression d2f = df.Derivative();
    for (double x : {0.3, 0.9, 1.7, 2.5}) {
      const double h = 1e-5;
      const double fd = (f(x + h) - f(x - h)) / (2 * h);
      const double fd2 = (df(x + h) - df(x - h)) / (2 * h);
      EXPECT_NEAR(df(x), fd, 1e-7 * (1.0 + std::abs(fd))) << text << " at " << x;
      EXPECT_NEAR(d2f(x), fd2, 1e-7 * (1.0 + std::abs(fd2))) << text << " at " << x;
    }
  }
}

TEST(ExpressionTest, ToStringRoundTrips) {
  for (const char* text : {"x^2/2 + 0.1*sin(x)", "-(x - 1)^3", "exp(-x)/(2 + cos(x))"}) {
    const Expression f = Expression::Parse(text);
    const Expression g = Expression::Parse(f.ToString());
    for (double x : {-1.3, 0.0, 0.4, 2.2}) EXPECT_DOUBLE_EQ(f(x), g(x)) << text;
  }
}

}  // namespace
}  // namespace shiftlab
