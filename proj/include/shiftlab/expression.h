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

// Tiny arithmetic language for one-variable potentials and test functions.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?        exponent must not contain x
//   primary := number | 'x' | 'pi' | func '(' expr ')' | '(' expr ')'
//   func    := 'sin' | 'cos' | 'exp'
//
// Derivatives are symbolic, with light constant folding.

#ifndef SHIFTLAB_EXPRESSION_H_
#define SHIFTLAB_EXPRESSION_H_

#include <memory>
#include <string>

namespace shiftlab {

class Expression {
 public:
  struct Node;

  // Throws std::invalid_argument with the offending position on bad input.
  static Expression Parse(const std::string& text);
  static Expression Constant(double value);

  double operator()(double x) const;
  Expression Derivative() const;
  bool DependsOnX() const;
  std::string ToString() const;

 private:
  explicit Expression(std::shared_ptr<const Node> root)
      : root_(std::move(root)) {}

  std::shared_ptr<const Node> root_;
};

}  // namespace shiftlab

#endif  // SHIFTLAB_EXPRESSION_H_
