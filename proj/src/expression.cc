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

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>

#include "shiftlab/report.h"

namespace shiftlab {

enum class Op { kConst, kX, kAdd, kSub, kMul, kDiv, kPow, kNeg, kSin, kCos, kExp };

struct Expression::Node {
  Op op;
  double value = 0.0;
  std::shared_ptr<const Node> left;
  std::shared_ptr<const Node> right;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr Make(Op op, NodePtr left = nullptr, NodePtr right = nullptr,
             double value = 0.0) {
  auto node = std::make_shared<Expression::Node>();
  node->op = op;
  node->value = value;
  node->left = std::move(left);
  node->right = std::move(right);
  return node;
}

NodePtr Const(double v) { return Make(Op::kConst, nullptr, nullptr, v); }

bool IsConst(const NodePtr& n, double v) {
  return n->op == Op::kConst && n->value == v;
}

bool HasX(const NodePtr& n) {
  if (!n) return false;
  if (n->op == Op::kX) return true;
  return HasX(n->left) || HasX(n->right);
}

double Eval(const NodePtr& n, double x) {
  switch (n->op) {
    case Op::kConst:
      return n->value;
    case Op::kX:
      return x;
    case Op::kAdd:
      return Eval(n->left, x) + Eval(n->right, x);
    case Op::kSub:
      return Eval(n->left, x) - Eval(n->right, x);
    case Op::kMul:
      return Eval(n->left, x) * Eval(n->right, x);
    case Op::kDiv:
      return Eval(n->left, x) / Eval(n->right, x);
    case Op::kPow:
      return std::pow(Eval(n->left, x), Eval(n->right, x));
    case Op::kNeg:
      return -Eval(n->left, x);
    case Op::kSin:
      return std::sin(Eval(n->left, x));
    case Op::kCos:
      return std::cos(Eval(n->left, x));
    case Op::kExp:
      return std::exp(Eval(n->left, x));
  }
  return 0.0;
}

// Constructors that fold constants and drop neutral elements.
NodePtr Add(NodePtr a, NodePtr b) {
  if (IsConst(a, 0.0)) return b;
  if (IsConst(b, 0.0)) return a;
  if (a->op == Op::kConst && b->op == Op::kConst) return Const(a->value + b->value);
  return Make(Op::kAdd, a, b);
}

NodePtr Neg(NodePtr a) {
  if (a->op == Op::kConst) return Const(-a->value);
  return Make(Op::kNeg, a);
}

NodePtr Sub(NodePtr a, NodePtr b) {
  if (IsConst(b, 0.0)) return a;
  if (IsConst(a, 0.0)) return Neg(b);
  if (a->op == Op::kConst && b->op == Op::kConst) return Const(a->value - b->value);
  return Make(Op::kSub, a, b);
}

NodePtr Mul(NodePtr a, NodePtr b) {
  if (IsConst(a, 0.0) || IsConst(b, 0.0)) return Const(0.0);
  if (IsConst(a, 1.0)) return b;
  if (IsConst(b, 1.0)) return a;
  if (a->op == Op::kConst && b->op == Op::kConst) return Const(a->value * b->value);
  return Make(Op::kMul, a, b);
}

NodePtr Div(NodePtr a, NodePtr b) {
  if (IsConst(a, 0.0)) return Const(0.0);
  if (IsConst(b, 1.0)) return a;
  if (a->op == Op::kConst && b->op == Op::kConst) return Const(a->value / b->value);
  return Make(Op::kDiv, a, b);
}

NodePtr Pow(NodePtr a, NodePtr b) {
  if (IsConst(b, 1.0)) return a;
  if (IsConst(b, 0.0)) return Const(1.0);
  if (a->op == Op::kConst && b->op == Op::kConst) {
    return Const(std::pow(a->value, b->value));
  }
  return Make(Op::kPow, a, b);
}

NodePtr Differentiate(const NodePtr& n) {
  switch (n->op) {
    case Op::kConst:
      return Const(0.0);
    case Op::kX:
      return Const(1.0);
    case Op::kAdd:
      return Add(Differentiate(n->left), Differentiate(n->right));
    case Op::kSub:
      return Sub(Differentiate(n->left), Differentiate(n->right));
    case Op::kMul:
      return Add(Mul(Differentiate(n->left), n->right),
                 Mul(n->left, Differentiate(n->right)));
    case Op::kDiv:
      return Div(Sub(Mul(Differentiate(n->left), n->right),
                     Mul(n->left, Differentiate(n->right))),
                 Mul(n->right, n->right));
    case Op::kPow: {
      // The exponent is constant by construction.
      const NodePtr c = n->right;
      return Mul(Mul(c, Pow(n->left, Sub(c, Const(1.0)))),
                 Differentiate(n->left));
    }
    case Op::kNeg:
      return Neg(Differentiate(n->left));
    case Op::kSin:
      return Mul(Make(Op::kCos, n->left), Differentiate(n->left));
    case Op::kCos:
      return Neg(Mul(Make(Op::kSin, n->left), Differentiate(n->left)));
    case Op::kExp:
      return Mul(n, Differentiate(n->left));
  }
  return Const(0.0);
}

std::string Print(const NodePtr& n) {
  switch (n->op) {
    case Op::kConst:
      return n->value < 0 ? "(" + FormatDouble(n->value) + ")"
                          : FormatDouble(n->value);
    case Op::kX:
      return "x";
    case Op::kAdd:
      return "(" + Print(n->left) + " + " + Print(n->right) + ")";
    case Op::kSub:
      return "(" + Print(n->left) + " - " + Print(n->right) + ")";
    case Op::kMul:
      return "(" + Print(n->left) + " * " + Print(n->right) + ")";
    case Op::kDiv:
      return "(" + Print(n->left) + " / " + Print(n->right) + ")";
    case Op::kPow:
      return "(" + Print(n->left) + " ^ " + Print(n->right) + ")";
    case Op::kNeg:
      return "(-" + Print(n->left) + ")";
    case Op::kSin:
      return "sin(" + Print(n->left) + ")";
    case Op::kCos:
      return "cos(" + Print(n->left) + ")";
    case Op::kExp:
      return "exp(" + Print(n->left) + ")";
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr Parse() {
    NodePtr root = ParseExpr();
    SkipSpace();
    if (pos_ != text_.size()) Fail("unexpected character");
    return root;
  }

 private:
  [[noreturn]] void Fail(const std::string& what) const {
    throw std::invalid_argument("expression '" + text_ + "': " + what +
                                " at position " + std::to_string(pos_));
  }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool Accept(char c) {
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void Expect(char c) {
    if (!Accept(c)) Fail(std::string("expected '") + c + "'");
  }

  NodePtr ParseExpr() {
    NodePtr left = ParseTerm();
    while (true) {
      if (Accept('+')) {
        left = Make(Op::kAdd, left, ParseTerm());
      } else if (Accept('-')) {
        left = Make(Op::kSub, left, ParseTerm());
      } else {
        return left;
      }
    }
  }

  NodePtr ParseTerm() {
    NodePtr left = ParseUnary();
    while (true) {
      if (Accept('*')) {
        left = Make(Op::kMul, left, ParseUnary());
      } else if (Accept('/')) {
        left = Make(Op::kDiv, left, ParseUnary());
      } else {
        return left;
      }
    }
  }

  NodePtr ParseUnary() {
    if (Accept('-')) return Make(Op::kNeg, ParseUnary());
    if (Accept('+')) return ParseUnary();
    return ParsePower();
  }

  NodePtr ParsePower() {
    NodePtr base = ParsePrimary();
    if (Accept('^')) {
      const size_t at = pos_;
      NodePtr exponent = ParseUnary();
      if (HasX(exponent)) {
        pos_ = at;
        Fail("exponent must be constant");
      }
      return Make(Op::kPow, base, Const(Eval(exponent, 0.0)));
    }
    return base;
  }

  NodePtr ParsePrimary() {
    SkipSpace();
    if (pos_ >= text_.size()) Fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) Fail("bad number");
      pos_ += static_cast<size_t>(end - begin);
      return Const(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "x") return Make(Op::kX);
      if (name == "pi") return Const(M_PI);
      Op op;
      if (name == "sin") {
        op = Op::kSin;
      } else if (name == "cos") {
        op = Op::kCos;
      } else if (name == "exp") {
        op = Op::kExp;
      } else {
        pos_ = start;
        Fail("unknown identifier '" + name + "'");
      }
      Expect('(');
      NodePtr arg = ParseExpr();
      Expect(')');
      return Make(op, arg);
    }
    if (Accept('(')) {
      NodePtr inner = ParseExpr();
      Expect(')');
      return inner;
    }
    Fail("unexpected character");
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

Expression Expression::Parse(const std::string& text) {
  return Expression(Parser(text).Parse());
}

Expression Expression::Constant(double value) { return Expression(Const(value)); }

double Expression::operator()(double x) const { return Eval(root_, x); }

Expression Expression::Derivative() const {
  return Expression(Differentiate(root_));
}

bool Expression::DependsOnX() const { return HasX(root_); }

std::string Expression::ToString() const { return Print(root_); }

}  // namespace shiftlab
