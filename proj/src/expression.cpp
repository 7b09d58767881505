/*
 * Copyright (C) 2026 The feller-toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "feller/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>

#include "feller/types.hpp"

namespace feller {

enum class Op { constant, variable, add, sub, mul, div, pow, neg, sin, cos, exp, log, abs, sqrt, min, max };

struct Expression::Node {
  Op op;
  double value = 0.0;
  int var = -1;
  int lhs = -1;
  int rhs = -1;
};

namespace {

class Parser {
public:
  Parser(const std::string& src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  int parse(std::vector<Expression::Node>& out) {
    nodes_ = &out;
    int root = expr();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return root;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("expression '" + src_ + "': " + msg + " at position " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int emit(Expression::Node n) {
    nodes_->push_back(n);
    return static_cast<int>(nodes_->size()) - 1;
  }

  int expr() {
    int lhs = term();
    for (;;) {
      if (accept('+')) lhs = emit({Op::add, 0.0, -1, lhs, term()});
      else if (accept('-')) lhs = emit({Op::sub, 0.0, -1, lhs, term()});
      else return lhs;
    }
  }

  int term() {
    int lhs = unary();
    for (;;) {
      if (accept('*')) lhs = emit({Op::mul, 0.0, -1, lhs, unary()});
      else if (accept('/')) lhs = emit({Op::div, 0.0, -1, lhs, unary()});
      else return lhs;
    }
  }

  int unary() {
    if (accept('-')) return emit({Op::neg, 0.0, -1, unary(), -1});
    if (accept('+')) return unary();
    return power();
  }

  int power() {
    int base = primary();
    if (accept('^')) return emit({Op::pow, 0.0, -1, base, unary()});
    return base;
  }

  int primary() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (accept('(')) {
      int inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return emit({Op::constant, v, -1, -1, -1});
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      std::string name = src_.substr(start, pos_ - start);
      skip_space();
      if (pos_ < src_.size() && src_[pos_] == '(') return call(name);
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return emit({Op::variable, 0.0, static_cast<int>(i), -1, -1});
      if (name == "pi") return emit({Op::constant, kPi, -1, -1, -1});
      if (name == "e") return emit({Op::constant, std::exp(1.0), -1, -1, -1});
      fail("unknown name '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  int call(const std::string& name) {
    accept('(');
    static const std::pair<const char*, Op> unary_fns[] = {
        {"sin", Op::sin}, {"cos", Op::cos}, {"exp", Op::exp},
        {"log", Op::log}, {"abs", Op::abs}, {"sqrt", Op::sqrt}};
    static const std::pair<const char*, Op> binary_fns[] = {
        {"min", Op::min}, {"max", Op::max}, {"pow", Op::pow}};
    for (auto [fn, op] : unary_fns) {
      if (name == fn) {
        int arg = expr();
        if (!accept(')')) fail("expected ')' after argument of " + name);
        return emit({op, 0.0, -1, arg, -1});
      }
    }
    for (auto [fn, op] : binary_fns) {
      if (name == fn) {
        int a = expr();
        if (!accept(',')) fail(name + " takes two arguments");
        int b = expr();
        if (!accept(')')) fail("expected ')' after arguments of " + name);
        return emit({op, 0.0, -1, a, b});
      }
    }
    fail("unknown function '" + name + "'");
  }

  const std::string& src_;
  const std::vector<std::string>& vars_;
  std::vector<Expression::Node>* nodes_ = nullptr;
  std::size_t pos_ = 0;
};

double eval_node(const std::vector<Expression::Node>& nodes, int i, std::span<const double> v) {
  const auto& n = nodes[static_cast<std::size_t>(i)];
  auto L = [&] { return eval_node(nodes, n.lhs, v); };
  auto R = [&] { return eval_node(nodes, n.rhs, v); };
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable: return v[static_cast<std::size_t>(n.var)];
    case Op::add: return L() + R();
    case Op::sub: return L() - R();
    case Op::mul: return L() * R();
    case Op::div: return L() / R();
    case Op::pow: return std::pow(L(), R());
    case Op::neg: return -L();
    case Op::sin: return std::sin(L());
    case Op::cos: return std::cos(L());
    case Op::exp: return std::exp(L());
    case Op::log: return std::log(L());
    case Op::abs: return std::abs(L());
    case Op::sqrt: return std::sqrt(L());
    case Op::min: return std::min(L(), R());
    case Op::max: return std::max(L(), R());
  }
  return 0.0;
}

}  // namespace

Expression Expression::compile(const std::string& source, const std::vector<std::string>& variables) {
  auto nodes = std::make_shared<std::vector<Node>>();
  Parser parser(source, variables);
  Expression e;
  e.root_ = parser.parse(*nodes);
  e.source_ = source;
  e.arity_ = variables.size();
  e.nodes_ = std::move(nodes);
  return e;
}

double Expression::operator()(std::span<const double> values) const {
  if (!nodes_) throw PreconditionError("evaluating an empty expression");
  if (values.size() < arity_)
    throw PreconditionError("expression '" + source_ + "' expects " + std::to_string(arity_) + " values");
  return eval_node(*nodes_, root_, values);
}

bool Expression::independent_of(std::size_t index) const {
  if (!nodes_) return true;
  for (const auto& n : *nodes_)
    if (n.op == Op::variable && static_cast<std::size_t>(n.var) == index) return false;
  return true;
}

}  // namespace feller
