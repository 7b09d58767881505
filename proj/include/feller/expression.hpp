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

#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace feller {

/**
 * A compiled scalar expression over named variables.
 *
 * Vocabulary: numbers, the constants `pi` and `e`, the operators + - * / ^,
 * unary minus, parentheses, and the functions sin, cos, exp, log, abs, sqrt
 * (one argument), min, max, pow (two arguments). Variables are bound by
 * position at compile time, so evaluation is a pure walk over an immutable
 * tree and may run concurrently from many threads.
 */
class Expression {
public:
  Expression() = default;

  /* Throws ConfigError with the offending position on a syntax error or unknown name. */
  static Expression compile(const std::string& source, const std::vector<std::string>& variables);

  double operator()(std::span<const double> values) const;

  double operator()(std::initializer_list<double> values) const {
    return (*this)(std::span<const double>(values.begin(), values.size()));
  }

  const std::string& source() const { return source_; }
  bool valid() const { return static_cast<bool>(nodes_); }

  /* True when the expression never reads the variable at `index`. */
  bool independent_of(std::size_t index) const;

  struct Node;

private:
  std::string source_;
  std::size_t arity_ = 0;
  std::shared_ptr<const std::vector<Node>> nodes_;
  int root_ = -1;
};

}  // namespace feller
