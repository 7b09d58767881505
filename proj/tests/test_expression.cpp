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
#include <cmath>

#include "doctest.h"
#include "feller/expression.hpp"
#include "feller/types.hpp"

using feller::Expression;

TEST_CASE("expression arithmetic and precedence") {
  const Expression e = Expression::compile("1 + 2 * 3 ^ 2 - -4 / 2", {});
  CHECK(e({}) == doctest::Approx(21.0));
  CHECK(Expression::compile("2 ^ 3 ^ 2", {})({}) == doctest::Approx(512.0));
  CHECK(Expression::compile("-2 ^ 2", {})({}) == doctest::Approx(-4.0));
}

TEST_CASE("expression functions and constants") {
  const Expression e = Expression::compile("sin(x) + cos(x) ^ 2 + exp(y) - log(e) + abs(-pi) + sqrt(4)", {"x", "y"});
  const double x = 0.3, y = -0.7;
  CHECK(e({x, y}) == doctest::Approx(std::sin(x) + std::cos(x) * std::cos(x) + std::exp(y) - 1.0 + feller::kPi + 2.0));
  const Expression m = Expression::compile("min(a, b) + max(a, b) + pow(a, b)", {"a", "b"});
  CHECK(m({2.0, 3.0}) == doctest::Approx(2.0 + 3.0 + 8.0));
}

TEST_CASE("expression variable dependence") {
  const Expression e = Expression::compile("1.5 + 0.3 * sin(x1)", {"x1", "x2"});
  CHECK_FALSE(e.independent_of(0));
  CHECK(e.independent_of(1));
  CHECK(e.source() == "1.5 + 0.3 * sin(x1)");
}

TEST_CASE("expression errors") {
  CHECK_THROWS_AS(Expression::compile("1 +", {}), feller::ConfigError);
  CHECK_THROWS_AS(Expression::compile("foo(1)", {}), feller::ConfigError);
  CHECK_THROWS_AS(Expression::compile("z + 1", {"x"}), feller::ConfigError);
  CHECK_THROWS_AS(Expression::compile("(1 + 2", {}), feller::ConfigError);
  const Expression e = Expression::compile("x", {"x"});
  CHECK_THROWS_AS(Expression::compile("x + y", {"x", "y"})({1.0}), feller::PreconditionError);
  CHECK(e({1.0, 2.0}) == 1.0);
  CHECK_THROWS_AS(Expression()({}), feller::PreconditionError);
}
