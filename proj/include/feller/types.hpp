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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace feller {

template <typename Scalar> using VectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar> using MatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorT<double>;
using Matrix = MatrixT<double>;
using Complex = std::complex<double>;

/* Invalid configuration or model declaration (CLI exit code 2). */
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/* Argument outside the mathematical domain of an operation. */
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/* Input violates a documented precondition (mismatched grids, complex base symbol, ...). */
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/* Numerical procedure failed to reach its tolerance (CLI exit code 3). */
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

private:
  double achieved_error_;
};

inline constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace feller
