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

#include <vector>

#include "feller/rng.hpp"
#include "feller/types.hpp"

namespace feller {

/**
 * Standard symmetric alpha-stable variate, characteristic function
 * exp(-|xi|^alpha), by the Chambers-Mallows-Stuck transform. alpha = 2
 * gives N(0, 2).
 */
double stable_variate(double alpha, CounterRng& rng);

/* n i.i.d. standard symmetric alpha-stable variates. */
std::vector<double> sample_stable(double alpha, std::size_t n, CounterRng& rng);

/* Positive (beta)-stable variate with Laplace transform exp(-s^beta), beta in (0, 1) (Kanter). */
double positive_stable_variate(double beta, CounterRng& rng);

/* Isotropic alpha-stable vector in R^d with characteristic function exp(-|xi|^alpha). */
Vector stable_vector(double alpha, int d, CounterRng& rng);

}  // namespace feller
