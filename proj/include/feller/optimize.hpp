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

#include <functional>

#include "feller/types.hpp"

namespace feller {

/* Golden-section minimisation of g on [a, b]. Returns the argmin and stores the minimum in `best`. */
double golden_section(const std::function<double(double)>& g, double a, double b, double& best);

/**
 * Cyclic coordinate golden-section descent from `start`: each round searches
 * every coordinate within +-step(i) of the incumbent, clipped to [lower, upper].
 * Returns the smallest value found (never worse than start_value).
 */
double coordinate_refine(const std::function<double(const Vector&)>& objective, Vector start, double start_value,
                         const Vector& step, const Vector& lower, const Vector& upper, int rounds,
                         Vector* argmin = nullptr);

}  // namespace feller
