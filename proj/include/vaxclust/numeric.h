/*
 * Copyright 2026 The vaxclust Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VAXCLUST_NUMERIC_H_
#define VAXCLUST_NUMERIC_H_

#include <vector>

namespace vaxclust {

// Mean computed as x0 + sum(x_i - x0) / n, so identical inputs give back
// exactly x0. Returns 0 for an empty input.
double StableMean(const std::vector<double>& values);

// Mean of the values summed in ascending order: bit-identical under any
// permutation of the input.
double OrderInvariantMean(std::vector<double> values);

}  // namespace vaxclust

#endif  // VAXCLUST_NUMERIC_H_
