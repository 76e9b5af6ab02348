/*
 * Copyright 2026 The hpyparse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace hpyp {

// Objective callback: returns f(x) and writes the gradient into `grad`.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
};

struct LbfgsOptions {
  int max_iterations = 200;
  double relative_tolerance = 1e-7;
  double gradient_tolerance = 1e-10;
  int memory = 8;
};

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  // Objective after every accepted step, starting with the initial point.
  std::vector<double> trace;
};

// Minimizes `f` over a box with projected limited-memory BFGS: the quasi-Newton
// direction is computed over the variables not held at a bound, and a
// backtracking search along the projected path only accepts steps that do not
// increase f. Throws DataError if f is not finite at the start.
LbfgsResult minimize_in_box(const Objective& f, std::vector<double> x0, const Box& box,
                            const LbfgsOptions& options = {});

}  // namespace hpyp
