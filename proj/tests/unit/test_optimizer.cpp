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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "hpyparse/error.hpp"
#include "hpyparse/optimizer.hpp"

using namespace hpyp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rosenbrock(std::span<const double> x, std::span<double> g) {
  const double a = 1 - x[0], b = x[1] - x[0] * x[0];
  g[0] = -2 * a - 400 * x[0] * b;
  g[1] = 200 * b;
  return a * a + 100 * b * b;
}

}  // namespace

TEST_CASE("unconstrained minimum of a quadratic") {
  const Objective f = [](std::span<const double> x, std::span<double> g) {
    g[0] = 2 * (x[0] - 3);
    g[1] = 8 * (x[1] + 1);
    return (x[0] - 3) * (x[0] - 3) + 4 * (x[1] + 1) * (x[1] + 1);
  };
  const auto res = minimize_in_box(f, {0.0, 0.0}, {{-kInf, -kInf}, {kInf, kInf}});
  CHECK(res.converged);
  CHECK(res.x[0] == doctest::Approx(3.0).epsilon(1e-5));
  CHECK(res.x[1] == doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("active bounds hold the solution on the boundary") {
  const Objective f = [](std::span<const double> x, std::span<double> g) {
    g[0] = 2 * (x[0] - 3);
    g[1] = 2 * (x[1] + 1);
    return (x[0] - 3) * (x[0] - 3) + (x[1] + 1) * (x[1] + 1);
  };
  const auto res = minimize_in_box(f, {0.5, 0.5}, {{0.0, 0.0}, {1.0, 1.0}});
  CHECK(res.x[0] == doctest::Approx(1.0));
  CHECK(res.x[1] == doctest::Approx(0.0));
}

TEST_CASE("Rosenbrock with a monotone trace") {
  const auto res = minimize_in_box(rosenbrock, {-1.2, 1.0}, {{-5, -5}, {5, 5}}, {1000, 1e-14, 1e-10, 8});
  CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(res.x[1] == doctest::Approx(1.0).epsilon(1e-3));
  REQUIRE(res.trace.size() >= 2);
  for (std::size_t i = 1; i < res.trace.size(); ++i) CHECK(res.trace[i] <= res.trace[i - 1]);
  CHECK(res.value == res.trace.back());
}

TEST_CASE("starting points outside the box are projected") {
  const Objective f = [](std::span<const double> x, std::span<double> g) {
    g[0] = 2 * x[0];
    return x[0] * x[0];
  };
  const auto res = minimize_in_box(f, {10.0}, {{2.0}, {4.0}});
  CHECK(res.x[0] == doctest::Approx(2.0));
}

TEST_CASE("a non-finite starting value is a data error") {
  const Objective f = [](std::span<const double> x, std::span<double> g) {
    g[0] = 0;
    return std::log(x[0]);
  };
  CHECK_THROWS_AS(minimize_in_box(f, {-1.0}, {{-kInf}, {kInf}}), DataError);
}
