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

#include "hpyparse/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "hpyparse/error.hpp"

namespace hpyp {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

struct Pair {
  std::vector<double> s, y;
  double rho;
};

}  // namespace

LbfgsResult minimize_in_box(const Objective& f, std::vector<double> x0, const Box& box,
                            const LbfgsOptions& options) {
  const std::size_t n = x0.size();
  auto project = [&](std::vector<double>& x) {
    for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], box.lower[i], box.upper[i]);
  };

  LbfgsResult res;
  std::vector<double> x = std::move(x0);
  project(x);
  std::vector<double> g(n), gn(n), dir(n), xn(n), q(n);
  double fx = f(x, g);
  if (!std::isfinite(fx)) throw DataError("optimizer: objective is not finite at the start point");
  res.trace.push_back(fx);

  std::deque<Pair> memory;
  std::vector<char> active(n);
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    res.iterations = iter;
    // Variables pinned at a bound with the gradient pushing outward stay put.
    double pg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      active[i] = (x[i] <= box.lower[i] && g[i] > 0) || (x[i] >= box.upper[i] && g[i] < 0);
      if (!active[i]) pg = std::max(pg, std::abs(g[i]));
    }
    if (pg < options.gradient_tolerance) {
      res.converged = true;
      break;
    }

    // Two-loop recursion restricted to free variables.
    for (std::size_t i = 0; i < n; ++i) q[i] = active[i] ? 0.0 : g[i];
    std::vector<double> alpha(memory.size());
    for (std::size_t k = memory.size(); k-- > 0;) {
      alpha[k] = memory[k].rho * dot(memory[k].s, q);
      for (std::size_t i = 0; i < n; ++i) q[i] -= alpha[k] * memory[k].y[i];
    }
    double gamma = 1.0;
    if (!memory.empty()) gamma = dot(memory.back().s, memory.back().y) / dot(memory.back().y, memory.back().y);
    for (std::size_t i = 0; i < n; ++i) q[i] *= gamma;
    for (std::size_t k = 0; k < memory.size(); ++k) {
      const double beta = memory[k].rho * dot(memory[k].y, q);
      for (std::size_t i = 0; i < n; ++i) q[i] += (alpha[k] - beta) * memory[k].s[i];
    }
    for (std::size_t i = 0; i < n; ++i) dir[i] = active[i] ? 0.0 : -q[i];

    double slope = dot(g, dir);
    bool steepest = memory.empty();
    if (!(slope < 0.0)) {
      memory.clear();
      steepest = true;
      for (std::size_t i = 0; i < n; ++i) dir[i] = active[i] ? 0.0 : -g[i];
    }
    double step = 1.0;
    if (steepest) {
      double dmax = 0.0;
      for (double v : dir) dmax = std::max(dmax, std::abs(v));
      if (dmax > 0) step = std::min(1.0, 1.0 / dmax);
    }

    bool accepted = false;
    double fn = fx;
    for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + step * dir[i];
      project(xn);
      double moved = 0.0, gstep = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        moved = std::max(moved, std::abs(xn[i] - x[i]));
        gstep += g[i] * (xn[i] - x[i]);
      }
      if (moved == 0.0) break;
      fn = f(xn, gn);
      if (std::isfinite(fn) && fn <= fx + 1e-4 * std::min(0.0, gstep)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.converged = true;
      break;
    }

    Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      p.s[i] = xn[i] - x[i];
      p.y[i] = gn[i] - g[i];
    }
    const double sy = dot(p.s, p.y);
    if (sy > 1e-12 * std::sqrt(dot(p.s, p.s) * dot(p.y, p.y))) {
      p.rho = 1.0 / sy;
      memory.push_back(std::move(p));
      if (memory.size() > static_cast<std::size_t>(options.memory)) memory.pop_front();
    }

    const double change = std::abs(fx - fn) / std::max(1.0, std::abs(fx));
    x.swap(xn);
    g.swap(gn);
    fx = fn;
    res.trace.push_back(fx);
    if (change < options.relative_tolerance) {
      res.converged = true;
      break;
    }
  }
  res.x = std::move(x);
  res.value = fx;
  return res;
}

}  // namespace hpyp
