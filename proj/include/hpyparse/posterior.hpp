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

#include <cstdint>
#include <span>
#include <vector>

#include "hpyparse/hpyp.hpp"
#include "hpyparse/optimizer.hpp"

namespace hpyp {

// log [a]^count_step = sum_{i=0}^{count-1} log(a + i*step); zero for count <= 0.
double log_generalized_factorial(double a, double step, std::int64_t count);

// Seating statistics of one trie depth, as "how many restaurants/tables
// exceed i" counts so the likelihood is linear in the largest count.
struct DepthStats {
  // tables_above[i]: restaurants with more than i tables, for i >= 1.
  std::vector<std::uint64_t> tables_above;
  // customers_above[i]: restaurants with more than i customers.
  std::vector<std::uint64_t> customers_above;
  // table_size_above[j]: tables seating more than j customers.
  std::vector<std::uint64_t> table_size_above;
  std::uint64_t restaurants = 0;
};

struct PosteriorStats {
  std::vector<DepthStats> depths;
  // sum_r n0_r log H(r); independent of the parameters.
  double base_log_likelihood = 0.0;
};

PosteriorStats collect_posterior_stats(const ContextTrie& trie);

// Log prior plus log likelihood of the minimal seating arrangement. The
// gradient, if requested, is laid out as [d0, c0, d1, c1, ...] for the first
// `params.size()` depths. Throws UsageError when a parameter leaves the box
// d in [0,1), c >= 0.
double log_posterior(const PosteriorStats& stats, std::span<const DepthParam> params,
                     std::vector<double>* gradient = nullptr);
double log_posterior(const ContextTrie& trie, std::span<const DepthParam> params);

struct ParamFit {
  std::vector<DepthParam> params;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

inline constexpr double kMaxDiscount = 1.0 - 1e-6;

// MAP discount/concentration per depth, starting from `start` (one entry per
// depth 0..max_depth, hyperpriors taken from it).
ParamFit optimize_params(const ContextTrie& trie, std::vector<DepthParam> start,
                         const LbfgsOptions& options = {});

}  // namespace hpyp
