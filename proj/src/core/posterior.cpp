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

#include "hpyparse/posterior.hpp"

#include <algorithm>
#include <cmath>

#include "hpyparse/error.hpp"

namespace hpyp {

double log_generalized_factorial(double a, double step, std::int64_t count) {
  double total = 0.0;
  for (std::int64_t i = 0; i < count; ++i) total += std::log(a + static_cast<double>(i) * step);
  return total;
}

namespace {

// hist[v] = number of items with value v  ->  above[i] = items with value > i.
std::vector<std::uint64_t> survival(const std::vector<std::uint64_t>& hist) {
  std::vector<std::uint64_t> above(hist.empty() ? 0 : hist.size() - 1, 0);
  std::uint64_t running = 0;
  for (std::size_t v = hist.size(); v-- > 1;) {
    running += hist[v];
    above[v - 1] = running;
  }
  return above;
}

void bump(std::vector<std::uint64_t>& hist, std::uint64_t value) {
  if (hist.size() <= value) hist.resize(value + 1, 0);
  ++hist[value];
}

void check_box(const DepthParam& p) {
  if (!(p.discount >= 0.0 && p.discount < 1.0) || !(p.concentration >= 0.0) ||
      !std::isfinite(p.concentration))
    throw UsageError("parameters violate d in [0,1), c >= 0");
}

double log_prior(const DepthParam& p, double* grad_d, double* grad_c) {
  const Hyperprior& h = p.prior;
  const double d = p.discount, c = p.concentration;
  double v = -(std::lgamma(h.beta_a) + std::lgamma(h.beta_b) - std::lgamma(h.beta_a + h.beta_b));
  if (h.beta_a != 1.0) {
    v += (h.beta_a - 1.0) * std::log(d);
    *grad_d += (h.beta_a - 1.0) / d;
  }
  if (h.beta_b != 1.0) {
    v += (h.beta_b - 1.0) * std::log1p(-d);
    *grad_d -= (h.beta_b - 1.0) / (1.0 - d);
  }
  v += h.gamma_shape * std::log(h.gamma_rate) - std::lgamma(h.gamma_shape) - h.gamma_rate * c;
  *grad_c -= h.gamma_rate;
  if (h.gamma_shape != 1.0) {
    v += (h.gamma_shape - 1.0) * std::log(c);
    *grad_c += (h.gamma_shape - 1.0) / c;
  }
  return v;
}

}  // namespace

PosteriorStats collect_posterior_stats(const ContextTrie& trie) {
  struct Hist {
    std::vector<std::uint64_t> tables, customers, table_sizes;
    std::uint64_t restaurants = 0;
  };
  std::vector<Hist> hists;
  trie.for_each([&](std::span<const ContextElem> path, const Restaurant& r) {
    if (r.customers() == 0) return;
    if (hists.size() <= path.size()) hists.resize(path.size() + 1);
    Hist& h = hists[path.size()];
    ++h.restaurants;
    bump(h.tables, r.tables());
    bump(h.customers, r.customers());
    for (const auto& [rule, tc] : r.dishes())
      if (tc.tables > 0) bump(h.table_sizes, tc.customers);
  });
  PosteriorStats stats;
  for (const Hist& h : hists) {
    stats.depths.push_back({survival(h.tables), survival(h.customers), survival(h.table_sizes),
                            h.restaurants});
  }
  for (const auto& [rule, tc] : trie.root().dishes())
    if (tc.tables > 0) stats.base_log_likelihood += tc.tables * std::log(trie.base().prob(rule));
  return stats;
}

double log_posterior(const PosteriorStats& stats, std::span<const DepthParam> params,
                     std::vector<double>* gradient) {
  if (params.empty()) throw UsageError("no parameters given");
  for (const DepthParam& p : params) check_box(p);
  if (gradient) gradient->assign(2 * params.size(), 0.0);
  std::vector<double> scratch(2 * params.size(), 0.0);
  std::vector<double>& g = gradient ? *gradient : scratch;

  double total = stats.base_log_likelihood;
  for (std::size_t m = 0; m < params.size(); ++m) total += log_prior(params[m], &g[2 * m], &g[2 * m + 1]);

  for (std::size_t m = 0; m < stats.depths.size(); ++m) {
    const std::size_t k = std::min(m, params.size() - 1);
    const double d = params[k].discount, c = params[k].concentration;
    const DepthStats& s = stats.depths[m];
    double& gd = g[2 * k];
    double& gc = g[2 * k + 1];
    // [c]^t_d / [c]^n_1 with the common factor c cancelled, which keeps the
    // ratio finite at c = 0: prod_{i=1}^{t-1}(c + i d) / prod_{i=1}^{n-1}(c + i).
    for (std::size_t i = 1; i < s.tables_above.size(); ++i) {
      const double w = static_cast<double>(s.tables_above[i]);
      const double x = c + static_cast<double>(i) * d;
      total += w * std::log(x);
      gd += w * static_cast<double>(i) / x;
      gc += w / x;
    }
    for (std::size_t i = 1; i < s.customers_above.size(); ++i) {
      const double w = static_cast<double>(s.customers_above[i]);
      const double x = c + static_cast<double>(i);
      total -= w * std::log(x);
      gc -= w / x;
    }
    // prod_k [1 - d]^{n_k - 1}_1 = prod_k prod_{j=1}^{n_k - 1} (j - d)
    for (std::size_t j = 1; j < s.table_size_above.size(); ++j) {
      const double w = static_cast<double>(s.table_size_above[j]);
      const double x = static_cast<double>(j) - d;
      total += w * std::log(x);
      gd -= w / x;
    }
  }
  return total;
}

double log_posterior(const ContextTrie& trie, std::span<const DepthParam> params) {
  return log_posterior(collect_posterior_stats(trie), params);
}

ParamFit optimize_params(const ContextTrie& trie, std::vector<DepthParam> start,
                         const LbfgsOptions& options) {
  if (start.empty()) throw UsageError("no starting parameters");
  const PosteriorStats stats = collect_posterior_stats(trie);
  const std::size_t n = start.size();

  std::vector<double> x0(2 * n);
  Box box{std::vector<double>(2 * n, 0.0), std::vector<double>(2 * n)};
  for (std::size_t m = 0; m < n; ++m) {
    x0[2 * m] = std::clamp(start[m].discount, 0.0, kMaxDiscount);
    x0[2 * m + 1] = std::max(start[m].concentration, 0.0);
    box.upper[2 * m] = kMaxDiscount;
    box.upper[2 * m + 1] = std::numeric_limits<double>::infinity();
  }

  std::vector<DepthParam> work = start;
  auto unpack = [&](std::span<const double> x) {
    for (std::size_t m = 0; m < n; ++m) {
      work[m].discount = x[2 * m];
      work[m].concentration = x[2 * m + 1];
    }
  };
  std::vector<double> grad;
  const Objective negated = [&](std::span<const double> x, std::span<double> out) {
    unpack(x);
    const double v = log_posterior(stats, work, &grad);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -grad[i];
    return -v;
  };

  LbfgsResult res = minimize_in_box(negated, std::move(x0), box, options);
  unpack(res.x);
  ParamFit fit;
  fit.params = work;
  fit.objective = -res.value;
  fit.iterations = res.iterations;
  fit.converged = res.converged;
  for (double v : res.trace) fit.trace.push_back(-v);
  return fit;
}

}  // namespace hpyp
