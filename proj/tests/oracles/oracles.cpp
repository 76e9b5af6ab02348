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

#include "oracles.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

struct Enumerator {
  const Grammar& g;
  std::span<const SymbolId> s;
  std::size_t limit;

  std::vector<Tree> trees(SymbolId a, std::size_t i, std::size_t j, bool allow_unary) {
    std::vector<Tree> out;
    for (RuleId r = 0; r < g.num_rules(); ++r) {
      const Rule& rule = g.rule(r);
      if (rule.lhs != a) continue;
      if (rule.shape == hpyp::RuleShape::Lexical) {
        if (j == i + 1 && s[i] == rule.rhs[0]) out.push_back(Tree::node(a, {Tree::leaf(s[i])}));
      } else if (rule.shape == hpyp::RuleShape::Unary) {
        if (!allow_unary) continue;
        for (Tree& c : trees(rule.rhs[0], i, j, false)) out.push_back(Tree::node(a, {std::move(c)}));
      } else {
        for (std::size_t k = i + 1; k < j; ++k) {
          const auto left = trees(rule.rhs[0], i, k, true);
          if (left.empty()) continue;
          const auto right = trees(rule.rhs[1], k, j, true);
          for (const Tree& l : left)
            for (const Tree& rt : right) {
              out.push_back(Tree::node(a, {l, rt}));
              if (out.size() > limit) return out;
            }
        }
      }
      if (out.size() > limit) return out;
    }
    return out;
  }
};

}  // namespace

std::vector<Tree> enumerate_trees(const Grammar& g, std::span<const SymbolId> sentence, std::size_t limit) {
  if (sentence.empty()) return {};
  Enumerator e{g, sentence, limit};
  auto out = e.trees(g.root(), 0, sentence.size(), true);
  for (Tree& t : out) hpyp::assign_spans(t);
  return out;
}

double tree_log_prob(const Tree& t, const Grammar& g, const hpyp::ProbTable& pcfg) {
  double total = 0.0;
  std::vector<const Tree*> stack{&t};
  while (!stack.empty()) {
    const Tree* n = stack.back();
    stack.pop_back();
    if (n->terminal) continue;
    Rule r;
    r.lhs = n->label;
    if (n->children.size() == 2) {
      r = Rule::binary(n->label, n->children[0].label, n->children[1].label);
    } else if (n->children[0].terminal) {
      r = Rule::lexical(n->label, n->children[0].label);
    } else {
      r = Rule::unary(n->label, n->children[0].label);
    }
    const auto id = g.find_rule(r);
    if (!id) return -INFINITY;
    total += std::log(pcfg.prob(*id));
    for (const Tree& c : n->children) stack.push_back(&c);
  }
  return total;
}

KneserNey::KneserNey(std::vector<double> base, std::vector<double> discounts)
    : base_(std::move(base)), discounts_(std::move(discounts)) {}

void KneserNey::observe(const Context& u, RuleId r) {
  events_.emplace_back(u, r);
  built_ = false;
}

double KneserNey::discount(std::size_t depth) const {
  return discounts_[std::min(depth, discounts_.size() - 1)];
}

void KneserNey::build() const {
  counts_.clear();
  std::size_t longest = 0;
  for (const auto& [u, r] : events_) {
    ++counts_[u][r];
    longest = std::max(longest, u.size());
  }
  // Continuation counts, longest contexts first so each level is complete
  // before its suffixes read it.
  for (std::size_t len = longest; len >= 1; --len) {
    std::map<Context, std::map<RuleId, std::uint64_t>> extra;
    for (const auto& [u, dishes] : counts_) {
      if (u.size() != len) continue;
      const Context shorter(u.begin() + 1, u.end());
      for (const auto& [r, c] : dishes)
        if (c > 0) ++extra[shorter][r];
    }
    for (const auto& [u, dishes] : extra)
      for (const auto& [r, c] : dishes) counts_[u][r] += c;
  }
  built_ = true;
}

double KneserNey::prob(const Context& u, RuleId r) const {
  if (!built_) build();
  // Walk from the empty context outward.
  double p = base_.at(r);
  for (std::size_t len = 0; len <= u.size(); ++len) {
    const Context v(u.end() - static_cast<std::ptrdiff_t>(len), u.end());
    const auto it = counts_.find(v);
    if (it == counts_.end()) continue;
    double total = 0.0;
    double types = 0.0;
    double mine = 0.0;
    for (const auto& [dish, c] : it->second) {
      total += static_cast<double>(c);
      types += 1.0;
      if (dish == r) mine = static_cast<double>(c);
    }
    if (total == 0.0) continue;
    const double d = discount(len);
    p = std::max(mine - d, 0.0) / total + d * types / total * p;
  }
  return p;
}

void SeatingSimulator::seat(const Context& u, RuleId r) {
  Context ctx = u;
  while (true) {
    auto& dish_tables = tables_[ctx][r];
    if (!dish_tables.empty()) {
      ++dish_tables.front();
      return;
    }
    dish_tables.push_back(1);
    if (ctx.empty()) return;
    ctx.erase(ctx.begin());
  }
}

std::map<SeatingSimulator::Context, std::map<RuleId, SeatingSimulator::Counts>> SeatingSimulator::counts() const {
  std::map<Context, std::map<RuleId, Counts>> out;
  for (const auto& [u, dishes] : tables_) {
    for (const auto& [r, tables] : dishes) {
      Counts c;
      c.tables = tables.size();
      for (auto n : tables) c.customers += n;
      out[u][r] = c;
    }
  }
  return out;
}

double derivative(const std::function<double(double)>& f, double x, double h) {
  const auto central = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
  return (4.0 * central(h / 2.0) - central(h)) / 3.0;
}

double chi_square_p_value(double statistic, double dof) {
  const boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("distributions differ in size");
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return tv / 2.0;
}

}  // namespace oracle
