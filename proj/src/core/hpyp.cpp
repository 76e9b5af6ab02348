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

#include "hpyparse/hpyp.hpp"

#include <algorithm>
#include <numeric>

#include "hpyparse/error.hpp"

namespace hpyp {

BaseDistribution::BaseDistribution(BaseVariant variant, std::vector<double> probs,
                                   std::vector<std::uint32_t> groups)
    : variant_(variant), probs_(std::move(probs)), groups_(std::move(groups)) {
  if (probs_.size() != groups_.size())
    throw DataError("base distribution: probability and group vectors differ in size");
  std::uint32_t num_groups = 0;
  for (auto g : groups_) num_groups = std::max(num_groups, g + 1);
  group_mass_.assign(num_groups, 0.0);
  for (std::size_t r = 0; r < probs_.size(); ++r) group_mass_[groups_[r]] += probs_[r];
}

BaseDistribution BaseDistribution::uniform(std::vector<std::uint32_t> groups) {
  const std::size_t n = groups.size();
  return BaseDistribution(BaseVariant::Uniform,
                          std::vector<double>(n, n ? 1.0 / static_cast<double>(n) : 0.0),
                          std::move(groups));
}

BaseDistribution BaseDistribution::from_counts(std::span<const std::uint64_t> counts,
                                               std::vector<std::uint32_t> groups) {
  const double total =
      static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  if (total <= 0) throw DataError("base distribution: no rule counts");
  std::vector<double> probs(counts.size());
  for (std::size_t r = 0; r < counts.size(); ++r)
    probs[r] = static_cast<double>(counts[r]) / total;
  return BaseDistribution(BaseVariant::MlePcfg, std::move(probs), std::move(groups));
}

TableCount Restaurant::dish(RuleId r) const {
  auto it = dishes_.find(r);
  return it == dishes_.end() ? TableCount{} : it->second;
}

TableCount Restaurant::group(std::uint32_t g) const {
  auto it = groups_.find(g);
  return it == groups_.end() ? TableCount{} : it->second;
}

const Restaurant* Restaurant::child(ContextElem e) const {
  auto it = children_.find(e);
  return it == children_.end() ? nullptr : it->second.get();
}

ContextTrie::ContextTrie(BaseDistribution base, std::uint32_t context_cap)
    : base_(std::move(base)),
      context_cap_(context_cap),
      root_(std::make_unique<Restaurant>()),
      params_(1) {}

std::span<const ContextElem> ContextTrie::truncate(std::span<const ContextElem> context) const {
  if (context_cap_ > 0 && context.size() > context_cap_)
    return context.subspan(context.size() - context_cap_);
  return context;
}

Restaurant* ContextTrie::descend(Restaurant* node, ContextElem e) {
  auto& slot = node->children_[e];
  if (!slot) {
    slot = std::make_unique<Restaurant>();
    ++num_restaurants_;
  }
  return slot.get();
}

void ContextTrie::insert(std::span<const ContextElem> context, RuleId rule) {
  if (rule >= base_.num_rules()) throw DataError("rule id outside the base vocabulary");
  context = truncate(context);
  std::vector<Restaurant*> path{root_.get()};
  for (auto it = context.rbegin(); it != context.rend(); ++it)
    path.push_back(descend(path.back(), *it));
  max_depth_ = std::max(max_depth_, context.size());

  const std::uint32_t g = base_.group(rule);
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    Restaurant& r = **it;
    TableCount& d = r.dishes_[rule];
    TableCount& gt = r.groups_[g];
    ++d.customers;
    ++gt.customers;
    ++r.customers_;
    if (d.tables > 0) break;
    d.tables = 1;
    ++gt.tables;
    ++r.tables_;
  }
}

void ContextTrie::set_counts(std::span<const ContextElem> path_from_root, RuleId rule,
                             TableCount counts) {
  if (rule >= base_.num_rules()) throw DataError("rule id outside the base vocabulary");
  Restaurant* node = root_.get();
  for (ContextElem e : path_from_root) node = descend(node, e);
  max_depth_ = std::max(max_depth_, path_from_root.size());
  TableCount& d = node->dishes_[rule];
  TableCount& gt = node->groups_[base_.group(rule)];
  gt.customers += counts.customers - d.customers;
  gt.tables += counts.tables - d.tables;
  node->customers_ += counts.customers;
  node->customers_ -= d.customers;
  node->tables_ += counts.tables;
  node->tables_ -= d.tables;
  d = counts;
}

void ContextTrie::set_params(std::vector<DepthParam> params) {
  if (params.empty()) throw UsageError("parameter vector must not be empty");
  for (const DepthParam& p : params) {
    if (!(p.discount >= 0.0 && p.discount < 1.0) || !(p.concentration >= 0.0))
      throw UsageError("parameters violate d in [0,1), c >= 0");
  }
  params_ = std::move(params);
}

const DepthParam& ContextTrie::param(std::size_t depth) const {
  return params_[std::min(depth, params_.size() - 1)];
}

ContextTrie::Query ContextTrie::query(std::span<const ContextElem> context) const {
  context = truncate(context);
  std::vector<const Restaurant*> path{root_.get()};
  path.reserve(context.size() + 1);
  for (auto it = context.rbegin(); it != context.rend(); ++it) {
    const Restaurant* next = path.back()->child(*it);
    if (!next) break;
    path.push_back(next);
  }
  return Query(this, std::move(path));
}

double ContextTrie::Query::prob(RuleId r) const {
  if (r >= trie_->base_.num_rules()) throw DataError("rule id outside the rule vocabulary");
  double p = trie_->base_.prob(r);
  for (std::size_t m = 0; m < path_.size(); ++m) {
    const Restaurant& rs = *path_[m];
    if (rs.customers_ == 0) continue;
    const DepthParam& prm = trie_->param(m);
    const TableCount tc = rs.dish(r);
    const double d = prm.discount, c = prm.concentration;
    p = (tc.customers - d * tc.tables + (c + d * static_cast<double>(rs.tables_)) * p) /
        (static_cast<double>(rs.customers_) + c);
  }
  return p;
}

double ContextTrie::Query::group_mass(std::uint32_t g) const {
  double p = trie_->base_.group_mass(g);
  for (std::size_t m = 0; m < path_.size(); ++m) {
    const Restaurant& rs = *path_[m];
    if (rs.customers_ == 0) continue;
    const DepthParam& prm = trie_->param(m);
    const TableCount tc = rs.group(g);
    const double d = prm.discount, c = prm.concentration;
    p = (tc.customers - d * tc.tables + (c + d * static_cast<double>(rs.tables_)) * p) /
        (static_cast<double>(rs.customers_) + c);
  }
  return p;
}

double ContextTrie::Query::prob_in_group(RuleId r) const {
  const double mass = group_mass(trie_->base_.group(r));
  return mass > 0.0 ? prob(r) / mass : 0.0;
}

namespace {

void visit(const Restaurant& node, std::vector<ContextElem>& path,
           const std::function<void(std::span<const ContextElem>, const Restaurant&)>& fn) {
  fn(path, node);
  for (const auto& [e, child] : node.children()) {
    path.push_back(e);
    visit(*child, path, fn);
    path.pop_back();
  }
}

}  // namespace

void ContextTrie::for_each(
    const std::function<void(std::span<const ContextElem>, const Restaurant&)>& fn) const {
  std::vector<ContextElem> path;
  visit(*root_, path, fn);
}

}  // namespace hpyp
