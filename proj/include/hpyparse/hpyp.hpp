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
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "hpyparse/events.hpp"
#include "hpyparse/grammar.hpp"

namespace hpyp {

// Beta(beta_a, beta_b) prior on the discount, Gamma(gamma_shape, rate
// gamma_rate) prior on the concentration.
struct Hyperprior {
  double beta_a = 1.0;
  double beta_b = 1.0;
  double gamma_shape = 1.0;
  double gamma_rate = 1.0;

  friend bool operator==(const Hyperprior&, const Hyperprior&) = default;
};

// Pitman-Yor parameters shared by all restaurants at one trie depth.
struct DepthParam {
  double discount = 0.5;
  double concentration = 1.0;
  Hyperprior prior;

  friend bool operator==(const DepthParam&, const DepthParam&) = default;
};

enum class BaseVariant : std::uint8_t { Uniform = 0, MlePcfg = 1 };

// The base measure H at the top of the hierarchy, a joint distribution over
// rule ids. Each rule also belongs to a group (its left-hand side) so that
// probabilities can be renormalized over the rules a nonterminal can use.
class BaseDistribution {
 public:
  BaseDistribution() = default;
  BaseDistribution(BaseVariant variant, std::vector<double> probs,
                   std::vector<std::uint32_t> groups);

  static BaseDistribution uniform(std::vector<std::uint32_t> groups);
  // H(r) proportional to the rule's training count.
  static BaseDistribution from_counts(std::span<const std::uint64_t> counts,
                                      std::vector<std::uint32_t> groups);

  BaseVariant variant() const { return variant_; }
  std::size_t num_rules() const { return probs_.size(); }
  double prob(RuleId r) const { return probs_[r]; }
  std::uint32_t group(RuleId r) const { return groups_[r]; }
  double group_mass(std::uint32_t g) const { return g < group_mass_.size() ? group_mass_[g] : 0.0; }
  std::span<const double> probs() const { return probs_; }
  std::span<const std::uint32_t> groups() const { return groups_; }

 private:
  BaseVariant variant_ = BaseVariant::Uniform;
  std::vector<double> probs_;
  std::vector<std::uint32_t> groups_;
  std::vector<double> group_mass_;
};

struct TableCount {
  std::uint32_t customers = 0;
  std::uint32_t tables = 0;

  friend bool operator==(const TableCount&, const TableCount&) = default;
};

// CRP state for one context. Under minimal seating each dish sits at a single
// table, so tables(r) is 1 exactly when customers(r) >= 1.
class Restaurant {
 public:
  using Children = std::map<ContextElem, std::unique_ptr<Restaurant>>;

  TableCount dish(RuleId r) const;
  TableCount group(std::uint32_t g) const;
  std::uint64_t customers() const { return customers_; }
  std::uint64_t tables() const { return tables_; }
  const std::unordered_map<RuleId, TableCount>& dishes() const { return dishes_; }
  const Restaurant* child(ContextElem e) const;
  const Children& children() const { return children_; }

 private:
  friend class ContextTrie;

  std::unordered_map<RuleId, TableCount> dishes_;
  std::unordered_map<std::uint32_t, TableCount> groups_;
  std::uint64_t customers_ = 0;
  std::uint64_t tables_ = 0;
  Children children_;
};

// Suffix trie of restaurants. The root is the empty context; the child of a
// node along element e extends its context by e on the far (earliest) side,
// so a node's trie parent is always its smoothing parent.
class ContextTrie {
 public:
  // context_cap > 0 truncates every context to its `context_cap` nearest
  // elements, for training and queries alike.
  explicit ContextTrie(BaseDistribution base = {}, std::uint32_t context_cap = 0);

  ContextTrie(ContextTrie&&) noexcept = default;
  ContextTrie& operator=(ContextTrie&&) noexcept = default;

  // Seats one customer for `rule` in the restaurant for `context`. When that
  // opens a new table a proxy customer is sent to the parent, recursively.
  void insert(std::span<const ContextElem> context, RuleId rule);
  void insert(const Event& e) { insert(e.context, e.rule); }

  // Direct restaurant update used when loading a model.
  void set_counts(std::span<const ContextElem> path_from_root, RuleId rule, TableCount counts);

  const Restaurant& root() const { return *root_; }
  const BaseDistribution& base() const { return base_; }
  std::uint32_t context_cap() const { return context_cap_; }
  std::size_t max_depth() const { return max_depth_; }
  std::size_t num_restaurants() const { return num_restaurants_; }
  // Draws from H: tables in the empty-context restaurant.
  std::uint64_t base_count(RuleId r) const { return root_->dish(r).tables; }

  const std::vector<DepthParam>& params() const { return params_; }
  void set_params(std::vector<DepthParam> params);
  // Depths past the last configured one reuse the deepest parameters.
  const DepthParam& param(std::size_t depth) const;

  // Restaurants matched by a context, from the root down. Levels past the
  // deepest stored node are empty and leave probabilities unchanged.
  class Query {
   public:
    double prob(RuleId r) const;
    double group_mass(std::uint32_t g) const;
    // P(r | u) renormalized over rules in r's group.
    double prob_in_group(RuleId r) const;
    std::size_t matched_depth() const { return path_.size() - 1; }

   private:
    friend class ContextTrie;
    Query(const ContextTrie* trie, std::vector<const Restaurant*> path)
        : trie_(trie), path_(std::move(path)) {}

    const ContextTrie* trie_;
    std::vector<const Restaurant*> path_;
  };

  Query query(std::span<const ContextElem> context) const;
  double predictive(std::span<const ContextElem> context, RuleId rule) const {
    return query(context).prob(rule);
  }

  // Visits every restaurant with its path from the root (nearest element
  // first) and its depth.
  void for_each(const std::function<void(std::span<const ContextElem>, const Restaurant&)>& fn) const;

 private:
  std::span<const ContextElem> truncate(std::span<const ContextElem> context) const;
  Restaurant* descend(Restaurant* node, ContextElem e);

  BaseDistribution base_;
  std::uint32_t context_cap_ = 0;
  std::unique_ptr<Restaurant> root_;
  std::size_t max_depth_ = 0;
  std::size_t num_restaurants_ = 1;
  std::vector<DepthParam> params_;
};

}  // namespace hpyp
