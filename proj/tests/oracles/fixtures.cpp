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

#include "fixtures.hpp"

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"

namespace fixture {

using namespace hpyp;

namespace {

double uniform_in(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

std::optional<ToyInstance> try_instance(Rng& rng, const ToyOptions& o) {
  ToyInstance inst;
  Grammar& g = inst.grammar;
  for (std::size_t a = 0; a < o.nonterminals; ++a)
    g.nonterminals().intern(a == 0 ? std::string("S") : std::string(1, static_cast<char>('A' + a - 1)));
  for (std::size_t w = 0; w < o.terminals; ++w) g.terminals().intern(std::string(1, static_cast<char>('a' + w)));
  g.set_root(0);
  std::vector<double> weights;
  for (SymbolId a = 0; a < o.nonterminals; ++a) {
    const std::size_t before = g.num_rules();
    for (SymbolId b = 0; b < o.nonterminals; ++b)
      for (SymbolId c = 0; c < o.nonterminals; ++c)
        if (rng.uniform() < o.binary_density) g.add_rule(Rule::binary(a, b, c));
    for (SymbolId b = 0; b < o.nonterminals; ++b)
      if (b != a && rng.uniform() < o.unary_density) g.add_rule(Rule::unary(a, b));
    for (SymbolId w = 0; w < o.terminals; ++w)
      if (rng.uniform() < o.lexical_density) g.add_rule(Rule::lexical(a, w));
    if (g.num_rules() == before) g.add_rule(Rule::lexical(a, static_cast<SymbolId>(rng.below(o.terminals))));
  }
  std::vector<double> probs(g.num_rules());
  std::vector<double> total(o.nonterminals, 0.0);
  for (RuleId r = 0; r < g.num_rules(); ++r) {
    probs[r] = uniform_in(rng, 0.05, 1.0);
    total[g.rule(r).lhs] += probs[r];
  }
  for (RuleId r = 0; r < g.num_rules(); ++r) probs[r] /= total[g.rule(r).lhs];
  inst.pcfg = ProbTable(std::move(probs));
  const std::size_t len = o.min_length + rng.below(o.max_length - o.min_length + 1);
  for (std::size_t i = 0; i < len; ++i) inst.sentence.push_back(static_cast<SymbolId>(rng.below(o.terminals)));
  inst.trees = oracle::enumerate_trees(g, inst.sentence, o.max_trees);
  if (inst.trees.size() < o.min_trees || inst.trees.size() > o.max_trees) return std::nullopt;
  return inst;
}

std::optional<Tree> sample_node(const Grammar& g, const ProbTable& pcfg, Rng& rng, SymbolId a, bool allow_unary,
                                std::size_t depth, std::size_t max_depth) {
  if (depth > max_depth) return std::nullopt;
  double total = 0.0;
  for (RuleId r : g.rules_for(a))
    if (allow_unary || g.rule(r).shape != RuleShape::Unary) total += pcfg.prob(r);
  if (total <= 0.0) return std::nullopt;
  double u = rng.uniform() * total;
  RuleId pick = g.rules_for(a).back();
  for (RuleId r : g.rules_for(a)) {
    if (!allow_unary && g.rule(r).shape == RuleShape::Unary) continue;
    pick = r;
    u -= pcfg.prob(r);
    if (u < 0) break;
  }
  const Rule& rule = g.rule(pick);
  if (rule.shape == RuleShape::Lexical) return Tree::node(a, {Tree::leaf(rule.rhs[0])});
  std::vector<Tree> kids;
  for (std::size_t k = 0; k < rule.arity(); ++k) {
    auto c = sample_node(g, pcfg, rng, rule.rhs[k], rule.shape != RuleShape::Unary, depth + 1, max_depth);
    if (!c) return std::nullopt;
    kids.push_back(std::move(*c));
  }
  return Tree::node(a, std::move(kids));
}

}  // namespace

ToyInstance random_instance(Rng& rng, const ToyOptions& options) {
  for (int attempt = 0; attempt < 100000; ++attempt)
    if (auto inst = try_instance(rng, options)) return std::move(*inst);
  throw std::runtime_error("no toy instance satisfied the constraints");
}

std::optional<Tree> sample_from_pcfg(const Grammar& g, const ProbTable& pcfg, Rng& rng, std::size_t max_depth) {
  auto t = sample_node(g, pcfg, rng, g.root(), true, 1, max_depth);
  if (t) assign_spans(*t);
  return t;
}

BaseDistribution base_from_pcfg(const Grammar& g, const ProbTable& pcfg) {
  std::vector<double> probs(g.num_rules());
  std::vector<std::uint32_t> groups(g.num_rules());
  const double lhs_share = 1.0 / static_cast<double>(g.nonterminals().size());
  for (RuleId r = 0; r < g.num_rules(); ++r) {
    probs[r] = lhs_share * pcfg.prob(r);
    groups[r] = g.rule(r).lhs;
  }
  return BaseDistribution(BaseVariant::MlePcfg, std::move(probs), std::move(groups));
}

ContextTrie trained_trie(const ToyInstance& inst, Rng& rng, std::size_t trees, ContextMode mode) {
  ContextTrie trie(base_from_pcfg(inst.grammar, inst.pcfg));
  std::size_t made = 0;
  for (int attempt = 0; made < trees && attempt < 100 * static_cast<int>(trees) + 100; ++attempt) {
    auto t = sample_from_pcfg(inst.grammar, inst.pcfg, rng);
    if (!t) continue;
    for (const Event& e : extract_events(*t, inst.grammar, mode)) trie.insert(e);
    ++made;
  }
  std::vector<DepthParam> params(trie.max_depth() + 1);
  for (DepthParam& p : params) {
    p.discount = uniform_in(rng, 0.1, 0.9);
    p.concentration = uniform_in(rng, 0.1, 3.0);
  }
  trie.set_params(params);
  return trie;
}

Grammar tiny_grammar() {
  Grammar g;
  const SymbolId s = g.nonterminals().intern("S");
  const SymbolId a = g.nonterminals().intern("A");
  const SymbolId b = g.nonterminals().intern("B");
  g.set_root(s);
  g.add_rule(Rule::binary(s, a, b));
  g.add_rule(Rule::lexical(a, g.terminals().intern("a")));
  g.add_rule(Rule::lexical(b, g.terminals().intern("b")));
  return g;
}

Tree tree(Grammar& g, const std::string& text) {
  Tree t = parse_tree(text, g);
  assign_spans(t);
  return t;
}

void add_rules(Grammar& g, const Tree& t) {
  if (t.terminal) return;
  g.add_rule(rule_at(t));
  for (const Tree& c : t.children) add_rules(g, c);
}

}  // namespace fixture
