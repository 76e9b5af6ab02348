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

// Random toy grammars, sentences and trained tries for oracle comparisons.

#include <optional>
#include <string>
#include <vector>

#include "hpyparse/events.hpp"
#include "hpyparse/grammar.hpp"
#include "hpyparse/hpyp.hpp"
#include "hpyparse/pcfg.hpp"
#include "hpyparse/rng.hpp"
#include "hpyparse/tree.hpp"

namespace fixture {

struct ToyOptions {
  std::size_t nonterminals = 3;
  std::size_t terminals = 2;
  double binary_density = 0.5;
  double lexical_density = 0.7;
  double unary_density = 0.0;
  std::size_t min_length = 3;
  std::size_t max_length = 5;
  std::size_t min_trees = 2;
  std::size_t max_trees = 50;
};

struct ToyInstance {
  hpyp::Grammar grammar;
  hpyp::ProbTable pcfg;
  hpyp::Sentence sentence;
  std::vector<hpyp::Tree> trees;  // every parse, from the enumeration oracle
};

// Draws grammars and sentences until the sentence has between min_trees and
// max_trees parses.
ToyInstance random_instance(hpyp::Rng& rng, const ToyOptions& options);

// Top-down draw from the PCFG, giving up past `max_depth`.
std::optional<hpyp::Tree> sample_from_pcfg(const hpyp::Grammar& g, const hpyp::ProbTable& pcfg, hpyp::Rng& rng,
                                           std::size_t max_depth = 12);

// Trie trained on `trees` draws from the instance's PCFG, with a base
// proportional to the PCFG and random per-depth parameters.
hpyp::ContextTrie trained_trie(const ToyInstance& inst, hpyp::Rng& rng, std::size_t trees,
                               hpyp::ContextMode mode = hpyp::ContextMode::Nonterminal);

// Joint base p(A) P(r|A) with p uniform over left-hand sides.
hpyp::BaseDistribution base_from_pcfg(const hpyp::Grammar& g, const hpyp::ProbTable& pcfg);

// The unambiguous grammar S -> A B, A -> a, B -> b.
hpyp::Grammar tiny_grammar();

// Parses a bracketed tree into `g`, computing spans.
hpyp::Tree tree(hpyp::Grammar& g, const std::string& text);

// Adds the rules used by `t` to the grammar.
void add_rules(hpyp::Grammar& g, const hpyp::Tree& t);

}  // namespace fixture
