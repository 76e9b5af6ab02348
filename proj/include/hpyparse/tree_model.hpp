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

#include <span>

#include "hpyparse/events.hpp"
#include "hpyparse/grammar.hpp"
#include "hpyparse/hpyp.hpp"
#include "hpyparse/tree.hpp"

namespace hpyp {

// Scores trees with the context trie. Expansions of a nonterminal are
// renormalized over the rules with that left-hand side.
class TreeModel {
 public:
  TreeModel(const Grammar& grammar, const ContextTrie& trie, ContextMode mode)
      : grammar_(grammar), trie_(trie), mode_(mode) {}

  const Grammar& grammar() const { return grammar_; }
  const ContextTrie& trie() const { return trie_; }
  ContextMode mode() const { return mode_; }

  double log_expand(std::span<const ContextElem> context, RuleId rule) const;
  double log_prob(const Tree& tree) const;

 private:
  const Grammar& grammar_;
  const ContextTrie& trie_;
  ContextMode mode_;
};

}  // namespace hpyp
