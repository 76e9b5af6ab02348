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
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hpyparse/grammar.hpp"

namespace hpyp {

// Token span [start, end).
struct Span {
  std::uint32_t start = 0;
  std::uint32_t end = 0;

  std::uint32_t length() const { return end - start; }
  friend bool operator==(const Span&, const Span&) = default;
};

// A labelled ordered tree. Leaves carry terminal ids; every other node carries
// a nonterminal id. A node with a terminal child has exactly that one child.
struct Tree {
  SymbolId label = kNoSymbol;
  bool terminal = false;
  Span span;
  std::vector<Tree> children;

  static Tree leaf(SymbolId word);
  static Tree node(SymbolId label, std::vector<Tree> children);

  bool is_preterminal() const { return children.size() == 1 && children.front().terminal; }

  friend bool operator==(const Tree&, const Tree&) = default;
};

using Sentence = std::vector<SymbolId>;

// Recomputes spans so that children tile their parent left to right.
void assign_spans(Tree& tree, std::uint32_t start = 0);

Sentence tree_yield(const Tree& tree);
std::size_t count_internal_nodes(const Tree& tree);
// Number of nonterminal levels on the longest root-to-leaf path.
std::size_t tree_depth(const Tree& tree);

// The production applied at an internal node.
Rule rule_at(const Tree& node);

struct TreebankEntry {
  Sentence sentence;
  Tree tree;
};

// One bracketed tree per non-blank line: (LABEL child ...). Symbols are
// interned into `grammar`. Throws ParseError with the line number.
std::vector<TreebankEntry> read_treebank(std::istream& in, Grammar& grammar);
Tree parse_tree(std::string_view text, Grammar& grammar, std::size_t line_no = 1);

std::string write_tree(const Tree& tree, const Grammar& grammar);
// Same, with leaf i printed as words[i] instead of its terminal symbol.
std::string write_tree(const Tree& tree, const Grammar& grammar,
                       std::span<const std::string> words);

// Whitespace tokenization of one input sentence line.
std::vector<std::string> split_words(std::string_view line);

}  // namespace hpyp
