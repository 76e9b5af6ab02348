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

#include "hpyparse/preprocess.hpp"

#include <array>
#include <cctype>
#include <unordered_map>

namespace hpyp {

bool is_bar_symbol(std::string_view label) { return label.ends_with(kBarSuffix); }

namespace {

Tree binarize_chain(SymbolId bar, std::span<const Tree> rest, Grammar& g);

Tree binarize_node(const Tree& t, Grammar& g) {
  if (t.terminal) return t;
  if (t.children.size() <= 2) {
    std::vector<Tree> kids;
    kids.reserve(t.children.size());
    for (const Tree& c : t.children) kids.push_back(binarize_node(c, g));
    return Tree::node(t.label, std::move(kids));
  }
  const SymbolId bar =
      g.nonterminals().intern(g.nonterminals().text(t.label) + std::string(kBarSuffix));
  std::vector<Tree> kids;
  kids.push_back(binarize_node(t.children.front(), g));
  kids.push_back(binarize_chain(bar, std::span(t.children).subspan(1), g));
  return Tree::node(t.label, std::move(kids));
}

Tree binarize_chain(SymbolId bar, std::span<const Tree> rest, Grammar& g) {
  std::vector<Tree> kids;
  kids.push_back(binarize_node(rest.front(), g));
  if (rest.size() == 2)
    kids.push_back(binarize_node(rest[1], g));
  else
    kids.push_back(binarize_chain(bar, rest.subspan(1), g));
  return Tree::node(bar, std::move(kids));
}

Tree unbinarize_node(const Tree& t, const Grammar& g) {
  if (t.terminal) return t;
  std::vector<Tree> kids;
  for (const Tree& c : t.children) {
    Tree u = unbinarize_node(c, g);
    if (!u.terminal && is_bar_symbol(g.nonterminals().text(u.label))) {
      for (Tree& gc : u.children) kids.push_back(std::move(gc));
    } else {
      kids.push_back(std::move(u));
    }
  }
  return Tree::node(t.label, std::move(kids));
}

bool is_unary_over_nonterminal(const Tree& t) {
  return !t.terminal && t.children.size() == 1 && !t.children.front().terminal;
}

Tree collapse_node(const Tree& t, Grammar& g) {
  if (t.terminal) return t;
  if (is_unary_over_nonterminal(t)) {
    const Tree* cur = &t.children.front();
    std::string label = g.nonterminals().text(cur->label);
    while (is_unary_over_nonterminal(*cur)) {
      cur = &cur->children.front();
      label += kUnaryJoin;
      label += g.nonterminals().text(cur->label);
    }
    Tree merged = Tree::node(g.nonterminals().intern(label), cur->children);
    std::vector<Tree> kids;
    kids.push_back(collapse_node(merged, g));
    return Tree::node(t.label, std::move(kids));
  }
  std::vector<Tree> kids;
  for (const Tree& c : t.children) kids.push_back(collapse_node(c, g));
  return Tree::node(t.label, std::move(kids));
}

Tree expand_node(const Tree& t, Grammar& g) {
  if (t.terminal) return t;
  std::vector<Tree> kids;
  for (const Tree& c : t.children) kids.push_back(expand_node(c, g));
  const std::string label = g.nonterminals().text(t.label);
  std::vector<std::string_view> parts;
  std::string_view rest = label;
  for (auto pos = rest.find(kUnaryJoin); pos != std::string_view::npos;
       pos = rest.find(kUnaryJoin)) {
    parts.push_back(rest.substr(0, pos));
    rest.remove_prefix(pos + 1);
  }
  parts.push_back(rest);
  Tree cur = Tree::node(g.nonterminals().intern(parts.back()), std::move(kids));
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) {
    std::vector<Tree> one;
    one.push_back(std::move(cur));
    cur = Tree::node(g.nonterminals().intern(*it), std::move(one));
  }
  return cur;
}

void count_leaves(const Tree& t, std::unordered_map<SymbolId, unsigned>& counts) {
  if (t.terminal) {
    ++counts[t.label];
    return;
  }
  for (const Tree& c : t.children) count_leaves(c, counts);
}

void rewrite_leaves(Tree& t, const std::unordered_map<SymbolId, unsigned>& counts,
                    unsigned threshold, Grammar& g) {
  if (t.terminal) {
    const std::string& text = g.terminals().text(t.label);
    if (counts.at(t.label) <= threshold && !is_signature(text))
      t.label = g.terminals().intern(word_signature(text, t.span.start == 0));
    return;
  }
  for (Tree& c : t.children) rewrite_leaves(c, counts, threshold, g);
}

}  // namespace

Tree binarize_right(const Tree& tree, Grammar& grammar) {
  Tree out = binarize_node(tree, grammar);
  assign_spans(out, tree.span.start);
  return out;
}

Tree unbinarize_right(const Tree& tree, const Grammar& grammar) {
  Tree out = unbinarize_node(tree, grammar);
  assign_spans(out, tree.span.start);
  return out;
}

Tree collapse_unary_chains(const Tree& tree, Grammar& grammar) {
  Tree out = collapse_node(tree, grammar);
  assign_spans(out, tree.span.start);
  return out;
}

Tree expand_unary_chains(const Tree& tree, Grammar& grammar) {
  Tree out = expand_node(tree, grammar);
  assign_spans(out, tree.span.start);
  return out;
}

std::string word_signature(std::string_view word, bool sentence_initial) {
  std::size_t upper = 0, lower = 0;
  bool digit = false, dash = false;
  for (unsigned char c : word) {
    if (std::isupper(c)) ++upper;
    else if (std::islower(c)) ++lower;
    else if (std::isdigit(c)) digit = true;
    else if (c == '-') dash = true;
  }
  std::string sig = "UNK";
  if (upper > 0) {
    if (lower == 0)
      sig += "-ALLC";
    else if (upper == 1 && std::isupper(static_cast<unsigned char>(word.front())))
      sig += "-INITC";
    else
      sig += "-MIXC";
  }
  if (digit) sig += "-NUM";
  if (dash) sig += "-DASH";
  if (lower > 0) {
    std::string low(word);
    for (char& c : low) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    static constexpr std::array<std::string_view, 7> kSuffixes{"ing", "ion", "est", "ed",
                                                               "ly",  "er",  "s"};
    for (std::string_view suffix : kSuffixes) {
      if (low.size() >= suffix.size() + 2 && low.ends_with(suffix)) {
        sig += '-';
        sig += suffix;
        break;
      }
    }
  }
  if (sentence_initial) sig += "-init";
  return sig;
}

bool is_signature(std::string_view word) {
  return word.starts_with("UNK") && (word.size() == 3 || word[3] == '-');
}

void replace_rare_words(std::vector<Tree>& corpus, Grammar& grammar, unsigned threshold) {
  if (threshold == 0) return;
  std::unordered_map<SymbolId, unsigned> counts;
  for (const Tree& t : corpus) count_leaves(t, counts);
  for (Tree& t : corpus) rewrite_leaves(t, counts, threshold, grammar);
}

Sentence map_sentence(std::span<const std::string> words, const Grammar& grammar) {
  Sentence out;
  out.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (auto id = grammar.terminals().find(words[i]); id && grammar.is_known_word(*id)) {
      out.push_back(*id);
      continue;
    }
    auto sig = grammar.terminals().find(word_signature(words[i], i == 0));
    out.push_back(sig && grammar.is_known_word(*sig) ? *sig : kNoSymbol);
  }
  return out;
}

}  // namespace hpyp
