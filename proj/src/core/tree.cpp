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

#include "hpyparse/tree.hpp"

#include <algorithm>
#include <cctype>
#include <istream>

#include "hpyparse/error.hpp"

namespace hpyp {

Tree Tree::leaf(SymbolId word) {
  Tree t;
  t.label = word;
  t.terminal = true;
  return t;
}

Tree Tree::node(SymbolId label, std::vector<Tree> children) {
  Tree t;
  t.label = label;
  t.children = std::move(children);
  return t;
}

void assign_spans(Tree& tree, std::uint32_t start) {
  if (tree.terminal) {
    tree.span = {start, start + 1};
    return;
  }
  std::uint32_t pos = start;
  for (Tree& child : tree.children) {
    assign_spans(child, pos);
    pos = child.span.end;
  }
  tree.span = {start, pos};
}

namespace {

void collect_yield(const Tree& t, Sentence& out) {
  if (t.terminal) {
    out.push_back(t.label);
    return;
  }
  for (const Tree& c : t.children) collect_yield(c, out);
}

}  // namespace

Sentence tree_yield(const Tree& tree) {
  Sentence out;
  collect_yield(tree, out);
  return out;
}

std::size_t count_internal_nodes(const Tree& tree) {
  if (tree.terminal) return 0;
  std::size_t n = 1;
  for (const Tree& c : tree.children) n += count_internal_nodes(c);
  return n;
}

std::size_t tree_depth(const Tree& tree) {
  if (tree.terminal) return 0;
  std::size_t best = 0;
  for (const Tree& c : tree.children) best = std::max(best, tree_depth(c));
  return best + 1;
}

Rule rule_at(const Tree& node) {
  if (node.terminal || node.children.empty() || node.children.size() > 2)
    throw DataError("node does not carry a binarized production");
  if (node.children.size() == 2) {
    if (node.children[0].terminal || node.children[1].terminal)
      throw DataError("binary production with a terminal child");
    return Rule::binary(node.label, node.children[0].label, node.children[1].label);
  }
  const Tree& child = node.children.front();
  return child.terminal ? Rule::lexical(node.label, child.label)
                        : Rule::unary(node.label, child.label);
}

namespace {

class BracketReader {
 public:
  BracketReader(std::string_view text, Grammar& grammar, std::size_t line)
      : text_(text), grammar_(grammar), line_(line) {}

  Tree read_all() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(line_, "empty tree");
    Tree t = read_node();
    skip_space();
    if (pos_ != text_.size()) throw ParseError(line_, "trailing text after tree");
    return t;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view atom() {
    const std::size_t begin = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    return text_.substr(begin, pos_ - begin);
  }

  Tree read_node() {
    if (pos_ >= text_.size() || text_[pos_] != '(')
      throw ParseError(line_, "expected '('");
    ++pos_;
    skip_space();
    const std::string_view label = atom();
    if (label.empty()) {
      if (pos_ < text_.size() && text_[pos_] == ')') throw ParseError(line_, "empty tree");
      throw ParseError(line_, "missing node label");
    }
    std::vector<Tree> children;
    bool has_terminal = false;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) throw ParseError(line_, "unbalanced brackets: missing ')'");
      const char c = text_[pos_];
      if (c == ')') {
        ++pos_;
        break;
      }
      if (c == '(') {
        children.push_back(read_node());
      } else {
        children.push_back(Tree::leaf(grammar_.terminals().intern(atom())));
        has_terminal = true;
      }
    }
    if (children.empty()) throw ParseError(line_, "node '" + std::string(label) + "' has no children");
    if (has_terminal && children.size() != 1)
      throw ParseError(line_, "terminal must be the only child of its node");
    return Tree::node(grammar_.nonterminals().intern(label), std::move(children));
  }

  std::string_view text_;
  Grammar& grammar_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

void write_node(const Tree& t, const Grammar& g, std::span<const std::string> words,
                std::string& out) {
  if (t.terminal) {
    out += words.empty() ? g.terminals().text(t.label) : words[t.span.start];
    return;
  }
  out += '(';
  out += g.nonterminals().text(t.label);
  for (const Tree& c : t.children) {
    out += ' ';
    write_node(c, g, words, out);
  }
  out += ')';
}

}  // namespace

Tree parse_tree(std::string_view text, Grammar& grammar, std::size_t line_no) {
  Tree t = BracketReader(text, grammar, line_no).read_all();
  assign_spans(t);
  return t;
}

std::vector<TreebankEntry> read_treebank(std::istream& in, Grammar& grammar) {
  std::vector<TreebankEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c); }))
      continue;
    Tree t = parse_tree(line, grammar, line_no);
    if (grammar.root() == kNoSymbol) grammar.set_root(t.label);
    Sentence s = tree_yield(t);
    out.push_back({std::move(s), std::move(t)});
  }
  return out;
}

std::string write_tree(const Tree& tree, const Grammar& grammar) {
  std::string out;
  write_node(tree, grammar, {}, out);
  return out;
}

std::string write_tree(const Tree& tree, const Grammar& grammar,
                       std::span<const std::string> words) {
  std::string out;
  write_node(tree, grammar, words, out);
  return out;
}

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t b = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > b) out.emplace_back(line.substr(b, i - b));
  }
  return out;
}

}  // namespace hpyp
