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

#include "hpyparse/pos.hpp"

#include <istream>

#include "hpyparse/error.hpp"

namespace hpyp {

namespace {

std::string twin_of(std::string_view tag) { return std::string(tag) + "'"; }

}  // namespace

Tree pos_to_tree(std::span<const std::string> tags, std::span<const std::string> words,
                 Grammar& grammar) {
  if (tags.size() != words.size())
    throw DataError("tag/word length mismatch: " + std::to_string(tags.size()) + " tags, " +
                    std::to_string(words.size()) + " words");
  if (tags.empty()) throw DataError("empty tagged sentence");
  for (const std::string& t : tags)
    if (t == kPosStart) throw DataError("tag collides with the reserved start symbol");

  auto& nts = grammar.nonterminals();
  const std::size_t n = tags.size();
  auto emission = [&](std::size_t k) {
    std::vector<Tree> leaf;
    leaf.push_back(Tree::leaf(grammar.terminals().intern(words[k])));
    return Tree::node(nts.intern(twin_of(tags[k])), std::move(leaf));
  };
  // State k is labelled <S> for k = 0, otherwise with tag k-1; it emits tag k
  // through the twin and hands the rest to state k+1.
  Tree state;
  for (std::size_t k = n; k-- > 0;) {
    const SymbolId label = k == 0 ? nts.intern(kPosStart) : nts.intern(tags[k - 1]);
    std::vector<Tree> kids;
    kids.push_back(emission(k));
    if (k + 1 < n) kids.push_back(std::move(state));
    state = Tree::node(label, std::move(kids));
  }
  assign_spans(state);
  return state;
}

std::vector<std::string> tree_to_pos(const Tree& tree, const Grammar& grammar) {
  std::vector<std::string> tags;
  const Tree* node = &tree;
  for (;;) {
    if (node->terminal || node->children.empty() || node->children.size() > 2)
      throw DataError("tree is not a tag-sequence encoding");
    const Tree& twin = node->children.front();
    if (!twin.is_preterminal()) throw DataError("tag-sequence tree: expected an emission");
    const std::string& label = grammar.nonterminals().text(twin.label);
    if (!label.ends_with('\'')) throw DataError("tag-sequence tree: emission without twin label");
    tags.push_back(label.substr(0, label.size() - 1));
    if (node->children.size() == 1) break;
    node = &node->children[1];
  }
  return tags;
}

std::vector<TaggedSentence> read_tagged(std::istream& in) {
  std::vector<TaggedSentence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_words(line);
    if (tokens.empty()) continue;
    TaggedSentence s;
    for (const std::string& tok : tokens) {
      const auto slash = tok.rfind('/');
      if (slash == std::string::npos || slash == 0 || slash + 1 == tok.size())
        throw ParseError(line_no, "expected word/TAG, got '" + tok + "'");
      s.words.push_back(tok.substr(0, slash));
      s.tags.push_back(tok.substr(slash + 1));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string write_tagged(std::span<const std::string> words, std::span<const std::string> tags) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
    out += '/';
    out += tags[i];
  }
  return out;
}

}  // namespace hpyp
