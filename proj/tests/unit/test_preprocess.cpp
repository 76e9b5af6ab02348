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

#include <doctest.h>

#include <map>

#include "hpyparse/preprocess.hpp"
#include "hpyparse/rng.hpp"

using namespace hpyp;

namespace {

Tree random_nary_node(Rng& rng, Grammar& g, int depth) {
  static const char* labels[] = {"S", "NP", "VP", "X"};
  const SymbolId label = g.nonterminals().intern(labels[rng.below(4)]);
  if (depth == 0 || rng.uniform() < 0.25)
    return Tree::node(label, {Tree::leaf(g.terminals().intern(std::string(1, static_cast<char>('a' + rng.below(6)))))});
  std::vector<Tree> kids;
  const std::uint64_t n = 1 + rng.below(5);
  for (std::uint64_t i = 0; i < n; ++i) kids.push_back(random_nary_node(rng, g, depth - 1));
  return Tree::node(label, std::move(kids));
}

Tree random_nary(Rng& rng, Grammar& g, int depth) {
  Tree t = random_nary_node(rng, g, depth);
  assign_spans(t);
  return t;
}

bool all_binary(const Tree& t) {
  if (t.terminal) return true;
  if (t.children.size() > 2) return false;
  for (const Tree& c : t.children)
    if (!all_binary(c)) return false;
  return true;
}

bool no_unary_chain(const Tree& t) {
  if (t.terminal) return true;
  if (t.children.size() == 1 && !t.children[0].terminal) {
    const Tree& c = t.children[0];
    if (c.children.size() == 1 && !c.children[0].terminal) return false;
  }
  for (const Tree& c : t.children)
    if (!no_unary_chain(c)) return false;
  return true;
}

void count_words(const Tree& t, const Grammar& g, std::map<std::string, int>& counts) {
  if (t.terminal) {
    ++counts[g.terminals().text(t.label)];
    return;
  }
  for (const Tree& c : t.children) count_words(c, g, counts);
}

}  // namespace

TEST_CASE("binarize_right keeps binary trees and rewrites n-ary nodes") {
  Grammar g;
  const Tree bin = parse_tree("(S (A a) (B b))", g);
  CHECK(binarize_right(bin, g) == bin);
  const Tree t = parse_tree("(A (B b) (C c) (D d))", g);
  const Tree out = binarize_right(t, g);
  CHECK(write_tree(out, g) == "(A (B b) (A|<bar> (C c) (D d)))");
  CHECK(is_bar_symbol("A|<bar>"));
  CHECK_FALSE(is_bar_symbol("A"));
  const Tree five = parse_tree("(A (B b) (C c) (D d) (E e))", g);
  CHECK(write_tree(binarize_right(five, g), g) == "(A (B b) (A|<bar> (C c) (A|<bar> (D d) (E e))))");
}

TEST_CASE("unbinarize inverts binarize on random n-ary trees") {
  Rng rng(3);
  for (int k = 0; k < 300; ++k) {
    Grammar g;
    const Tree t = random_nary(rng, g, 4);
    const Tree b = binarize_right(t, g);
    CHECK(all_binary(b));
    CHECK(unbinarize_right(b, g) == t);
  }
}

TEST_CASE("unary chains collapse to one level and expand back") {
  Grammar g;
  Tree t = parse_tree("(S (A (B b)) (D d))", g);
  CHECK(collapse_unary_chains(t, g) == t);
  Tree chain = parse_tree("(S (A (B (C (E e) (F f)))) (D d))", g);
  const Tree c = collapse_unary_chains(chain, g);
  CHECK(write_tree(c, g) == "(S (A (B+C (E e) (F f))) (D d))");
  CHECK(expand_unary_chains(c, g) == chain);
  Rng rng(5);
  for (int k = 0; k < 300; ++k) {
    Grammar h;
    const Tree r = random_nary(rng, h, 5);
    const Tree col = collapse_unary_chains(r, h);
    CHECK(no_unary_chain(col));
    CHECK(expand_unary_chains(col, h) == r);
  }
}

TEST_CASE("word signatures") {
  CHECK(word_signature("Xylo", true) == "UNK-INITC-init");
  CHECK(word_signature("Xylo", false) == "UNK-INITC");
  CHECK(word_signature("running", false) == "UNK-ing");
  CHECK(word_signature("IBM", false) == "UNK-ALLC");
  CHECK(word_signature("iPod", false) == "UNK-MIXC");
  CHECK(word_signature("1987", false) == "UNK-NUM");
  CHECK(word_signature("well-known", false) == "UNK-DASH");
  CHECK(word_signature("quickly", false) == "UNK-ly");
  CHECK(word_signature("nation", false) == "UNK-ion");
  CHECK(word_signature("walked", false) == "UNK-ed");
  CHECK(word_signature("biggest", false) == "UNK-est");
  CHECK(word_signature("bigger", false) == "UNK-er");
  CHECK(word_signature("dogs", false) == "UNK-s");
  CHECK(word_signature("is", false) == "UNK");
  CHECK(word_signature("x", false) == "UNK");
  CHECK(is_signature("UNK"));
  CHECK(is_signature("UNK-ing"));
  CHECK_FALSE(is_signature("UNKNOWN"));
}

TEST_CASE("rare-word replacement") {
  Grammar g;
  std::vector<Tree> corpus{parse_tree("(S (A Xylo) (B b))", g), parse_tree("(S (A a) (B b))", g),
                           parse_tree("(S (A a) (B running))", g)};
  SUBCASE("threshold 0 is the identity") {
    auto copy = corpus;
    replace_rare_words(copy, g, 0);
    CHECK(copy == corpus);
  }
  SUBCASE("threshold 1 removes every singleton") {
    auto copy = corpus;
    replace_rare_words(copy, g, 1);
    CHECK(write_tree(copy[0], g) == "(S (A UNK-INITC-init) (B b))");
    CHECK(write_tree(copy[2], g) == "(S (A a) (B UNK-ing))");
    std::map<std::string, int> counts;
    for (const Tree& t : copy) count_words(t, g, counts);
    for (const auto& [w, c] : counts)
      if (!is_signature(w)) CHECK(c > 1);
    auto again = copy;
    replace_rare_words(again, g, 1);
    CHECK(again == copy);
  }
}

TEST_CASE("test words map to themselves, their signature or nothing") {
  Grammar g;
  const SymbolId a = g.nonterminals().intern("A");
  g.add_rule(Rule::lexical(a, g.terminals().intern("dog")));
  g.add_rule(Rule::lexical(a, g.terminals().intern("UNK-ing")));
  g.terminals().intern("cat");  // interned but without a rule
  const std::vector<std::string> words{"dog", "jumping", "cat", "Zed"};
  const Sentence s = map_sentence(words, g);
  CHECK(s[0] == *g.terminals().find("dog"));
  CHECK(s[1] == *g.terminals().find("UNK-ing"));
  CHECK(s[2] == kNoSymbol);
  CHECK(s[3] == kNoSymbol);
}
