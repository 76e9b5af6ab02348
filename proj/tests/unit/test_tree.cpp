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

#include <sstream>

#include "hpyparse/error.hpp"
#include "hpyparse/rng.hpp"
#include "hpyparse/tree.hpp"

using namespace hpyp;

namespace {

std::string random_tree_text(Rng& rng, int depth) {
  static const char* labels[] = {"S", "NP", "VP", "PP", "ADJP"};
  static const char* words[] = {"a", "dog", "ran", "of", "the"};
  std::string label = labels[rng.below(5)];
  if (depth == 0 || rng.uniform() < 0.3) return "(" + label + " " + words[rng.below(5)] + ")";
  std::string out = "(" + label;
  const std::uint64_t n = 1 + rng.below(4);
  for (std::uint64_t i = 0; i < n; ++i) out += " " + random_tree_text(rng, depth - 1);
  return out + ")";
}

}  // namespace

TEST_CASE("read_treebank builds trees with spans") {
  Grammar g;
  std::istringstream in("(S (NP (NN dog)) (VP (VB ran)))\n");
  const auto bank = read_treebank(in, g);
  REQUIRE(bank.size() == 1);
  const Tree& t = bank[0].tree;
  CHECK(g.nonterminals().text(t.label) == "S");
  CHECK(t.span == Span{0, 2});
  CHECK(t.children[1].span == Span{1, 2});
  CHECK(bank[0].sentence.size() == 2);
  CHECK(g.terminals().text(bank[0].sentence[1]) == "ran");
  CHECK(g.nonterminals().text(g.root()) == "S");
}

TEST_CASE("malformed bracketing reports the line") {
  Grammar g;
  std::istringstream in("(S (A a))\n\n(S");
  try {
    read_treebank(in, g);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream empty("()");
  CHECK_THROWS_AS(read_treebank(empty, g), ParseError);
  std::istringstream extra("(S (A a)))");
  CHECK_THROWS_AS(read_treebank(extra, g), ParseError);
  std::istringstream mixed("(S a (A b))");
  CHECK_THROWS_AS(read_treebank(mixed, g), ParseError);
}

TEST_CASE("write_tree emits single-line canonical form") {
  Grammar g;
  CHECK(write_tree(parse_tree("(A a)", g), g) == "(A a)");
  CHECK(write_tree(parse_tree("  (S\n (A   a) (B b) )", g), g) == "(S (A a) (B b))");
  Grammar other;
  other.nonterminals().intern("B");
  other.terminals().intern("b");
  CHECK(write_tree(parse_tree("(S (A a) (B b))", other), other) == "(S (A a) (B b))");
}

TEST_CASE("write_tree can substitute raw words") {
  Grammar g;
  const Tree t = parse_tree("(S (A UNK) (B b))", g);
  const std::vector<std::string> words{"Zork", "b"};
  CHECK(write_tree(t, g, words) == "(S (A Zork) (B b))");
}

TEST_CASE("read and write round-trip on random trees") {
  Rng rng(7);
  for (int k = 0; k < 300; ++k) {
    const std::string text = random_tree_text(rng, 5);
    Grammar g;
    std::istringstream in(text + "\n");
    const auto bank = read_treebank(in, g);
    REQUIRE(bank.size() == 1);
    CHECK(write_tree(bank[0].tree, g) == text);
  }
}

TEST_CASE("spans tile the parent and the yield matches the sentence") {
  Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    Grammar g;
    Tree t = parse_tree(random_tree_text(rng, 4), g);
    assign_spans(t);
    std::vector<const Tree*> stack{&t};
    while (!stack.empty()) {
      const Tree* n = stack.back();
      stack.pop_back();
      if (n->terminal) {
        CHECK(n->span.length() == 1);
        continue;
      }
      std::uint32_t at = n->span.start;
      for (const Tree& c : n->children) {
        CHECK(c.span.start == at);
        at = c.span.end;
        stack.push_back(&c);
      }
      CHECK(at == n->span.end);
    }
    CHECK(tree_yield(t).size() == t.span.length());
  }
}

TEST_CASE("tree measurements") {
  Grammar g;
  const Tree t = parse_tree("(S (NP (DT the) (NN dog)) (VP (VB ran)))", g);
  CHECK(count_internal_nodes(t) == 6);
  CHECK(tree_depth(t) == 3);
  CHECK(split_words("  a b\tc ") == std::vector<std::string>{"a", "b", "c"});
}
