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

#include <algorithm>
#include <sstream>

#include "hpyparse/error.hpp"
#include "hpyparse/pos.hpp"
#include "hpyparse/rng.hpp"

using namespace hpyp;

namespace {

void collect_rules(const Tree& t, const Grammar& g, std::vector<std::string>& out) {
  if (t.terminal) return;
  std::string r = g.nonterminals().text(t.label) + " ->";
  for (const Tree& c : t.children)
    r += " " + (c.terminal ? g.terminals().text(c.label) : g.nonterminals().text(c.label));
  out.push_back(r);
  for (const Tree& c : t.children) collect_rules(c, g, out);
}

}  // namespace

TEST_CASE("single token: one transition from the start and one emission") {
  Grammar g;
  const std::vector<std::string> tags{"DT"}, words{"that"};
  const Tree t = pos_to_tree(tags, words, g);
  CHECK(write_tree(t, g) == "(<S> (DT' that))");
  CHECK(tree_to_pos(t, g) == tags);
}

TEST_CASE("tagged sentence uses only transitions and emissions") {
  Grammar g;
  const std::vector<std::string> words{"that", "'s", "fine", "now", "."};
  const std::vector<std::string> tags{"DT", "VBZ", "JJ", "RB", "."};
  const Tree t = pos_to_tree(tags, words, g);
  std::vector<std::string> rules;
  collect_rules(t, g, rules);
  std::sort(rules.begin(), rules.end());
  std::vector<std::string> expected{
      "<S> -> DT' DT", "DT -> VBZ' VBZ", "VBZ -> JJ' JJ", "JJ -> RB' RB", "RB -> .'",
      "DT' -> that",   "VBZ' -> 's",    "JJ' -> fine",   "RB' -> now",  ".' -> .",
  };
  std::sort(expected.begin(), expected.end());
  CHECK(rules == expected);
  CHECK(t.span == Span{0, 5});
}

TEST_CASE("tag trees round-trip on random sequences") {
  Rng rng(17);
  const char* tagset[] = {"NN", "VB", "DT", "JJ", "IN"};
  for (int k = 0; k < 200; ++k) {
    Grammar g;
    const std::size_t n = 1 + rng.below(12);
    std::vector<std::string> tags, words;
    for (std::size_t i = 0; i < n; ++i) {
      tags.push_back(tagset[rng.below(5)]);
      words.push_back("w" + std::to_string(rng.below(9)));
    }
    const Tree t = pos_to_tree(tags, words, g);
    CHECK(tree_to_pos(t, g) == tags);
    std::vector<std::string> yield;
    for (SymbolId w : tree_yield(t)) yield.push_back(g.terminals().text(w));
    CHECK(yield == words);
  }
}

TEST_CASE("pos_to_tree rejects bad input") {
  Grammar g;
  const std::vector<std::string> two{"a", "b"}, one{"NN"}, none{}, start{"<S>"};
  CHECK_THROWS_AS(pos_to_tree(one, two, g), DataError);
  CHECK_THROWS_AS(pos_to_tree(none, none, g), DataError);
  CHECK_THROWS_AS(pos_to_tree(start, one, g), DataError);
}

TEST_CASE("tagged corpus I/O") {
  std::istringstream in("the/DT dog/NN\n\n1/2/CD\n");
  const auto corpus = read_tagged(in);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].tags == std::vector<std::string>{"DT", "NN"});
  CHECK(corpus[1].words == std::vector<std::string>{"1/2"});
  CHECK(write_tagged(corpus[0].words, corpus[0].tags) == "the/DT dog/NN");
  std::istringstream bad("the/DT dog\n");
  CHECK_THROWS_AS(read_tagged(bad), ParseError);
}
