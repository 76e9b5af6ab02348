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

#include "fixtures.hpp"
#include "hpyparse/error.hpp"
#include "hpyparse/events.hpp"
#include "hpyparse/preprocess.hpp"

using namespace hpyp;

TEST_CASE("depth-1 tree yields one event") {
  Grammar g;
  const Tree t = fixture::tree(g, "(A a)");
  fixture::add_rules(g, t);
  const auto events = extract_events(t, g, ContextMode::Nonterminal);
  REQUIRE(events.size() == 1);
  CHECK(events[0].context == Context{*g.nonterminals().find("A")});
  CHECK(g.rule_string(events[0].rule) == "A -> a");
}

TEST_CASE("context of a deep emission is the ancestor chain") {
  Grammar g;
  const Tree t = fixture::tree(g, "(S (NP (PRP it)) (VP (VBZ is) (ADJP (RB very) (NN fine))))");
  fixture::add_rules(g, t);
  const auto events = extract_events(t, g, ContextMode::Nonterminal);
  CHECK(events.size() == count_internal_nodes(t));
  const Event& last = events.back();
  CHECK(g.rule_string(last.rule) == "NN -> fine");
  std::vector<std::string> chain;
  for (ContextElem e : last.context) chain.push_back(g.nonterminals().text(e));
  CHECK(chain == std::vector<std::string>{"S", "VP", "ADJP", "NN"});
  // Preorder: the root event comes first.
  CHECK(g.rule_string(events.front().rule) == "S -> NP VP");
}

TEST_CASE("rule-mode contexts encode the parent rule and slot") {
  Grammar g;
  const Tree t = fixture::tree(g, "(S (A a) (B b))");
  fixture::add_rules(g, t);
  const auto events = extract_events(t, g, ContextMode::Rule);
  REQUIRE(events.size() == 3);
  CHECK(events[0].context == Context{kRootRuleElement});
  const RuleId top = events[0].rule;
  CHECK(events[2].context == Context{kRootRuleElement, 1 + 2 * top + 1});
}

TEST_CASE("the expanded rule's lhs is the frontier symbol of its context") {
  Rng rng(23);
  for (int k = 0; k < 40; ++k) {
    fixture::ToyOptions opts;
    opts.unary_density = 0.3;
    opts.max_trees = 100000;
    opts.min_trees = 0;
    const auto inst = fixture::random_instance(rng, opts);
    for (int n = 0; n < 20; ++n) {
      auto t = fixture::sample_from_pcfg(inst.grammar, inst.pcfg, rng);
      if (!t) continue;
      for (ContextMode mode : {ContextMode::Nonterminal, ContextMode::Rule}) {
        const auto events = extract_events(*t, inst.grammar, mode);
        CHECK(events.size() == count_internal_nodes(*t));
        for (const Event& e : events)
          CHECK(frontier_symbol(e.context.back(), inst.grammar, mode) == inst.grammar.rule(e.rule).lhs);
      }
    }
  }
}

TEST_CASE("binarized trees give one event per internal node") {
  Grammar g;
  const Tree t = binarize_right(fixture::tree(g, "(S (A a) (B b) (C c) (D d))"), g);
  fixture::add_rules(g, t);
  CHECK(extract_events(t, g, ContextMode::Nonterminal).size() == 7);
}

TEST_CASE("unknown rules are data errors") {
  Grammar g;
  const Tree t = fixture::tree(g, "(S (A a) (B b))");
  CHECK_THROWS_AS(extract_events(t, g, ContextMode::Nonterminal), DataError);
}
