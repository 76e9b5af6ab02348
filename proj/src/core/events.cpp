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

#include "hpyparse/events.hpp"

#include "hpyparse/error.hpp"

namespace hpyp {

ContextElem root_element(SymbolId root_label, ContextMode mode) {
  return mode == ContextMode::Nonterminal ? root_label : kRootRuleElement;
}

ContextElem child_element(ContextMode mode, SymbolId child_label, RuleId parent_rule,
                          std::size_t slot) {
  if (mode == ContextMode::Nonterminal) return child_label;
  return 1 + 2 * parent_rule + static_cast<ContextElem>(slot);
}

SymbolId frontier_symbol(ContextElem last, const Grammar& grammar, ContextMode mode) {
  if (mode == ContextMode::Nonterminal) return last;
  if (last == kRootRuleElement) return grammar.root();
  const RuleId parent = (last - 1) / 2;
  return grammar.rule(parent).rhs[(last - 1) % 2];
}

namespace {

void walk(const Tree& node, const Grammar& grammar, ContextMode mode, Context& context,
          std::vector<Event>& out) {
  const Rule rule = rule_at(node);
  const auto id = grammar.find_rule(rule);
  if (!id) throw DataError("tree uses a rule outside the grammar");
  out.push_back({context, *id});
  if (rule.shape == RuleShape::Lexical) return;
  for (std::size_t slot = 0; slot < node.children.size(); ++slot) {
    const Tree& child = node.children[slot];
    context.push_back(child_element(mode, child.label, *id, slot));
    walk(child, grammar, mode, context, out);
    context.pop_back();
  }
}

}  // namespace

std::vector<Event> extract_events(const Tree& tree, const Grammar& grammar, ContextMode mode) {
  std::vector<Event> out;
  Context context{root_element(tree.label, mode)};
  walk(tree, grammar, mode, context, out);
  return out;
}

}  // namespace hpyp
