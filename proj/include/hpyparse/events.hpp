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
#include <span>
#include <vector>

#include "hpyparse/grammar.hpp"
#include "hpyparse/tree.hpp"

namespace hpyp {

// What a context element stands for: the chain of ancestor nonterminals, or
// the chain of ancestor rules.
enum class ContextMode : std::uint8_t { Nonterminal = 0, Rule = 1 };

// In nonterminal mode an element is a nonterminal id. In rule mode it is
// 0 for the root, or 1 + 2 * parent_rule + child_slot, which pins down the
// expanded nonterminal as the parent rule's child in that slot.
using ContextElem = std::uint32_t;
inline constexpr ContextElem kRootRuleElement = 0;

// A context is stored root first, nearest ancestor last. Dropping the front
// element gives the smoothing parent.
using Context = std::vector<ContextElem>;

struct Event {
  Context context;
  RuleId rule = 0;
};

ContextElem root_element(SymbolId root_label, ContextMode mode);
ContextElem child_element(ContextMode mode, SymbolId child_label, RuleId parent_rule,
                          std::size_t slot);
// The nonterminal a context expands next, read off its last element.
SymbolId frontier_symbol(ContextElem last, const Grammar& grammar, ContextMode mode);

// One event per internal node in preorder. Throws DataError if the tree uses
// a rule unknown to `grammar`.
std::vector<Event> extract_events(const Tree& tree, const Grammar& grammar, ContextMode mode);

}  // namespace hpyp
