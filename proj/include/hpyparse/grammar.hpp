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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hpyp {

using SymbolId = std::uint32_t;
using RuleId = std::uint32_t;

inline constexpr SymbolId kNoSymbol = 0xffffffffu;

// Dense string <-> id interning for one symbol kind.
class Vocabulary {
 public:
  SymbolId intern(std::string_view text);
  std::optional<SymbolId> find(std::string_view text) const;
  const std::string& text(SymbolId id) const { return texts_.at(id); }
  std::size_t size() const { return texts_.size(); }

 private:
  std::vector<std::string> texts_;
  std::unordered_map<std::string, SymbolId> ids_;
};

// Lexical: A -> a.  Unary: A -> B.  Binary: A -> B C.
// Unary rules only ever appear one level deep: a unary child never has a
// unary rule of its own (longer chains are collapsed during preprocessing).
enum class RuleShape : std::uint8_t { Lexical = 0, Unary = 1, Binary = 2 };

struct Rule {
  SymbolId lhs = kNoSymbol;
  RuleShape shape = RuleShape::Lexical;
  std::array<SymbolId, 2> rhs{kNoSymbol, kNoSymbol};

  std::size_t arity() const { return shape == RuleShape::Binary ? 2 : 1; }

  static Rule lexical(SymbolId lhs, SymbolId word) {
    return {lhs, RuleShape::Lexical, {word, kNoSymbol}};
  }
  static Rule unary(SymbolId lhs, SymbolId child) {
    return {lhs, RuleShape::Unary, {child, kNoSymbol}};
  }
  static Rule binary(SymbolId lhs, SymbolId left, SymbolId right) {
    return {lhs, RuleShape::Binary, {left, right}};
  }

  friend bool operator==(const Rule&, const Rule&) = default;
};

// Symbol tables plus the rule inventory with dense rule ids.
class Grammar {
 public:
  Vocabulary& nonterminals() { return nonterminals_; }
  const Vocabulary& nonterminals() const { return nonterminals_; }
  Vocabulary& terminals() { return terminals_; }
  const Vocabulary& terminals() const { return terminals_; }

  SymbolId root() const { return root_; }
  void set_root(SymbolId nt) { root_ = nt; }

  // Returns the existing id when the rule is already present.
  RuleId add_rule(const Rule& rule);
  std::optional<RuleId> find_rule(const Rule& rule) const;

  const Rule& rule(RuleId id) const { return rules_.at(id); }
  std::size_t num_rules() const { return rules_.size(); }

  std::span<const RuleId> rules_for(SymbolId lhs) const;
  std::span<const RuleId> lexical_rules_for(SymbolId word) const;
  std::span<const RuleId> binary_rules() const { return binary_; }
  std::span<const RuleId> unary_rules() const { return unary_; }

  // True if the word has at least one lexical rule, i.e. it survived
  // rare-word replacement in training.
  bool is_known_word(SymbolId word) const { return !lexical_rules_for(word).empty(); }

  std::string rule_string(RuleId id) const;

 private:
  struct RuleHash {
    std::size_t operator()(const Rule& r) const noexcept;
  };

  Vocabulary nonterminals_;
  Vocabulary terminals_;
  SymbolId root_ = kNoSymbol;
  std::vector<Rule> rules_;
  std::unordered_map<Rule, RuleId, RuleHash> rule_ids_;
  std::vector<std::vector<RuleId>> by_lhs_;
  std::vector<std::vector<RuleId>> by_word_;
  std::vector<RuleId> binary_;
  std::vector<RuleId> unary_;
};

}  // namespace hpyp
