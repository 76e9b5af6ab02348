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

#include "hpyparse/grammar.hpp"

#include <functional>

namespace hpyp {

SymbolId Vocabulary::intern(std::string_view text) {
  if (auto it = ids_.find(std::string(text)); it != ids_.end()) return it->second;
  const auto id = static_cast<SymbolId>(texts_.size());
  texts_.emplace_back(text);
  ids_.emplace(texts_.back(), id);
  return id;
}

std::optional<SymbolId> Vocabulary::find(std::string_view text) const {
  if (auto it = ids_.find(std::string(text)); it != ids_.end()) return it->second;
  return std::nullopt;
}

std::size_t Grammar::RuleHash::operator()(const Rule& r) const noexcept {
  std::uint64_t h = r.lhs;
  h = h * 0x100000001b3ULL ^ static_cast<std::uint64_t>(r.shape);
  h = h * 0x100000001b3ULL ^ r.rhs[0];
  h = h * 0x100000001b3ULL ^ r.rhs[1];
  return std::hash<std::uint64_t>{}(h);
}

RuleId Grammar::add_rule(const Rule& rule) {
  if (auto it = rule_ids_.find(rule); it != rule_ids_.end()) return it->second;
  const auto id = static_cast<RuleId>(rules_.size());
  rules_.push_back(rule);
  rule_ids_.emplace(rule, id);
  if (by_lhs_.size() <= rule.lhs) by_lhs_.resize(rule.lhs + 1);
  by_lhs_[rule.lhs].push_back(id);
  switch (rule.shape) {
    case RuleShape::Lexical:
      if (by_word_.size() <= rule.rhs[0]) by_word_.resize(rule.rhs[0] + 1);
      by_word_[rule.rhs[0]].push_back(id);
      break;
    case RuleShape::Unary:
      unary_.push_back(id);
      break;
    case RuleShape::Binary:
      binary_.push_back(id);
      break;
  }
  return id;
}

std::optional<RuleId> Grammar::find_rule(const Rule& rule) const {
  if (auto it = rule_ids_.find(rule); it != rule_ids_.end()) return it->second;
  return std::nullopt;
}

std::span<const RuleId> Grammar::rules_for(SymbolId lhs) const {
  if (lhs >= by_lhs_.size()) return {};
  return by_lhs_[lhs];
}

std::span<const RuleId> Grammar::lexical_rules_for(SymbolId word) const {
  if (word >= by_word_.size()) return {};
  return by_word_[word];
}

std::string Grammar::rule_string(RuleId id) const {
  const Rule& r = rule(id);
  std::string out = nonterminals_.text(r.lhs) + " ->";
  switch (r.shape) {
    case RuleShape::Lexical:
      out += " " + terminals_.text(r.rhs[0]);
      break;
    case RuleShape::Unary:
      out += " " + nonterminals_.text(r.rhs[0]);
      break;
    case RuleShape::Binary:
      out += " " + nonterminals_.text(r.rhs[0]) + " " + nonterminals_.text(r.rhs[1]);
      break;
  }
  return out;
}

}  // namespace hpyp
