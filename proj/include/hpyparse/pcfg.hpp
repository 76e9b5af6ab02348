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
#include <optional>
#include <span>
#include <vector>

#include "hpyparse/grammar.hpp"
#include "hpyparse/logmath.hpp"
#include "hpyparse/rng.hpp"
#include "hpyparse/tree.hpp"

namespace hpyp {

// Rule id -> P(rule | lhs).
class ProbTable {
 public:
  ProbTable() = default;
  explicit ProbTable(std::vector<double> probs);

  double prob(RuleId r) const { return probs_[r]; }
  double log_prob(RuleId r) const { return log_probs_[r]; }
  std::size_t size() const { return probs_.size(); }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
  std::vector<double> log_probs_;
};

// How often each grammar rule is used in the corpus.
std::vector<std::uint64_t> count_rules(std::span<const Tree> corpus, const Grammar& grammar);
// Relative frequency per left-hand side. Throws DataError on an empty corpus.
ProbTable estimate_mle(std::span<const Tree> corpus, const Grammar& grammar);
ProbTable estimate_mle(std::span<const std::uint64_t> rule_counts, const Grammar& grammar);

enum class InsideSemiring : std::uint8_t { Sum = 0, Max = 1 };

// Log inside scores for every (nonterminal, i, j). Two layers per cell:
// bottom holds derivations whose top rule is lexical or binary, top
// additionally allows one unary rule above a bottom derivation.
class InsideChart {
 public:
  InsideChart() = default;
  InsideChart(std::size_t length, std::size_t num_nonterminals);

  std::size_t length() const { return length_; }
  std::size_t num_nonterminals() const { return num_nt_; }

  double bottom(SymbolId a, std::size_t i, std::size_t j) const { return bottom_[index(a, i, j)]; }
  double top(SymbolId a, std::size_t i, std::size_t j) const { return top_[index(a, i, j)]; }
  double& bottom(SymbolId a, std::size_t i, std::size_t j) { return bottom_[index(a, i, j)]; }
  double& top(SymbolId a, std::size_t i, std::size_t j) { return top_[index(a, i, j)]; }

 private:
  std::size_t index(SymbolId a, std::size_t i, std::size_t j) const {
    return (i * (length_ + 1) + j) * num_nt_ + a;
  }

  std::size_t length_ = 0;
  std::size_t num_nt_ = 0;
  std::vector<double> bottom_;
  std::vector<double> top_;
};

// Unknown words (kNoSymbol) have no lexical rules, so every cell over them is
// -inf and the root cell reports the sentence as underivable.
InsideChart inside(const Grammar& grammar, const ProbTable& pcfg,
                   std::span<const SymbolId> sentence, InsideSemiring semiring = InsideSemiring::Sum);

struct ScoredTree {
  Tree tree;
  double log_prob = kNegInf;
};

// Most probable tree. Ties go to the lowest rule id, then the lowest split
// point; a cell prefers no unary over a unary of equal score.
std::optional<ScoredTree> cyk_viterbi(const Grammar& grammar, const ProbTable& pcfg,
                                      std::span<const SymbolId> sentence);

// Exact top-down sample from a sum-semiring chart. log_prob is the tree's PCFG
// score, i.e. its proposal log probability plus the root inside score.
// Throws DataError when the root is underivable.
ScoredTree sample_tree(const Grammar& grammar, const ProbTable& pcfg, const InsideChart& chart,
                       std::span<const SymbolId> sentence, Rng& rng);

// Sum of rule log probabilities, recomputed from the tree.
double pcfg_log_prob(const Tree& tree, const Grammar& grammar, const ProbTable& pcfg);

}  // namespace hpyp
