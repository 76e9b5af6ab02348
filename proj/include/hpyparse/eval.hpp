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
#include <string>
#include <vector>

#include "hpyparse/grammar.hpp"
#include "hpyparse/tree.hpp"

namespace hpyp {

struct Bracket {
  SymbolId label = kNoSymbol;
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  friend auto operator<=>(const Bracket&, const Bracket&) = default;
};

// Sorted multiset of brackets: every nonterminal node except preterminals,
// root included. Binarization intermediates are skipped.
std::vector<Bracket> brackets(const Tree& tree, const Grammar& grammar);

struct BracketCounts {
  std::uint64_t matched = 0;
  std::uint64_t gold = 0;
  std::uint64_t predicted = 0;

  // Percentages in [0, 100].
  double precision() const;
  double recall() const;
  double f1() const;
};

// Size of the multiset intersection.
std::uint64_t matching_brackets(std::span<const Bracket> gold, std::span<const Bracket> pred);

struct ParseEvaluation {
  BracketCounts counts;
  std::uint64_t sentences = 0;
  std::uint64_t exact = 0;
  // Pairs whose yields differ; left out of every figure.
  std::uint64_t skipped = 0;
  // Pairs dropped by the length filter.
  std::uint64_t filtered = 0;
  // Predictions that were missing (no parse); scored as zero brackets.
  std::uint64_t missing = 0;

  double exact_match() const { return sentences == 0 ? 0.0 : static_cast<double>(exact) / sentences; }
};

// Micro-averaged bracket scores. A missing prediction contributes its gold
// brackets to recall only. max_length > 0 drops gold sentences longer than
// that. Throws DataError when the lists differ in length.
ParseEvaluation evaluate_parses(std::span<const Tree> gold, std::span<const std::optional<Tree>> pred,
                                const Grammar& grammar, std::size_t max_length = 0);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

PrecisionRecall labelled_f1(std::span<const Tree> gold, std::span<const Tree> pred, const Grammar& grammar);
double exact_match(std::span<const Tree> gold, std::span<const Tree> pred, const Grammar& grammar);

struct TagEvaluation {
  std::uint64_t tokens = 0;
  std::uint64_t correct_tokens = 0;
  std::uint64_t sentences = 0;
  std::uint64_t correct_sentences = 0;
  std::uint64_t filtered = 0;

  double token_accuracy() const;
  double sentence_accuracy() const;
};

// Throws DataError when the corpora or any sentence pair differ in length.
TagEvaluation evaluate_tags(std::span<const std::vector<std::string>> gold,
                            std::span<const std::vector<std::string>> pred, std::size_t max_length = 0);

}  // namespace hpyp
