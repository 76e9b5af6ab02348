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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hpyparse/grammar.hpp"
#include "hpyparse/tree.hpp"

namespace hpyp {

// Suffix marking intermediate symbols created by right-binarization; no
// sibling history is kept, so NP's intermediate symbol is "NP|<bar>".
inline constexpr std::string_view kBarSuffix = "|<bar>";
// Separator joining labels of a collapsed unary chain.
inline constexpr char kUnaryJoin = '+';

bool is_bar_symbol(std::string_view label);

// A -> c1 .. cn (n > 2) becomes A -> c1 A|<bar>, A|<bar> -> c2 A|<bar>, ...,
// A|<bar> -> c(n-1) cn. Nodes of arity <= 2 are kept.
Tree binarize_right(const Tree& tree, Grammar& grammar);
// Splices every "|<bar>" node back into its parent.
Tree unbinarize_right(const Tree& tree, const Grammar& grammar);

// Rewrites chains of two or more stacked unary nodes so that at most one
// unary production remains on top: A -> B -> C -> x becomes A -> B+C -> x.
// Preterminal-over-word is not counted as unary.
Tree collapse_unary_chains(const Tree& tree, Grammar& grammar);
Tree expand_unary_chains(const Tree& tree, Grammar& grammar);

// Unknown-word marker built from capitalization class, digit and hyphen
// flags, a suffix class and a sentence-initial flag, e.g. "UNK-INITC-init".
std::string word_signature(std::string_view word, bool sentence_initial);
bool is_signature(std::string_view word);

// Replaces every leaf whose corpus count is <= threshold with its signature.
// Signatures already present are left untouched, so the operation is
// idempotent. threshold 0 leaves the corpus unchanged.
void replace_rare_words(std::vector<Tree>& corpus, Grammar& grammar, unsigned threshold);

// Maps raw test words to terminal ids: known words map to themselves, other
// words to their signature; kNoSymbol when the signature is unseen too.
Sentence map_sentence(std::span<const std::string> words, const Grammar& grammar);

}  // namespace hpyp
