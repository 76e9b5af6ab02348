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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hpyparse/grammar.hpp"
#include "hpyparse/tree.hpp"

namespace hpyp {

inline constexpr std::string_view kPosStart = "<S>";

struct TaggedSentence {
  std::vector<std::string> words;
  std::vector<std::string> tags;
};

// HMM-as-tree encoding. For tags t1..tN the root <S> spans the sentence and
// every state node t(i) (the root counts as t0) rewrites to the twin of the
// next tag plus the next state: t(i) -> t(i+1)' t(i+1). The twin emits the
// word, t' -> w. The last transition has no continuation:
// t(N-1) -> tN'.
Tree pos_to_tree(std::span<const std::string> tags, std::span<const std::string> words,
                 Grammar& grammar);
// Inverse of pos_to_tree; returns the tag sequence read off the twins.
std::vector<std::string> tree_to_pos(const Tree& tree, const Grammar& grammar);

// `word/TAG` tokens separated by whitespace, one sentence per line. The tag is
// the text after the last '/'.
std::vector<TaggedSentence> read_tagged(std::istream& in);
std::string write_tagged(std::span<const std::string> words, std::span<const std::string> tags);

}  // namespace hpyp
