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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpyparse/astar.hpp"
#include "hpyparse/config.hpp"
#include "hpyparse/eval.hpp"
#include "hpyparse/mcmc.hpp"
#include "hpyparse/model_io.hpp"
#include "hpyparse/posterior.hpp"

namespace hpyp {

struct TrainReport {
  std::uint64_t sentences = 0;
  std::uint64_t events = 0;
  std::uint64_t rules = 0;
  std::uint64_t nonterminals = 0;
  std::uint64_t terminals = 0;
  std::uint64_t restaurants = 0;
  std::uint64_t max_depth = 0;
  double log_posterior = 0.0;
  int optimizer_iterations = 0;
  bool converged = false;
  std::vector<DepthParam> params;

  std::string text() const;
};

// Reads the corpus (bracketed trees, or word/TAG lines for the tag task),
// binarizes, collapses unary chains, replaces rare words, then builds the
// trie, base measure and proposal PCFG and fits the per-depth parameters.
Model train_model(const RunConfig& cfg, std::istream& corpus, TrainReport* report = nullptr);

// Same from trees already read into `source`; used when the caller built
// the corpus in memory. Trees are not modified.
Model train_model_from_trees(const RunConfig& cfg, std::span<const Tree> trees, const Grammar& source,
                             TrainReport* report = nullptr);

// Training trees after every preprocessing step, interned into `grammar`.
std::vector<Tree> preprocess_corpus(const RunConfig& cfg, std::span<const Tree> trees, Grammar& grammar);

struct Decoded {
  // In the model's grammar, still binarized and unary-collapsed.
  std::optional<Tree> tree;
  bool fallback = false;
  double acceptance = -1.0;
  AStarStats astar;
};

// Decodes one mapped sentence with the configured decoder. `index` selects
// the sentence's random streams.
Decoded decode_sentence(const Model& model, const RunConfig& cfg, std::span<const SymbolId> sentence,
                        std::uint64_t index);

struct PredictSummary {
  std::uint64_t sentences = 0;
  std::uint64_t failures = 0;
  std::uint64_t fallbacks = 0;
};

// One output line per input line, in input order. Parse: a bracketed tree
// over the raw words, or "(())" when there is no parse. Tag: word/TAG tokens,
// every tag "UNK" when there is no parse. Per-sentence diagnostics go to
// `log` when it is given.
PredictSummary predict(const Model& model, const RunConfig& cfg, std::istream& in, std::ostream& out,
                       std::ostream* log = nullptr);

inline constexpr std::string_view kNoParse = "(())";
inline constexpr std::string_view kNoTag = "UNK";

// Gold and predicted files in the task's format, aligned by line. Writes an
// aligned table followed by key=value lines.
void evaluate(const RunConfig& cfg, std::istream& gold, std::istream& pred, std::ostream& out);

// Model summary, per-depth parameters, rank/frequency tables for the empty
// context and its children, and for each input sentence the A* queue
// statistics and the MCMC acceptance trace. CSV blocks follow "## " headers.
void diagnose(const Model& model, const RunConfig& cfg, std::istream& sentences, std::ostream& out);

}  // namespace hpyp
