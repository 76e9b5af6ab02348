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
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hpyparse/hypergraph.hpp"
#include "hpyparse/pcfg.hpp"
#include "hpyparse/rng.hpp"
#include "hpyparse/tree.hpp"
#include "hpyparse/tree_model.hpp"

namespace hpyp {

struct LabelledSpan {
  SymbolId label = kNoSymbol;
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  friend auto operator<=>(const LabelledSpan&, const LabelledSpan&) = default;
};

// Every nonterminal node of the tree as (label, span); a unary parent and
// its child give two entries for the same span.
std::vector<LabelledSpan> labelled_spans(const Tree& tree);

struct SampleStats {
  std::map<LabelledSpan, std::uint64_t> span_counts;
  std::uint64_t samples = 0;
  std::uint64_t steps = 0;
  std::uint64_t accepted = 0;
  // Running acceptance rate after each step.
  std::vector<double> acceptance_trace;

  void add(const Tree& tree);
  std::uint64_t count(const LabelledSpan& s) const;
  double acceptance_rate() const { return steps == 0 ? 0.0 : static_cast<double>(accepted) / steps; }
  // Pools counts of an independent chain.
  void merge(const SampleStats& other);
};

struct ChainOptions {
  std::uint32_t iterations = 1000;
  std::uint32_t burn_in = 100;
  bool keep_samples = false;
};

struct ChainResult {
  SampleStats stats;
  // Post-burn-in states, filled when keep_samples is set.
  std::vector<Tree> samples;
};

// Independence Metropolis-Hastings: the chain starts from a proposal draw,
// then each step draws T' from the PCFG and accepts it with probability
// min(1, P(T')Q(T) / (P(T)Q(T'))). States after the first `burn_in` steps are
// counted. Throws UsageError unless iterations > burn_in and DataError when
// the sentence has no derivation.
ChainResult mh_sample(const TreeModel& model, const ProbTable& pcfg, const InsideChart& chart,
                      std::span<const SymbolId> sentence, const ChainOptions& options, Rng& rng);

// Sum of span counts over the tree's nodes.
double span_count_score(const Tree& tree, const SampleStats& stats);

// Tree in the hypergraph maximizing span_count_score. Ties go to the tree
// with fewer unsampled spans, then to the first incoming edge. Throws DataError for an empty hypergraph.
Tree mbr_decode(const Hypergraph& hg, const SampleStats& stats, std::span<const SymbolId> sentence);

// The tree sampled most often; earliest first occurrence wins ties.
std::optional<Tree> most_frequent_sample(std::span<const Tree> samples);

}  // namespace hpyp
