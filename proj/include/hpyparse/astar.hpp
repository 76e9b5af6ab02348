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
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hpyparse/events.hpp"
#include "hpyparse/hypergraph.hpp"
#include "hpyparse/pcfg.hpp"
#include "hpyparse/tree.hpp"
#include "hpyparse/tree_model.hpp"

namespace hpyp {

enum class Heuristic : std::uint8_t { FullFrontier = 0, LocalFrontier = 1 };

// Unexpanded node of a partial tree together with the context its expansion
// is conditioned on. Contexts are shared between hypotheses.
struct FrontierItem {
  std::uint32_t node = kNoNode;
  std::shared_ptr<const Context> context;
};

// Persistent singly linked frontier, leftmost item first. `inside_sum` is
// the PCFG inside log probability summed over this cell and all after it.
struct FrontierCell {
  FrontierItem item;
  std::shared_ptr<const FrontierCell> next;
  double inside_sum = 0.0;
};

// Persistent list of chosen edges, most recent first.
struct ChoiceCell {
  std::uint32_t edge = 0;
  std::shared_ptr<const ChoiceCell> next;
};

// A partial top-down derivation. Expansions always take the leftmost
// frontier node, so the chosen edges form the preorder of the final tree.
struct Hypothesis {
  std::shared_ptr<const FrontierCell> frontier;
  std::shared_ptr<const ChoiceCell> choices;
  double log_score = 0.0;
  double heuristic = 0.0;
  std::uint32_t expansions = 0;

  double priority() const { return log_score + heuristic; }
  bool complete() const { return frontier == nullptr; }
};

// Sum of inside log probabilities over every frontier node; 0 when empty.
double heuristic_full_frontier(const Hypothesis& hyp, const Hypergraph& hg, const InsideChart& chart);
// Sum of inside log probabilities over the tails of one expansion; 0 for
// lexical edges.
double heuristic_local_frontier(const HgEdge& edge, const Hypergraph& hg, const InsideChart& chart);

struct AStarOptions {
  Heuristic heuristic = Heuristic::FullFrontier;
  // Maximum queue size; pushing into a full queue evicts the worst entry.
  std::size_t beam = 10000;
};

struct AStarStats {
  std::uint64_t pops = 0;
  std::uint64_t pushes = 0;
  std::uint64_t evictions = 0;
  std::uint64_t max_queue = 0;
  bool fallback = false;
};

struct AStarResult {
  std::optional<Tree> tree;
  // HPYP log probability of the returned tree.
  double log_score = kNegInf;
  AStarStats stats;
};

class AStarSearch {
 public:
  AStarSearch(const TreeModel& model, const ProbTable& pcfg, const Hypergraph& hg,
              const InsideChart& chart, std::span<const SymbolId> sentence)
      : model_(model), pcfg_(pcfg), hg_(hg), chart_(chart), sentence_(sentence) {}

  Hypothesis initial() const;
  // Every hypothesis reachable by expanding the leftmost frontier node; ones
  // with zero probability are dropped.
  std::vector<Hypothesis> expand(const Hypothesis& hyp, Heuristic heuristic) const;
  Tree to_tree(const Hypothesis& complete) const;

  // Returns the first complete hypothesis popped. When the queue runs dry
  // the CYK tree is returned instead and stats.fallback is set.
  AStarResult run(const AStarOptions& options) const;

 private:
  const TreeModel& model_;
  const ProbTable& pcfg_;
  const Hypergraph& hg_;
  const InsideChart& chart_;
  std::span<const SymbolId> sentence_;
};

}  // namespace hpyp
