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
#include <cstdint>
#include <span>
#include <vector>

#include "hpyparse/grammar.hpp"
#include "hpyparse/pcfg.hpp"
#include "hpyparse/tree.hpp"

namespace hpyp {

// Terminal: word i as [i, i+1]. Bottom: A[i,j] built by a lexical or binary
// rule. Top: A[i,j] with at least one unary rule on top of a bottom item; its
// identity edge leads to Bottom A[i,j]. Cells without a unary option have no
// Top node and parents point at the Bottom node directly.
enum class NodeKind : std::uint8_t { Terminal = 0, Bottom = 1, Top = 2 };
enum class EdgeKind : std::uint8_t { Lexical = 0, Binary = 1, Unary = 2, Identity = 3 };

inline constexpr std::uint32_t kNoNode = 0xffffffffu;

struct HgNode {
  NodeKind kind = NodeKind::Bottom;
  SymbolId label = kNoSymbol;
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  std::uint32_t first_edge = 0;
  std::uint32_t num_edges = 0;
};

struct HgEdge {
  EdgeKind kind = EdgeKind::Lexical;
  RuleId rule = 0;  // unused for identity edges
  std::uint32_t head = kNoNode;
  std::array<std::uint32_t, 2> tails{kNoNode, kNoNode};
  std::uint32_t num_tails = 0;
};

// All items with a complete derivation of the sentence: derivable bottom-up
// and reachable from the root item. Incoming edges of a node are stored
// contiguously: binary (by rule id, then split), then lexical; for a Top
// node the identity edge first, then unary edges by rule id.
class Hypergraph {
 public:
  bool empty() const { return root_ == kNoNode; }
  std::uint32_t root() const { return root_; }
  std::size_t length() const { return length_; }
  const std::vector<HgNode>& nodes() const { return nodes_; }
  const std::vector<HgEdge>& edges() const { return edges_; }
  const HgNode& node(std::uint32_t id) const { return nodes_[id]; }
  const HgEdge& edge(std::uint32_t id) const { return edges_[id]; }
  std::span<const HgEdge> incoming(std::uint32_t id) const {
    return std::span<const HgEdge>(edges_).subspan(nodes_[id].first_edge, nodes_[id].num_edges);
  }

 private:
  friend class HypergraphBuilder;
  std::vector<HgNode> nodes_;
  std::vector<HgEdge> edges_;
  std::uint32_t root_ = kNoNode;
  std::size_t length_ = 0;
};

Hypergraph build_hypergraph(const Grammar& grammar, std::span<const SymbolId> sentence);

// PCFG inside log probability of a node: 0 for terminals.
double inside_of(const Hypergraph& hg, std::uint32_t node, const InsideChart& chart);

// Builds the tree that uses edge chosen[n] at every visited node n.
Tree hypergraph_tree(const Hypergraph& hg, std::span<const SymbolId> sentence,
                     std::span<const std::uint32_t> chosen);

// Node ids ordered so that every edge's tails precede its head.
std::vector<std::uint32_t> bottom_up_order(const Hypergraph& hg);

// Number of distinct complete trees, as a double since it grows
// exponentially with sentence length.
double count_trees(const Hypergraph& hg);

}  // namespace hpyp
