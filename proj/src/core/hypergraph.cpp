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

#include "hpyparse/hypergraph.hpp"

#include <algorithm>
#include <deque>

namespace hpyp {

class HypergraphBuilder {
 public:
  HypergraphBuilder(const Grammar& g, std::span<const SymbolId> sentence)
      : g_(g),
        s_(sentence),
        n_(sentence.size()),
        nt_(g.nonterminals().size()),
        bottom_ok_(cells(), 0),
        unary_ok_(cells(), 0),
        bottom_id_(cells(), kNoNode),
        top_id_(cells(), kNoNode),
        terminal_id_(n_, kNoNode) {}

  Hypergraph run(Hypergraph hg) {
    if (n_ == 0 || g_.root() == kNoSymbol || g_.root() >= nt_) return hg;
    derive();
    if (!top_ok(g_.root(), 0, n_)) return hg;
    hg.root_ = view(hg, g_.root(), 0, n_);
    while (!work_.empty()) {
      const std::uint32_t id = work_.front();
      work_.pop_front();
      expand(hg, id);
    }
    hg.length_ = n_;
    return hg;
  }

 private:
  std::size_t cells() const { return (n_ + 1) * (n_ + 1) * nt_; }
  std::size_t idx(SymbolId a, std::size_t i, std::size_t j) const { return (i * (n_ + 1) + j) * nt_ + a; }
  bool bottom_ok(SymbolId a, std::size_t i, std::size_t j) const { return bottom_ok_[idx(a, i, j)]; }
  bool top_ok(SymbolId a, std::size_t i, std::size_t j) const {
    return bottom_ok_[idx(a, i, j)] || unary_ok_[idx(a, i, j)];
  }

  void close_unaries(std::size_t i, std::size_t j) {
    for (RuleId r : g_.unary_rules()) {
      const Rule& rule = g_.rule(r);
      if (bottom_ok(rule.rhs[0], i, j)) unary_ok_[idx(rule.lhs, i, j)] = 1;
    }
  }

  void derive() {
    for (std::size_t i = 0; i < n_; ++i) {
      if (s_[i] != kNoSymbol)
        for (RuleId r : g_.lexical_rules_for(s_[i])) bottom_ok_[idx(g_.rule(r).lhs, i, i + 1)] = 1;
      close_unaries(i, i + 1);
    }
    for (std::size_t len = 2; len <= n_; ++len) {
      for (std::size_t i = 0; i + len <= n_; ++i) {
        const std::size_t j = i + len;
        for (RuleId r : g_.binary_rules()) {
          const Rule& rule = g_.rule(r);
          if (bottom_ok(rule.lhs, i, j)) continue;
          for (std::size_t k = i + 1; k < j; ++k) {
            if (top_ok(rule.rhs[0], i, k) && top_ok(rule.rhs[1], k, j)) {
              bottom_ok_[idx(rule.lhs, i, j)] = 1;
              break;
            }
          }
        }
        close_unaries(i, j);
      }
    }
  }

  std::uint32_t add(Hypergraph& hg, NodeKind kind, SymbolId label, std::size_t i, std::size_t j) {
    const auto id = static_cast<std::uint32_t>(hg.nodes_.size());
    hg.nodes_.push_back({kind, label, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), 0, 0});
    if (kind != NodeKind::Terminal) work_.push_back(id);
    return id;
  }

  std::uint32_t bottom(Hypergraph& hg, SymbolId a, std::size_t i, std::size_t j) {
    std::uint32_t& id = bottom_id_[idx(a, i, j)];
    if (id == kNoNode) id = add(hg, NodeKind::Bottom, a, i, j);
    return id;
  }

  // The node a parent links to for A[i,j].
  std::uint32_t view(Hypergraph& hg, SymbolId a, std::size_t i, std::size_t j) {
    if (!unary_ok_[idx(a, i, j)]) return bottom(hg, a, i, j);
    std::uint32_t& id = top_id_[idx(a, i, j)];
    if (id == kNoNode) id = add(hg, NodeKind::Top, a, i, j);
    return id;
  }

  std::uint32_t terminal(Hypergraph& hg, std::size_t i) {
    std::uint32_t& id = terminal_id_[i];
    if (id == kNoNode) id = add(hg, NodeKind::Terminal, s_[i], i, i + 1);
    return id;
  }

  void expand(Hypergraph& hg, std::uint32_t id) {
    const HgNode n = hg.nodes_[id];
    const auto first = static_cast<std::uint32_t>(hg.edges_.size());
    if (n.kind == NodeKind::Top) {
      if (bottom_ok(n.label, n.start, n.end)) {
        const std::uint32_t b = bottom(hg, n.label, n.start, n.end);
        hg.edges_.push_back({EdgeKind::Identity, 0, id, {b, kNoNode}, 1});
      }
      for (RuleId r : g_.rules_for(n.label)) {
        const Rule& rule = g_.rule(r);
        if (rule.shape != RuleShape::Unary || !bottom_ok(rule.rhs[0], n.start, n.end)) continue;
        const std::uint32_t b = bottom(hg, rule.rhs[0], n.start, n.end);
        hg.edges_.push_back({EdgeKind::Unary, r, id, {b, kNoNode}, 1});
      }
    } else {
      for (RuleId r : g_.rules_for(n.label)) {
        const Rule& rule = g_.rule(r);
        if (rule.shape != RuleShape::Binary) continue;
        for (std::size_t k = n.start + 1; k < n.end; ++k) {
          if (!top_ok(rule.rhs[0], n.start, k) || !top_ok(rule.rhs[1], k, n.end)) continue;
          const std::uint32_t left = view(hg, rule.rhs[0], n.start, k);
          const std::uint32_t right = view(hg, rule.rhs[1], k, n.end);
          hg.edges_.push_back({EdgeKind::Binary, r, id, {left, right}, 2});
        }
      }
      if (n.end == n.start + 1 && s_[n.start] != kNoSymbol) {
        for (RuleId r : g_.lexical_rules_for(s_[n.start])) {
          if (g_.rule(r).lhs != n.label) continue;
          const std::uint32_t t = terminal(hg, n.start);
          hg.edges_.push_back({EdgeKind::Lexical, r, id, {t, kNoNode}, 1});
        }
      }
    }
    hg.nodes_[id].first_edge = first;
    hg.nodes_[id].num_edges = static_cast<std::uint32_t>(hg.edges_.size()) - first;
  }

  const Grammar& g_;
  std::span<const SymbolId> s_;
  std::size_t n_, nt_;
  std::vector<std::uint8_t> bottom_ok_;
  std::vector<std::uint8_t> unary_ok_;
  std::vector<std::uint32_t> bottom_id_;
  std::vector<std::uint32_t> top_id_;
  std::vector<std::uint32_t> terminal_id_;
  std::deque<std::uint32_t> work_;
};

Hypergraph build_hypergraph(const Grammar& grammar, std::span<const SymbolId> sentence) {
  HypergraphBuilder b(grammar, sentence);
  return b.run(Hypergraph{});
}

double inside_of(const Hypergraph& hg, std::uint32_t node, const InsideChart& chart) {
  const HgNode& n = hg.node(node);
  switch (n.kind) {
    case NodeKind::Terminal:
      return 0.0;
    case NodeKind::Bottom:
      return chart.bottom(n.label, n.start, n.end);
    case NodeKind::Top:
      return chart.top(n.label, n.start, n.end);
  }
  return kNegInf;
}

namespace {

Tree build_chosen(const Hypergraph& hg, std::span<const SymbolId> sentence,
                  std::span<const std::uint32_t> chosen, std::uint32_t node) {
  const HgEdge& e = hg.edge(chosen[node]);
  if (e.kind == EdgeKind::Identity) return build_chosen(hg, sentence, chosen, e.tails[0]);
  std::vector<Tree> kids;
  if (e.kind == EdgeKind::Lexical) {
    kids.push_back(Tree::leaf(sentence[hg.node(node).start]));
  } else {
    for (std::uint32_t t = 0; t < e.num_tails; ++t)
      kids.push_back(build_chosen(hg, sentence, chosen, e.tails[t]));
  }
  return Tree::node(hg.node(node).label, std::move(kids));
}

}  // namespace

Tree hypergraph_tree(const Hypergraph& hg, std::span<const SymbolId> sentence,
                     std::span<const std::uint32_t> chosen) {
  Tree t = build_chosen(hg, sentence, chosen, hg.root());
  assign_spans(t);
  return t;
}

std::vector<std::uint32_t> bottom_up_order(const Hypergraph& hg) {
  // Tails always cover strictly smaller spans or sit one layer lower, so
  // sorting by (span length, kind) puts every tail before its head.
  std::vector<std::uint32_t> order(hg.nodes().size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const HgNode& x = hg.node(a);
    const HgNode& y = hg.node(b);
    if (x.end - x.start != y.end - y.start) return x.end - x.start < y.end - y.start;
    return x.kind < y.kind;
  });
  return order;
}

double count_trees(const Hypergraph& hg) {
  if (hg.empty()) return 0.0;
  const auto order = bottom_up_order(hg);
  std::vector<double> count(hg.nodes().size(), 0.0);
  for (std::uint32_t id : order) {
    if (hg.node(id).kind == NodeKind::Terminal) {
      count[id] = 1.0;
      continue;
    }
    double total = 0.0;
    for (const HgEdge& e : hg.incoming(id)) {
      double c = 1.0;
      for (std::uint32_t t = 0; t < e.num_tails; ++t) c *= count[e.tails[t]];
      total += c;
    }
    count[id] = total;
  }
  return count[hg.root()];
}

}  // namespace hpyp
