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

#include "hpyparse/astar.hpp"

#include <algorithm>
#include <set>

#include "hpyparse/error.hpp"

namespace hpyp {

double heuristic_full_frontier(const Hypothesis& hyp, const Hypergraph& hg, const InsideChart& chart) {
  double total = 0.0;
  for (const FrontierCell* c = hyp.frontier.get(); c != nullptr; c = c->next.get())
    total += inside_of(hg, c->item.node, chart);
  return total;
}

double heuristic_local_frontier(const HgEdge& edge, const Hypergraph& hg, const InsideChart& chart) {
  if (edge.kind == EdgeKind::Lexical) return 0.0;
  double total = 0.0;
  for (std::uint32_t t = 0; t < edge.num_tails; ++t) total += inside_of(hg, edge.tails[t], chart);
  return total;
}

namespace {

std::shared_ptr<const FrontierCell> push_front(FrontierItem item,
                                               std::shared_ptr<const FrontierCell> next,
                                               double inside) {
  const double rest = next ? next->inside_sum : 0.0;
  return std::make_shared<const FrontierCell>(FrontierCell{std::move(item), std::move(next), inside + rest});
}

}  // namespace

Hypothesis AStarSearch::initial() const {
  if (hg_.empty()) throw DataError("cannot search an empty hypergraph");
  const SymbolId root = hg_.node(hg_.root()).label;
  auto ctx = std::make_shared<const Context>(Context{root_element(root, model_.mode())});
  const double inside = inside_of(hg_, hg_.root(), chart_);
  Hypothesis h;
  h.frontier = push_front({hg_.root(), std::move(ctx)}, nullptr, inside);
  h.heuristic = inside;
  return h;
}

std::vector<Hypothesis> AStarSearch::expand(const Hypothesis& hyp, Heuristic heuristic) const {
  std::vector<Hypothesis> out;
  if (hyp.complete()) return out;
  const FrontierItem& head = hyp.frontier->item;
  const auto& rest = hyp.frontier->next;
  const auto& edges = hg_.edges();
  const std::uint32_t first = hg_.node(head.node).first_edge;
  for (std::uint32_t k = 0; k < hg_.node(head.node).num_edges; ++k) {
    const std::uint32_t eid = first + k;
    const HgEdge& e = edges[eid];
    double lp = 0.0;
    if (e.kind != EdgeKind::Identity) {
      lp = model_.log_expand(*head.context, e.rule);
      if (lp == kNegInf) continue;
    }
    std::shared_ptr<const FrontierCell> frontier = rest;
    if (e.kind == EdgeKind::Identity) {
      frontier = push_front({e.tails[0], head.context}, frontier, inside_of(hg_, e.tails[0], chart_));
    } else if (e.kind != EdgeKind::Lexical) {
      for (std::uint32_t t = e.num_tails; t-- > 0;) {
        const std::uint32_t child = e.tails[t];
        auto ctx = std::make_shared<Context>(*head.context);
        ctx->push_back(child_element(model_.mode(), hg_.node(child).label, e.rule, t));
        frontier = push_front({child, std::move(ctx)}, frontier, inside_of(hg_, child, chart_));
      }
    }
    Hypothesis h;
    h.log_score = hyp.log_score + lp;
    h.heuristic = heuristic == Heuristic::FullFrontier
                      ? (frontier ? frontier->inside_sum : 0.0)
                      : heuristic_local_frontier(e, hg_, chart_);
    if (h.heuristic == kNegInf) continue;
    h.frontier = std::move(frontier);
    h.choices = std::make_shared<const ChoiceCell>(ChoiceCell{eid, hyp.choices});
    h.expansions = hyp.expansions + 1;
    out.push_back(std::move(h));
  }
  return out;
}

namespace {

struct Replay {
  const Hypergraph& hg;
  std::span<const SymbolId> sentence;
  std::vector<std::uint32_t> edges;
  std::size_t pos = 0;

  Tree build(std::uint32_t node) {
    if (pos >= edges.size()) throw Error("derivation ended early");
    const HgEdge& e = hg.edge(edges[pos++]);
    if (e.head != node) throw Error("derivation does not follow the frontier");
    if (e.kind == EdgeKind::Identity) return build(e.tails[0]);
    std::vector<Tree> kids;
    if (e.kind == EdgeKind::Lexical) {
      kids.push_back(Tree::leaf(sentence[hg.node(node).start]));
    } else {
      for (std::uint32_t t = 0; t < e.num_tails; ++t) kids.push_back(build(e.tails[t]));
    }
    return Tree::node(hg.node(node).label, std::move(kids));
  }
};

}  // namespace

Tree AStarSearch::to_tree(const Hypothesis& complete) const {
  Replay r{hg_, sentence_, {}, 0};
  for (const ChoiceCell* c = complete.choices.get(); c != nullptr; c = c->next.get())
    r.edges.push_back(c->edge);
  std::reverse(r.edges.begin(), r.edges.end());
  Tree t = r.build(hg_.root());
  assign_spans(t);
  return t;
}

namespace {

struct Entry {
  double priority;
  std::uint64_t seq;
  Hypothesis hyp;
};

// Best first; among equal priorities the earlier push wins.
struct EntryOrder {
  bool operator()(const Entry& a, const Entry& b) const {
    if (a.priority != b.priority) return a.priority > b.priority;
    return a.seq < b.seq;
  }
};

}  // namespace

AStarResult AStarSearch::run(const AStarOptions& options) const {
  if (options.beam == 0) throw UsageError("beam must be positive");
  AStarResult result;
  std::set<Entry, EntryOrder> queue;
  std::uint64_t seq = 0;
  auto push = [&](Hypothesis h) {
    const double pr = h.priority();
    if (queue.size() >= options.beam) {
      auto worst = std::prev(queue.end());
      if (!(pr > worst->priority)) {
        ++result.stats.evictions;
        return;
      }
      queue.erase(worst);
      ++result.stats.evictions;
    }
    queue.insert(Entry{pr, seq++, std::move(h)});
    ++result.stats.pushes;
    result.stats.max_queue = std::max<std::uint64_t>(result.stats.max_queue, queue.size());
  };
  push(initial());
  while (!queue.empty()) {
    auto node = queue.extract(queue.begin());
    ++result.stats.pops;
    Hypothesis& h = node.value().hyp;
    if (h.complete()) {
      result.tree = to_tree(h);
      result.log_score = h.log_score;
      return result;
    }
    for (Hypothesis& next : expand(h, options.heuristic)) push(std::move(next));
  }
  result.stats.fallback = true;
  if (auto cyk = cyk_viterbi(model_.grammar(), pcfg_, sentence_)) {
    result.log_score = model_.log_prob(cyk->tree);
    result.tree = std::move(cyk->tree);
  }
  return result;
}

}  // namespace hpyp
