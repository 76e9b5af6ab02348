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

#include "hpyparse/mcmc.hpp"

#include <cmath>
#include <utility>

#include "hpyparse/error.hpp"

namespace hpyp {

namespace {

void collect_spans(const Tree& t, std::vector<LabelledSpan>& out) {
  if (t.terminal) return;
  out.push_back({t.label, t.span.start, t.span.end});
  for (const Tree& c : t.children) collect_spans(c, out);
}

}  // namespace

std::vector<LabelledSpan> labelled_spans(const Tree& tree) {
  std::vector<LabelledSpan> out;
  collect_spans(tree, out);
  return out;
}

void SampleStats::add(const Tree& tree) {
  for (const LabelledSpan& s : labelled_spans(tree)) ++span_counts[s];
  ++samples;
}

std::uint64_t SampleStats::count(const LabelledSpan& s) const {
  const auto it = span_counts.find(s);
  return it == span_counts.end() ? 0 : it->second;
}

void SampleStats::merge(const SampleStats& other) {
  for (const auto& [s, c] : other.span_counts) span_counts[s] += c;
  samples += other.samples;
  steps += other.steps;
  accepted += other.accepted;
  acceptance_trace.insert(acceptance_trace.end(), other.acceptance_trace.begin(),
                          other.acceptance_trace.end());
}

ChainResult mh_sample(const TreeModel& model, const ProbTable& pcfg, const InsideChart& chart,
                      std::span<const SymbolId> sentence, const ChainOptions& options, Rng& rng) {
  if (options.iterations <= options.burn_in)
    throw UsageError("iterations must exceed burn-in");
  const Grammar& g = model.grammar();
  ScoredTree current = sample_tree(g, pcfg, chart, sentence, rng);
  double current_p = model.log_prob(current.tree);
  ChainResult result;
  result.stats.acceptance_trace.reserve(options.iterations);
  for (std::uint32_t step = 0; step < options.iterations; ++step) {
    ScoredTree proposal = sample_tree(g, pcfg, chart, sentence, rng);
    const double proposal_p = model.log_prob(proposal.tree);
    const double log_ratio = (proposal_p - current_p) + (current.log_prob - proposal.log_prob);
    const double u = rng.uniform();
    ++result.stats.steps;
    if (u < std::exp(std::min(0.0, log_ratio))) {
      current = std::move(proposal);
      current_p = proposal_p;
      ++result.stats.accepted;
    }
    result.stats.acceptance_trace.push_back(result.stats.acceptance_rate());
    if (step >= options.burn_in) {
      result.stats.add(current.tree);
      if (options.keep_samples) result.samples.push_back(current.tree);
    }
  }
  return result;
}

double span_count_score(const Tree& tree, const SampleStats& stats) {
  double total = 0.0;
  for (const LabelledSpan& s : labelled_spans(tree)) total += static_cast<double>(stats.count(s));
  return total;
}

Tree mbr_decode(const Hypergraph& hg, const SampleStats& stats, std::span<const SymbolId> sentence) {
  if (hg.empty()) throw DataError("cannot decode an empty hypergraph");
  // (span-count sum, -number of unsampled nodes), compared lexicographically.
  using Score = std::pair<double, double>;
  std::vector<Score> best(hg.nodes().size(), Score{0.0, 0.0});
  std::vector<std::uint32_t> chosen(hg.nodes().size(), kNoNode);
  for (std::uint32_t id : bottom_up_order(hg)) {
    const HgNode& n = hg.node(id);
    if (n.kind == NodeKind::Terminal) continue;
    const double own = static_cast<double>(stats.count({n.label, n.start, n.end}));
    Score top{-1.0, 0.0};
    for (std::uint32_t k = 0; k < n.num_edges; ++k) {
      const HgEdge& e = hg.edge(n.first_edge + k);
      Score v{0.0, 0.0};
      if (e.kind != EdgeKind::Identity) v = {own, own > 0.0 ? 0.0 : -1.0};
      for (std::uint32_t t = 0; t < e.num_tails; ++t) {
        v.first += best[e.tails[t]].first;
        v.second += best[e.tails[t]].second;
      }
      if (v > top) {
        top = v;
        chosen[id] = n.first_edge + k;
      }
    }
    best[id] = top;
  }
  return hypergraph_tree(hg, sentence, chosen);
}

std::optional<Tree> most_frequent_sample(std::span<const Tree> samples) {
  if (samples.empty()) return std::nullopt;
  std::vector<std::size_t> first_of;
  std::vector<std::uint64_t> counts;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::size_t k = 0;
    while (k < first_of.size() && !(samples[first_of[k]] == samples[i])) ++k;
    if (k == first_of.size()) {
      first_of.push_back(i);
      counts.push_back(0);
    }
    ++counts[k];
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < counts.size(); ++k)
    if (counts[k] > counts[best]) best = k;
  return samples[first_of[best]];
}

}  // namespace hpyp
