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

#include "hpyparse/eval.hpp"

#include <algorithm>

#include "hpyparse/error.hpp"
#include "hpyparse/preprocess.hpp"

namespace hpyp {

namespace {

void collect(const Tree& t, const Grammar& g, std::vector<Bracket>& out) {
  if (t.terminal || t.is_preterminal()) return;
  if (!is_bar_symbol(g.nonterminals().text(t.label))) out.push_back({t.label, t.span.start, t.span.end});
  for (const Tree& c : t.children) collect(c, g, out);
}

double percent(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::vector<Bracket> brackets(const Tree& tree, const Grammar& grammar) {
  std::vector<Bracket> out;
  collect(tree, grammar, out);
  std::sort(out.begin(), out.end());
  return out;
}

double BracketCounts::precision() const { return percent(matched, predicted); }
double BracketCounts::recall() const { return percent(matched, gold); }
double BracketCounts::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

std::uint64_t matching_brackets(std::span<const Bracket> gold, std::span<const Bracket> pred) {
  std::uint64_t matched = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < gold.size() && j < pred.size()) {
    if (gold[i] < pred[j]) {
      ++i;
    } else if (pred[j] < gold[i]) {
      ++j;
    } else {
      ++matched;
      ++i;
      ++j;
    }
  }
  return matched;
}

ParseEvaluation evaluate_parses(std::span<const Tree> gold, std::span<const std::optional<Tree>> pred,
                                const Grammar& grammar, std::size_t max_length) {
  if (gold.size() != pred.size())
    throw DataError("gold has " + std::to_string(gold.size()) + " trees but prediction has " +
                    std::to_string(pred.size()));
  ParseEvaluation ev;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const Sentence words = tree_yield(gold[k]);
    if (max_length > 0 && words.size() > max_length) {
      ++ev.filtered;
      continue;
    }
    const auto g = brackets(gold[k], grammar);
    if (!pred[k]) {
      ++ev.missing;
      ++ev.sentences;
      ev.counts.gold += g.size();
      continue;
    }
    if (tree_yield(*pred[k]) != words) {
      ++ev.skipped;
      continue;
    }
    const auto p = brackets(*pred[k], grammar);
    const std::uint64_t m = matching_brackets(g, p);
    ++ev.sentences;
    ev.counts.matched += m;
    ev.counts.gold += g.size();
    ev.counts.predicted += p.size();
    if (m == g.size() && m == p.size()) ++ev.exact;
  }
  return ev;
}

namespace {

std::vector<std::optional<Tree>> wrap(std::span<const Tree> pred) {
  return {pred.begin(), pred.end()};
}

}  // namespace

PrecisionRecall labelled_f1(std::span<const Tree> gold, std::span<const Tree> pred, const Grammar& grammar) {
  const auto ev = evaluate_parses(gold, wrap(pred), grammar);
  return {ev.counts.precision(), ev.counts.recall(), ev.counts.f1()};
}

double exact_match(std::span<const Tree> gold, std::span<const Tree> pred, const Grammar& grammar) {
  return evaluate_parses(gold, wrap(pred), grammar).exact_match();
}

double TagEvaluation::token_accuracy() const {
  return tokens == 0 ? 0.0 : static_cast<double>(correct_tokens) / tokens;
}

double TagEvaluation::sentence_accuracy() const {
  return sentences == 0 ? 0.0 : static_cast<double>(correct_sentences) / sentences;
}

TagEvaluation evaluate_tags(std::span<const std::vector<std::string>> gold,
                            std::span<const std::vector<std::string>> pred, std::size_t max_length) {
  if (gold.size() != pred.size())
    throw DataError("gold has " + std::to_string(gold.size()) + " sentences but prediction has " +
                    std::to_string(pred.size()));
  TagEvaluation ev;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    if (gold[k].size() != pred[k].size())
      throw DataError("sentence " + std::to_string(k + 1) + ": gold has " + std::to_string(gold[k].size()) +
                      " tags but prediction has " + std::to_string(pred[k].size()));
    if (max_length > 0 && gold[k].size() > max_length) {
      ++ev.filtered;
      continue;
    }
    std::uint64_t right = 0;
    for (std::size_t i = 0; i < gold[k].size(); ++i) right += gold[k][i] == pred[k][i];
    ev.tokens += gold[k].size();
    ev.correct_tokens += right;
    ++ev.sentences;
    if (right == gold[k].size()) ++ev.correct_sentences;
  }
  return ev;
}

}  // namespace hpyp
