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

#include "hpyparse/pcfg.hpp"

#include <cmath>

#include "hpyparse/error.hpp"

namespace hpyp {

ProbTable::ProbTable(std::vector<double> probs) : probs_(std::move(probs)) {
  log_probs_.reserve(probs_.size());
  for (double p : probs_) log_probs_.push_back(p > 0 ? std::log(p) : kNegInf);
}

namespace {

void count_node(const Tree& t, const Grammar& g, std::vector<std::uint64_t>& counts) {
  if (t.terminal) return;
  const auto id = g.find_rule(rule_at(t));
  if (!id) throw DataError("tree uses a rule outside the grammar");
  ++counts[*id];
  for (const Tree& c : t.children) count_node(c, g, counts);
}

}  // namespace

std::vector<std::uint64_t> count_rules(std::span<const Tree> corpus, const Grammar& grammar) {
  std::vector<std::uint64_t> counts(grammar.num_rules(), 0);
  for (const Tree& t : corpus) count_node(t, grammar, counts);
  return counts;
}

ProbTable estimate_mle(std::span<const std::uint64_t> rule_counts, const Grammar& grammar) {
  std::vector<double> lhs_total(grammar.nonterminals().size(), 0.0);
  double total = 0.0;
  for (RuleId r = 0; r < rule_counts.size(); ++r) {
    lhs_total[grammar.rule(r).lhs] += static_cast<double>(rule_counts[r]);
    total += static_cast<double>(rule_counts[r]);
  }
  if (total == 0.0) throw DataError("cannot estimate a PCFG from an empty corpus");
  std::vector<double> probs(rule_counts.size(), 0.0);
  for (RuleId r = 0; r < rule_counts.size(); ++r) {
    const double denom = lhs_total[grammar.rule(r).lhs];
    if (denom > 0) probs[r] = static_cast<double>(rule_counts[r]) / denom;
  }
  return ProbTable(std::move(probs));
}

ProbTable estimate_mle(std::span<const Tree> corpus, const Grammar& grammar) {
  if (corpus.empty()) throw DataError("cannot estimate a PCFG from an empty corpus");
  const auto counts = count_rules(corpus, grammar);
  return estimate_mle(counts, grammar);
}

InsideChart::InsideChart(std::size_t length, std::size_t num_nonterminals)
    : length_(length),
      num_nt_(num_nonterminals),
      bottom_((length + 1) * (length + 1) * num_nonterminals, kNegInf),
      top_((length + 1) * (length + 1) * num_nonterminals, kNegInf) {}

namespace {

inline void combine(double& acc, double v, InsideSemiring s) {
  if (s == InsideSemiring::Sum)
    acc = log_add(acc, v);
  else if (v > acc)
    acc = v;
}

void apply_unaries(InsideChart& chart, const Grammar& g, const ProbTable& pcfg, std::size_t i,
                   std::size_t j, InsideSemiring s) {
  const std::size_t nt = chart.num_nonterminals();
  for (SymbolId a = 0; a < nt; ++a) chart.top(a, i, j) = chart.bottom(a, i, j);
  for (RuleId r : g.unary_rules()) {
    const Rule& rule = g.rule(r);
    const double below = chart.bottom(rule.rhs[0], i, j);
    if (below == kNegInf) continue;
    combine(chart.top(rule.lhs, i, j), pcfg.log_prob(r) + below, s);
  }
}

}  // namespace

InsideChart inside(const Grammar& grammar, const ProbTable& pcfg,
                   std::span<const SymbolId> sentence, InsideSemiring semiring) {
  const std::size_t n = sentence.size();
  InsideChart chart(n, grammar.nonterminals().size());
  for (std::size_t i = 0; i < n; ++i) {
    if (sentence[i] != kNoSymbol) {
      for (RuleId r : grammar.lexical_rules_for(sentence[i]))
        combine(chart.bottom(grammar.rule(r).lhs, i, i + 1), pcfg.log_prob(r), semiring);
    }
    apply_unaries(chart, grammar, pcfg, i, i + 1, semiring);
  }
  for (std::size_t len = 2; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len;
      for (RuleId r : grammar.binary_rules()) {
        const Rule& rule = grammar.rule(r);
        const double lp = pcfg.log_prob(r);
        if (lp == kNegInf) continue;
        for (std::size_t k = i + 1; k < j; ++k) {
          const double left = chart.top(rule.rhs[0], i, k);
          if (left == kNegInf) continue;
          const double right = chart.top(rule.rhs[1], k, j);
          if (right == kNegInf) continue;
          combine(chart.bottom(rule.lhs, i, j), lp + left + right, semiring);
        }
      }
      apply_unaries(chart, grammar, pcfg, i, j, semiring);
    }
  }
  return chart;
}

namespace {

struct Backpointer {
  RuleId rule = 0;
  std::uint32_t split = 0;
  bool set = false;
};

struct ViterbiChart {
  InsideChart scores;
  std::vector<Backpointer> bottom_bp;
  // top_bp.set == false means the top layer is the bottom derivation itself.
  std::vector<Backpointer> top_bp;
  std::size_t n, nt;

  std::size_t idx(SymbolId a, std::size_t i, std::size_t j) const { return (i * (n + 1) + j) * nt + a; }
};

Tree build_viterbi(const ViterbiChart& vc, const Grammar& g, std::span<const SymbolId> sentence,
                   SymbolId a, std::size_t i, std::size_t j, bool top);

Tree build_bottom(const ViterbiChart& vc, const Grammar& g, std::span<const SymbolId> sentence,
                  SymbolId a, std::size_t i, std::size_t j) {
  const Backpointer& bp = vc.bottom_bp[vc.idx(a, i, j)];
  const Rule& rule = g.rule(bp.rule);
  std::vector<Tree> kids;
  if (rule.shape == RuleShape::Lexical) {
    kids.push_back(Tree::leaf(sentence[i]));
  } else {
    kids.push_back(build_viterbi(vc, g, sentence, rule.rhs[0], i, bp.split, true));
    kids.push_back(build_viterbi(vc, g, sentence, rule.rhs[1], bp.split, j, true));
  }
  return Tree::node(a, std::move(kids));
}

Tree build_viterbi(const ViterbiChart& vc, const Grammar& g, std::span<const SymbolId> sentence,
                   SymbolId a, std::size_t i, std::size_t j, bool top) {
  if (top) {
    const Backpointer& bp = vc.top_bp[vc.idx(a, i, j)];
    if (bp.set) {
      std::vector<Tree> kids;
      kids.push_back(build_bottom(vc, g, sentence, g.rule(bp.rule).rhs[0], i, j));
      return Tree::node(a, std::move(kids));
    }
  }
  return build_bottom(vc, g, sentence, a, i, j);
}

void viterbi_unaries(ViterbiChart& vc, const Grammar& g, const ProbTable& pcfg, std::size_t i,
                     std::size_t j) {
  for (SymbolId a = 0; a < vc.nt; ++a) vc.scores.top(a, i, j) = vc.scores.bottom(a, i, j);
  for (RuleId r : g.unary_rules()) {
    const Rule& rule = g.rule(r);
    const double v = pcfg.log_prob(r) + vc.scores.bottom(rule.rhs[0], i, j);
    if (v == kNegInf) continue;
    double& best = vc.scores.top(rule.lhs, i, j);
    if (v > best) {
      best = v;
      vc.top_bp[vc.idx(rule.lhs, i, j)] = {r, 0, true};
    }
  }
}

}  // namespace

std::optional<ScoredTree> cyk_viterbi(const Grammar& grammar, const ProbTable& pcfg,
                                      std::span<const SymbolId> sentence) {
  const std::size_t n = sentence.size();
  if (n == 0) return std::nullopt;
  const std::size_t nt = grammar.nonterminals().size();
  ViterbiChart vc{InsideChart(n, nt), std::vector<Backpointer>((n + 1) * (n + 1) * nt),
                  std::vector<Backpointer>((n + 1) * (n + 1) * nt), n, nt};
  for (std::size_t i = 0; i < n; ++i) {
    if (sentence[i] != kNoSymbol) {
      for (RuleId r : grammar.lexical_rules_for(sentence[i])) {
        const SymbolId a = grammar.rule(r).lhs;
        const double v = pcfg.log_prob(r);
        if (v > vc.scores.bottom(a, i, i + 1)) {
          vc.scores.bottom(a, i, i + 1) = v;
          vc.bottom_bp[vc.idx(a, i, i + 1)] = {r, 0, true};
        }
      }
    }
    viterbi_unaries(vc, grammar, pcfg, i, i + 1);
  }
  for (std::size_t len = 2; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len;
      for (RuleId r : grammar.binary_rules()) {
        const Rule& rule = grammar.rule(r);
        const double lp = pcfg.log_prob(r);
        if (lp == kNegInf) continue;
        for (std::size_t k = i + 1; k < j; ++k) {
          const double v = lp + vc.scores.top(rule.rhs[0], i, k) + vc.scores.top(rule.rhs[1], k, j);
          if (v == kNegInf) continue;
          if (v > vc.scores.bottom(rule.lhs, i, j)) {
            vc.scores.bottom(rule.lhs, i, j) = v;
            vc.bottom_bp[vc.idx(rule.lhs, i, j)] = {r, static_cast<std::uint32_t>(k), true};
          }
        }
      }
      viterbi_unaries(vc, grammar, pcfg, i, j);
    }
  }
  const double best = vc.scores.top(grammar.root(), 0, n);
  if (best == kNegInf) return std::nullopt;
  Tree t = build_viterbi(vc, grammar, sentence, grammar.root(), 0, n, true);
  assign_spans(t);
  return ScoredTree{std::move(t), best};
}

namespace {

// Picks index k with probability exp(weights[k] - total).
std::size_t draw(std::span<const double> weights, double total, Rng& rng) {
  double u = rng.uniform();
  std::size_t last = weights.size();
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] == kNegInf) continue;
    last = k;
    u -= std::exp(weights[k] - total);
    if (u < 0) return k;
  }
  if (last == weights.size()) throw Error("sampler: no derivable option in a derivable cell");
  return last;
}

class TopDownSampler {
 public:
  TopDownSampler(const Grammar& g, const ProbTable& pcfg, const InsideChart& chart,
                 std::span<const SymbolId> sentence, Rng& rng)
      : g_(g), pcfg_(pcfg), chart_(chart), sentence_(sentence), rng_(rng) {}

  Tree top(SymbolId a, std::size_t i, std::size_t j) {
    weights_.clear();
    choices_.clear();
    weights_.push_back(chart_.bottom(a, i, j));
    choices_.push_back(kNoSymbol);
    for (RuleId r : g_.rules_for(a)) {
      const Rule& rule = g_.rule(r);
      if (rule.shape != RuleShape::Unary) continue;
      weights_.push_back(pcfg_.log_prob(r) + chart_.bottom(rule.rhs[0], i, j));
      choices_.push_back(r);
    }
    const RuleId pick = choices_[draw(weights_, chart_.top(a, i, j), rng_)];
    if (pick == kNoSymbol) return bottom(a, i, j);
    log_q += pcfg_.log_prob(pick);
    std::vector<Tree> kids;
    kids.push_back(bottom(g_.rule(pick).rhs[0], i, j));
    return Tree::node(a, std::move(kids));
  }

  Tree bottom(SymbolId a, std::size_t i, std::size_t j) {
    std::vector<Tree> kids;
    if (j - i == 1) {
      for (RuleId r : g_.lexical_rules_for(sentence_[i])) {
        if (g_.rule(r).lhs != a) continue;
        log_q += pcfg_.log_prob(r);
        kids.push_back(Tree::leaf(sentence_[i]));
        return Tree::node(a, std::move(kids));
      }
      throw Error("sampler: no lexical rule for a derivable cell");
    }
    struct Option {
      RuleId rule;
      std::size_t split;
    };
    std::vector<double> weights;
    std::vector<Option> options;
    for (RuleId r : g_.rules_for(a)) {
      const Rule& rule = g_.rule(r);
      if (rule.shape != RuleShape::Binary) continue;
      for (std::size_t k = i + 1; k < j; ++k) {
        weights.push_back(pcfg_.log_prob(r) + chart_.top(rule.rhs[0], i, k) +
                          chart_.top(rule.rhs[1], k, j));
        options.push_back({r, k});
      }
    }
    const Option pick = options[draw(weights, chart_.bottom(a, i, j), rng_)];
    log_q += pcfg_.log_prob(pick.rule);
    const Rule& rule = g_.rule(pick.rule);
    kids.push_back(top(rule.rhs[0], i, pick.split));
    kids.push_back(top(rule.rhs[1], pick.split, j));
    return Tree::node(a, std::move(kids));
  }

  double log_q = 0.0;

 private:
  const Grammar& g_;
  const ProbTable& pcfg_;
  const InsideChart& chart_;
  std::span<const SymbolId> sentence_;
  Rng& rng_;
  std::vector<double> weights_;
  std::vector<RuleId> choices_;
};

}  // namespace

ScoredTree sample_tree(const Grammar& grammar, const ProbTable& pcfg, const InsideChart& chart,
                       std::span<const SymbolId> sentence, Rng& rng) {
  const std::size_t n = sentence.size();
  if (n == 0 || chart.length() != n || chart.top(grammar.root(), 0, n) == kNegInf)
    throw DataError("cannot sample: sentence has no derivation");
  TopDownSampler sampler(grammar, pcfg, chart, sentence, rng);
  Tree t = sampler.top(grammar.root(), 0, n);
  assign_spans(t);
  return {std::move(t), sampler.log_q};
}

double pcfg_log_prob(const Tree& tree, const Grammar& grammar, const ProbTable& pcfg) {
  if (tree.terminal) return 0.0;
  const auto id = grammar.find_rule(rule_at(tree));
  if (!id) return kNegInf;
  double total = pcfg.log_prob(*id);
  for (const Tree& c : tree.children) total += pcfg_log_prob(c, grammar, pcfg);
  return total;
}

}  // namespace hpyp
