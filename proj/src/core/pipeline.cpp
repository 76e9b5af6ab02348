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

#include "hpyparse/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "hpyparse/error.hpp"
#include "hpyparse/events.hpp"
#include "hpyparse/hypergraph.hpp"
#include "hpyparse/pos.hpp"
#include "hpyparse/preprocess.hpp"
#include "hpyparse/tree_model.hpp"

namespace hpyp {

std::string TrainReport::text() const {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "sentences=" << sentences << '\n'
      << "events=" << events << '\n'
      << "rules=" << rules << '\n'
      << "nonterminals=" << nonterminals << '\n'
      << "terminals=" << terminals << '\n'
      << "restaurants=" << restaurants << '\n'
      << "max_depth=" << max_depth << '\n'
      << "log_posterior=" << log_posterior << '\n'
      << "optimizer_iterations=" << optimizer_iterations << '\n'
      << "converged=" << (converged ? "true" : "false") << '\n';
  for (std::size_t m = 0; m < params.size(); ++m)
    out << "depth" << m << "=discount:" << params[m].discount << ",concentration:" << params[m].concentration
        << '\n';
  return out.str();
}

namespace {

Tree reintern(const Tree& t, const Grammar& from, Grammar& to) {
  if (t.terminal) {
    Tree leaf = Tree::leaf(to.terminals().intern(from.terminals().text(t.label)));
    leaf.span = t.span;
    return leaf;
  }
  const SymbolId label = to.nonterminals().intern(from.nonterminals().text(t.label));
  std::vector<Tree> kids;
  kids.reserve(t.children.size());
  Tree out;
  out.label = label;
  out.span = t.span;
  // Intern the node's rule before descending so rule ids follow preorder.
  const Rule src = rule_at(t);
  Rule r;
  r.lhs = label;
  r.shape = src.shape;
  if (src.shape == RuleShape::Lexical) {
    r.rhs[0] = to.terminals().intern(from.terminals().text(src.rhs[0]));
  } else {
    for (std::size_t k = 0; k < src.arity(); ++k)
      r.rhs[k] = to.nonterminals().intern(from.nonterminals().text(src.rhs[k]));
  }
  to.add_rule(r);
  for (const Tree& c : t.children) kids.push_back(reintern(c, from, to));
  out.children = std::move(kids);
  return out;
}

}  // namespace

std::vector<Tree> preprocess_corpus(const RunConfig& cfg, std::span<const Tree> trees, Grammar& grammar) {
  if (trees.empty()) throw DataError("training corpus is empty");
  Grammar scratch = grammar;
  std::vector<Tree> work;
  work.reserve(trees.size());
  for (const Tree& t : trees) work.push_back(collapse_unary_chains(binarize_right(t, scratch), scratch));
  replace_rare_words(work, scratch, cfg.rare_threshold);
  Grammar final_grammar;
  std::vector<Tree> out;
  out.reserve(work.size());
  for (const Tree& t : work) {
    if (t.terminal || t.children.empty()) throw DataError("training tree has no internal node");
    out.push_back(reintern(t, scratch, final_grammar));
    if (final_grammar.root() == kNoSymbol) final_grammar.set_root(out.back().label);
    if (out.back().label != final_grammar.root())
      throw DataError("training tree " + std::to_string(out.size()) + " has root '" +
                      final_grammar.nonterminals().text(out.back().label) + "' but earlier trees use '" +
                      final_grammar.nonterminals().text(final_grammar.root()) + "'");
  }
  grammar = std::move(final_grammar);
  return out;
}

Model train_model_from_trees(const RunConfig& cfg, std::span<const Tree> trees, const Grammar& source,
                             TrainReport* report) {
  validate(cfg);
  Model m;
  m.settings.task = cfg.task;
  m.settings.context_mode = cfg.context_mode;
  m.settings.rare_threshold = cfg.rare_threshold;
  m.grammar = source;
  const std::vector<Tree> corpus = preprocess_corpus(cfg, trees, m.grammar);
  const Grammar& g = m.grammar;

  const std::vector<std::uint64_t> counts = count_rules(corpus, g);
  std::vector<std::uint32_t> groups(g.num_rules());
  for (RuleId r = 0; r < g.num_rules(); ++r) groups[r] = g.rule(r).lhs;
  BaseDistribution base = cfg.base == BaseVariant::MlePcfg ? BaseDistribution::from_counts(counts, groups)
                                                           : BaseDistribution::uniform(groups);
  m.trie = ContextTrie(std::move(base), cfg.context_cap);
  std::uint64_t events = 0;
  for (const Tree& t : corpus) {
    for (const Event& e : extract_events(t, g, cfg.context_mode)) {
      m.trie.insert(e);
      ++events;
    }
  }
  m.pcfg = estimate_mle(counts, g);

  std::vector<DepthParam> start(m.trie.max_depth() + 1);
  for (DepthParam& p : start) p.prior = cfg.prior;
  ParamFit fit;
  if (cfg.optimize) {
    fit = optimize_params(m.trie, start);
  } else {
    fit.params = start;
    fit.objective = log_posterior(m.trie, start);
  }
  m.trie.set_params(fit.params);

  if (report) {
    report->sentences = corpus.size();
    report->events = events;
    report->rules = g.num_rules();
    report->nonterminals = g.nonterminals().size();
    report->terminals = g.terminals().size();
    report->restaurants = m.trie.num_restaurants();
    report->max_depth = m.trie.max_depth();
    report->log_posterior = fit.objective;
    report->optimizer_iterations = fit.iterations;
    report->converged = fit.converged;
    report->params = fit.params;
  }
  return m;
}

Model train_model(const RunConfig& cfg, std::istream& corpus, TrainReport* report) {
  validate(cfg);
  Grammar source;
  std::vector<Tree> trees;
  if (cfg.task == Task::Parse) {
    for (TreebankEntry& e : read_treebank(corpus, source)) trees.push_back(std::move(e.tree));
  } else {
    for (const TaggedSentence& s : read_tagged(corpus)) trees.push_back(pos_to_tree(s.tags, s.words, source));
  }
  return train_model_from_trees(cfg, trees, source, report);
}

Decoded decode_sentence(const Model& model, const RunConfig& cfg, std::span<const SymbolId> sentence,
                        std::uint64_t index) {
  Decoded out;
  const Grammar& g = model.grammar;
  if (sentence.empty()) return out;
  if (cfg.decoder == Decoder::Cyk) {
    if (auto best = cyk_viterbi(g, model.pcfg, sentence)) out.tree = std::move(best->tree);
    return out;
  }
  const Hypergraph hg = build_hypergraph(g, sentence);
  if (hg.empty()) return out;
  const TreeModel tm(g, model.trie, model.settings.context_mode);
  if (cfg.decoder == Decoder::AStarFull || cfg.decoder == Decoder::AStarLocal) {
    const InsideChart chart = inside(g, model.pcfg, sentence, cfg.heuristic_chart);
    const AStarSearch search(tm, model.pcfg, hg, chart, sentence);
    AStarOptions opts;
    opts.heuristic = cfg.decoder == Decoder::AStarFull ? Heuristic::FullFrontier : Heuristic::LocalFrontier;
    opts.beam = cfg.beam;
    AStarResult r = search.run(opts);
    out.tree = std::move(r.tree);
    out.fallback = r.stats.fallback;
    out.astar = r.stats;
    return out;
  }
  const InsideChart chart = inside(g, model.pcfg, sentence, InsideSemiring::Sum);
  ChainOptions opts;
  opts.iterations = cfg.iterations;
  opts.burn_in = cfg.burn_in;
  SampleStats pooled;
  for (std::uint32_t c = 0; c < cfg.chains; ++c) {
    Rng rng(mix_seed(cfg.seed, index * cfg.chains + c));
    pooled.merge(mh_sample(tm, model.pcfg, chart, sentence, opts, rng).stats);
  }
  out.acceptance = pooled.acceptance_rate();
  out.tree = mbr_decode(hg, pooled, sentence);
  return out;
}

namespace {

std::string render(const Model& model, Grammar& local, const std::optional<Tree>& tree,
                   const std::vector<std::string>& words) {
  if (model.settings.task == Task::Tag) {
    if (!tree) return write_tagged(words, std::vector<std::string>(words.size(), std::string(kNoTag)));
    return write_tagged(words, tree_to_pos(*tree, local));
  }
  if (!tree) return std::string(kNoParse);
  const Tree plain = unbinarize_right(expand_unary_chains(*tree, local), local);
  return write_tree(plain, local, words);
}

struct LineResult {
  std::string text;
  bool parsed = false;
  bool fallback = false;
  double acceptance = -1.0;
  double millis = 0.0;
  std::size_t tokens = 0;
};

}  // namespace

PredictSummary predict(const Model& model, const RunConfig& cfg, std::istream& in, std::ostream& out,
                       std::ostream* log) {
  validate(cfg);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
  std::vector<LineResult> results(lines.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    Grammar local = model.grammar;
    try {
      for (std::size_t k = next++; k < lines.size() && !failed; k = next++) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<std::string> words = split_words(lines[k]);
        LineResult& r = results[k];
        r.tokens = words.size();
        const Sentence s = map_sentence(words, model.grammar);
        Decoded d;
        if (cfg.max_length == 0 || words.size() <= cfg.max_length) d = decode_sentence(model, cfg, s, k);
        if (words.empty() && model.settings.task == Task::Tag) {
          r.parsed = true;
        } else {
          r.text = render(model, local, d.tree, words);
          r.parsed = d.tree.has_value();
        }
        r.fallback = d.fallback;
        r.acceptance = d.acceptance;
        r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      failed = true;
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min<std::size_t>(cfg.threads, lines.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  PredictSummary summary;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const LineResult& r = results[k];
    out << r.text << '\n';
    ++summary.sentences;
    summary.failures += !r.parsed;
    summary.fallbacks += r.fallback;
    if (log) {
      *log << "sentence=" << (k + 1) << " tokens=" << r.tokens << " status=" << (r.parsed ? "ok" : "no-parse")
           << " decoder=" << to_string(cfg.decoder) << " time_ms=" << std::fixed << std::setprecision(3)
           << r.millis << std::defaultfloat;
      if (r.acceptance >= 0) *log << " acceptance=" << std::setprecision(6) << r.acceptance;
      if (r.fallback) *log << " fallback=cyk";
      *log << '\n';
    }
  }
  return summary;
}

namespace {

std::vector<std::optional<Tree>> read_predicted_trees(std::istream& in, Grammar& g) {
  std::vector<std::optional<Tree>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto words = split_words(line);
    if (words.empty()) continue;
    std::string compact;
    for (const auto& w : words) compact += w;
    if (compact == kNoParse) {
      out.emplace_back(std::nullopt);
      continue;
    }
    Tree t = parse_tree(line, g, line_no);
    out.emplace_back(std::move(t));
  }
  return out;
}

void row(std::ostream& out, std::string_view name, const std::string& value) {
  out << std::left << std::setw(20) << name << value << '\n';
}

std::string fixed2(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

}  // namespace

void evaluate(const RunConfig& cfg, std::istream& gold, std::istream& pred, std::ostream& out) {
  if (cfg.task == Task::Parse) {
    Grammar g;
    std::vector<Tree> gold_trees;
    for (TreebankEntry& e : read_treebank(gold, g)) gold_trees.push_back(std::move(e.tree));
    const auto pred_trees = read_predicted_trees(pred, g);
    const ParseEvaluation ev = evaluate_parses(gold_trees, pred_trees, g, cfg.max_length);
    row(out, "metric", "value");
    row(out, "sentences", std::to_string(ev.sentences));
    row(out, "skipped", std::to_string(ev.skipped));
    row(out, "filtered", std::to_string(ev.filtered));
    row(out, "no_parse", std::to_string(ev.missing));
    row(out, "gold_brackets", std::to_string(ev.counts.gold));
    row(out, "test_brackets", std::to_string(ev.counts.predicted));
    row(out, "matched_brackets", std::to_string(ev.counts.matched));
    row(out, "precision", fixed2(ev.counts.precision()));
    row(out, "recall", fixed2(ev.counts.recall()));
    row(out, "f1", fixed2(ev.counts.f1()));
    row(out, "exact_match", fixed2(100.0 * ev.exact_match()));
    out << std::setprecision(10);
    out << "sentences=" << ev.sentences << '\n'
        << "skipped=" << ev.skipped << '\n'
        << "filtered=" << ev.filtered << '\n'
        << "no_parse=" << ev.missing << '\n'
        << "precision=" << ev.counts.precision() << '\n'
        << "recall=" << ev.counts.recall() << '\n'
        << "f1=" << ev.counts.f1() << '\n'
        << "exact_match=" << 100.0 * ev.exact_match() << '\n';
    if (ev.skipped > 0)
      out << "warning=" << ev.skipped << " sentence(s) skipped because the yields differ\n";
    return;
  }
  std::vector<std::vector<std::string>> gold_tags;
  std::vector<std::vector<std::string>> pred_tags;
  for (TaggedSentence& s : read_tagged(gold)) gold_tags.push_back(std::move(s.tags));
  for (TaggedSentence& s : read_tagged(pred)) pred_tags.push_back(std::move(s.tags));
  const TagEvaluation ev = evaluate_tags(gold_tags, pred_tags, cfg.max_length);
  row(out, "metric", "value");
  row(out, "sentences", std::to_string(ev.sentences));
  row(out, "filtered", std::to_string(ev.filtered));
  row(out, "tokens", std::to_string(ev.tokens));
  row(out, "token_accuracy", fixed2(100.0 * ev.token_accuracy()));
  row(out, "sentence_accuracy", fixed2(100.0 * ev.sentence_accuracy()));
  out << std::setprecision(10);
  out << "sentences=" << ev.sentences << '\n'
      << "filtered=" << ev.filtered << '\n'
      << "tokens=" << ev.tokens << '\n'
      << "token_accuracy=" << 100.0 * ev.token_accuracy() << '\n'
      << "sentence_accuracy=" << 100.0 * ev.sentence_accuracy() << '\n';
}

namespace {

std::string element_text(ContextElem e, const Grammar& g, ContextMode mode) {
  if (mode == ContextMode::Nonterminal) return g.nonterminals().text(e);
  if (e == kRootRuleElement) return "<root>";
  return g.rule_string((e - 1) / 2) + "@" + std::to_string((e - 1) % 2);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void rank_frequency(std::ostream& out, const Model& m, const Restaurant& r, const std::string& context) {
  std::vector<std::pair<RuleId, TableCount>> dishes(r.dishes().begin(), r.dishes().end());
  std::sort(dishes.begin(), dishes.end(), [](const auto& a, const auto& b) {
    if (a.second.customers != b.second.customers) return a.second.customers > b.second.customers;
    return a.first < b.first;
  });
  out << "## rank_frequency context=" << context << '\n' << "rank,frequency,rule\n";
  std::size_t rank = 0;
  for (const auto& [rule, c] : dishes)
    out << ++rank << ',' << c.customers << ',' << csv_field(m.grammar.rule_string(rule)) << '\n';
}

}  // namespace

void diagnose(const Model& model, const RunConfig& cfg, std::istream& sentences, std::ostream& out) {
  if (cfg.iterations <= cfg.burn_in) throw UsageError("iters must be greater than burn-in");
  if (cfg.beam == 0) throw UsageError("beam must be at least 1");
  const Grammar& g = model.grammar;
  const ContextTrie& trie = model.trie;
  const ContextMode mode = model.settings.context_mode;
  out << std::setprecision(10);
  out << "## model\n"
      << "task=" << to_string(model.settings.task) << '\n'
      << "context_mode=" << to_string(mode) << '\n'
      << "base=" << to_string(trie.base().variant()) << '\n'
      << "rules=" << g.num_rules() << '\n'
      << "nonterminals=" << g.nonterminals().size() << '\n'
      << "terminals=" << g.terminals().size() << '\n'
      << "restaurants=" << trie.num_restaurants() << '\n'
      << "max_depth=" << trie.max_depth() << '\n'
      << "context_cap=" << trie.context_cap() << '\n';
  out << "## depth_params\n" << "depth,discount,concentration\n";
  for (std::size_t m = 0; m < trie.params().size(); ++m)
    out << m << ',' << trie.params()[m].discount << ',' << trie.params()[m].concentration << '\n';

  rank_frequency(out, model, trie.root(), "<empty>");
  for (const auto& [e, child] : trie.root().children())
    rank_frequency(out, model, *child, csv_field(element_text(e, g, mode)));

  const TreeModel tm(g, trie, mode);
  Grammar local = g;
  std::size_t index = 0;
  for (std::string line; std::getline(sentences, line);) {
    const auto words = split_words(line);
    if (words.empty()) continue;
    ++index;
    out << "## sentence " << index << '\n' << "tokens=" << words.size() << '\n';
    const Sentence s = map_sentence(words, g);
    const Hypergraph hg = build_hypergraph(g, s);
    if (hg.empty()) {
      out << "status=no-parse\n";
      continue;
    }
    out << "status=ok\n"
        << "hypergraph_nodes=" << hg.nodes().size() << '\n'
        << "hypergraph_edges=" << hg.edges().size() << '\n'
        << "trees=" << count_trees(hg) << '\n';
    const InsideChart chart = inside(g, model.pcfg, s, cfg.heuristic_chart);
    const AStarSearch search(tm, model.pcfg, hg, chart, s);
    out << "## astar sentence=" << index << '\n' << "heuristic,pops,pushes,evictions,max_queue,fallback,log_score\n";
    for (Heuristic h : {Heuristic::FullFrontier, Heuristic::LocalFrontier}) {
      const AStarResult r = search.run({h, static_cast<std::size_t>(cfg.beam)});
      out << (h == Heuristic::FullFrontier ? "full" : "local") << ',' << r.stats.pops << ',' << r.stats.pushes << ','
          << r.stats.evictions << ',' << r.stats.max_queue << ',' << (r.stats.fallback ? 1 : 0) << ','
          << r.log_score << '\n';
    }
    const InsideChart sum_chart = inside(g, model.pcfg, s, InsideSemiring::Sum);
    Rng rng(mix_seed(cfg.seed, (index - 1) * cfg.chains));
    ChainOptions opts;
    opts.iterations = cfg.iterations;
    opts.burn_in = cfg.burn_in;
    opts.keep_samples = true;
    const ChainResult chain = mh_sample(tm, model.pcfg, sum_chart, s, opts, rng);
    out << "## acceptance_trace sentence=" << index << '\n' << "step,acceptance_rate\n";
    for (std::size_t k = 0; k < chain.stats.acceptance_trace.size(); ++k)
      out << (k + 1) << ',' << chain.stats.acceptance_trace[k] << '\n';
    const Tree mbr = mbr_decode(hg, chain.stats, s);
    const auto frequent = most_frequent_sample(chain.samples);
    out << "## decodes sentence=" << index << '\n'
        << "acceptance=" << chain.stats.acceptance_rate() << '\n'
        << "mbr=" << render(model, local, mbr, words) << '\n'
        << "mbr_span_score=" << span_count_score(mbr, chain.stats) << '\n';
    if (frequent)
      out << "most_frequent=" << render(model, local, *frequent, words) << '\n'
          << "most_frequent_span_score=" << span_count_score(*frequent, chain.stats) << '\n';
  }
}

}  // namespace hpyp
