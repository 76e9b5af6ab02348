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

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "hpyparse/error.hpp"
#include "hpyparse/model_io.hpp"
#include "hpyparse/pipeline.hpp"
#include "hpyparse/pos.hpp"
#include "hpyparse/preprocess.hpp"

using namespace hpyp;

namespace {

std::string data(const std::string& name) {
  std::ifstream in(std::string(HPYPARSE_DATA_DIR) + "/toy/" + name);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Model train(const RunConfig& cfg, const std::string& file, TrainReport* report = nullptr) {
  std::istringstream in(data(file));
  return train_model(cfg, in, report);
}

std::string run_predict(const Model& m, const RunConfig& cfg, const std::string& input, std::string* log = nullptr) {
  std::istringstream in(input);
  std::ostringstream out, lg;
  predict(m, cfg, in, out, &lg);
  if (log) *log = lg.str();
  return out.str();
}

std::string value_of(const std::string& report, const std::string& key) {
  const auto pos = report.find("\n" + key + "=");
  REQUIRE(pos != std::string::npos);
  const auto start = pos + key.size() + 2;
  return report.substr(start, report.find('\n', start) - start);
}

std::size_t max_tree_depth(const RunConfig& cfg, const std::string& file) {
  Grammar g;
  std::istringstream in(data(file));
  std::vector<Tree> raw;
  for (auto& e : read_treebank(in, g)) raw.push_back(std::move(e.tree));
  std::size_t depth = 0;
  for (const Tree& t : preprocess_corpus(cfg, raw, g)) depth = std::max(depth, tree_depth(t));
  return depth;
}

}  // namespace

TEST_CASE("training report") {
  RunConfig cfg;
  TrainReport report;
  const Model m = train(cfg, "train.mrg", &report);
  CHECK(report.sentences == 12);
  CHECK(report.max_depth == max_tree_depth(cfg, "train.mrg"));
  CHECK(report.max_depth == m.trie.max_depth());
  CHECK(report.rules == m.grammar.num_rules());
  CHECK(report.params == m.trie.params());
  CHECK(report.params.size() == m.trie.max_depth() + 1);
  CHECK(report.restaurants == m.trie.num_restaurants());
  const std::string text = report.text();
  CHECK(text.find("sentences=12") != std::string::npos);
  CHECK(text.find("max_depth=") != std::string::npos);
}

TEST_CASE("a context cap bounds the trie depth") {
  RunConfig cfg;
  cfg.context_cap = 2;
  const Model m = train(cfg, "train.mrg");
  CHECK(m.trie.max_depth() == 2);
  CHECK(m.trie.context_cap() == 2);
}

TEST_CASE("rare-word threshold 0 keeps the vocabulary") {
  RunConfig cfg;
  cfg.rare_threshold = 0;
  const Model m = train(cfg, "train.mrg");
  Grammar g;
  std::istringstream in(data("train.mrg"));
  std::set<std::string> words;
  for (const auto& e : read_treebank(in, g))
    for (SymbolId w : e.sentence) words.insert(g.terminals().text(w));
  std::set<std::string> known;
  for (SymbolId w = 0; w < m.grammar.terminals().size(); ++w) known.insert(m.grammar.terminals().text(w));
  CHECK(known == words);
  RunConfig rare;
  const Model r = train(rare, "train.mrg");
  bool has_signature = false;
  for (SymbolId w = 0; w < r.grammar.terminals().size(); ++w)
    has_signature = has_signature || is_signature(r.grammar.terminals().text(w));
  CHECK(has_signature);
}

TEST_CASE("the cyk decoder returns the PCFG Viterbi tree") {
  RunConfig cfg;
  cfg.decoder = Decoder::Cyk;
  const Model m = train(cfg, "train.mrg");
  std::istringstream in(data("test.txt"));
  std::uint64_t k = 0;
  for (std::string line; std::getline(in, line); ++k) {
    const auto words = split_words(line);
    const Sentence s = map_sentence(words, m.grammar);
    const auto expected = cyk_viterbi(m.grammar, m.pcfg, s);
    const Decoded d = decode_sentence(m, cfg, s, k);
    REQUIRE(d.tree.has_value() == expected.has_value());
    if (expected) CHECK(*d.tree == expected->tree);
  }
}

TEST_CASE("every decoder reproduces the gold trees of the toy test set") {
  RunConfig train_cfg;
  const Model m = train(train_cfg, "train.mrg");
  for (Decoder dec : {Decoder::Cyk, Decoder::AStarFull, Decoder::AStarLocal, Decoder::Mcmc}) {
    RunConfig cfg;
    cfg.decoder = dec;
    const std::string out = run_predict(m, cfg, data("test.txt"));
    std::istringstream gold(data("test.mrg")), pred(out);
    std::ostringstream report;
    evaluate(cfg, gold, pred, report);
    CHECK(value_of("\n" + report.str(), "f1") == "100");
  }
}

TEST_CASE("predictions are deterministic across runs and thread counts") {
  RunConfig cfg;
  const Model m = train(cfg, "train.mrg");
  cfg.iterations = 300;
  cfg.burn_in = 30;
  cfg.chains = 2;
  const std::string input = data("test.txt") + data("test.txt");
  const std::string a = run_predict(m, cfg, input);
  CHECK(run_predict(m, cfg, input) == a);
  cfg.threads = 4;
  CHECK(run_predict(m, cfg, input) == a);
}

TEST_CASE("gold evaluated against itself scores perfectly") {
  RunConfig cfg;
  std::istringstream gold(data("test.mrg")), pred(data("test.mrg"));
  std::ostringstream out;
  evaluate(cfg, gold, pred, out);
  CHECK(value_of("\n" + out.str(), "f1") == "100");
  CHECK(value_of("\n" + out.str(), "exact_match") == "100");
}

TEST_CASE("the length filter skips long sentences") {
  RunConfig cfg;
  cfg.decoder = Decoder::Cyk;
  const Model m = train(cfg, "train.mrg");
  std::string long_line;
  for (int i = 0; i < 25; ++i) long_line += "the dog ";
  cfg.max_length = 40;
  std::string log;
  const std::string out = run_predict(m, cfg, "the dog saw a cat\n" + long_line + "\n", &log);
  std::istringstream lines(out);
  std::string first, second;
  std::getline(lines, first);
  std::getline(lines, second);
  CHECK(first != std::string(kNoParse));
  CHECK(second == std::string(kNoParse));
  CHECK(log.find("sentence=2 tokens=50 status=no-parse") != std::string::npos);

  std::string gold_long = "(S";
  for (int i = 0; i < 50; ++i) gold_long += " (X w)";
  gold_long += ")";
  std::istringstream gold("(S (NP (DT the) (NN dog)) (VP (VBD sat)))\n" + gold_long + "\n");
  std::istringstream pred("(S (NP (DT the) (NN dog)) (VP (VBD sat)))\n(())\n");
  std::ostringstream report;
  evaluate(cfg, gold, pred, report);
  CHECK(value_of("\n" + report.str(), "filtered") == "1");
  CHECK(value_of("\n" + report.str(), "f1") == "100");
}

TEST_CASE("unknown words without a signature give no parse") {
  RunConfig cfg;
  cfg.decoder = Decoder::AStarFull;
  cfg.rare_threshold = 0;
  const Model m = train(cfg, "train.mrg");
  std::string log;
  const std::string out = run_predict(m, cfg, "the zzzz\n", &log);
  CHECK(out == std::string(kNoParse) + "\n");
  CHECK(log.find("status=no-parse") != std::string::npos);
}

TEST_CASE("tagging end to end") {
  RunConfig cfg;
  cfg.task = Task::Tag;
  const Model m = train(cfg, "train.pos");
  CHECK(m.settings.task == Task::Tag);
  for (Decoder dec : {Decoder::Cyk, Decoder::AStarFull, Decoder::Mcmc}) {
    RunConfig pc = cfg;
    pc.decoder = dec;
    const std::string out = run_predict(m, pc, data("test_pos.txt"));
    std::istringstream gold(data("test.pos")), pred(out);
    std::ostringstream report;
    evaluate(pc, gold, pred, report);
    CHECK(value_of("\n" + report.str(), "token_accuracy") == "100");
  }
}

TEST_CASE("diagnostics") {
  RunConfig cfg;
  const Model m = train(cfg, "train.mrg");
  cfg.iterations = 120;
  cfg.burn_in = 20;
  std::istringstream in("the dog saw a cat\n");
  std::ostringstream out;
  diagnose(m, cfg, in, out);
  const std::string text = out.str();
  const auto trace = text.find("## acceptance_trace sentence=1\nstep,acceptance_rate\n");
  REQUIRE(trace != std::string::npos);
  std::istringstream rows(text.substr(trace));
  std::string line;
  std::getline(rows, line);
  std::getline(rows, line);
  int n = 0;
  while (std::getline(rows, line) && line.rfind("##", 0) != 0) ++n;
  CHECK(n == 120);

  const auto params = text.find("## depth_params\ndepth,discount,concentration\n");
  REQUIRE(params != std::string::npos);
  std::istringstream prow(text.substr(params));
  std::getline(prow, line);
  std::getline(prow, line);
  for (std::size_t k = 0; k < m.trie.params().size(); ++k) {
    std::getline(prow, line);
    const auto c1 = line.find(','), c2 = line.rfind(',');
    CHECK(std::stod(line.substr(c1 + 1, c2 - c1 - 1)) == doctest::Approx(m.trie.params()[k].discount).epsilon(1e-9));
  }

  const auto root = text.find("## rank_frequency context=<empty>\nrank,frequency,rule\n");
  REQUIRE(root != std::string::npos);
  std::istringstream rf(text.substr(root));
  std::getline(rf, line);
  std::getline(rf, line);
  std::size_t dishes = 0;
  while (std::getline(rf, line) && line.rfind("##", 0) != 0) ++dishes;
  CHECK(dishes == m.trie.root().dishes().size());
  CHECK(dishes == m.grammar.num_rules());
  CHECK(text.find("mbr=(S") != std::string::npos);
}

TEST_CASE("bad input is reported as a data error") {
  RunConfig cfg;
  std::istringstream empty("");
  CHECK_THROWS_AS(train_model(cfg, empty), DataError);
  std::istringstream broken("(S (A a)\n");
  CHECK_THROWS_AS(train_model(cfg, broken), DataError);
  std::istringstream two_roots("(S (A a))\n(T (A a))\n");
  CHECK_THROWS_AS(train_model(cfg, two_roots), DataError);
}
