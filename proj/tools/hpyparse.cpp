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

// Command-line front end. Everything goes through the C API.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "hpyparse/hpyparse.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Failure {
  int code;
  std::string message;
};

void check(hp_status s) {
  if (s != HP_OK) throw Failure{static_cast<int>(s), hp_last_error()};
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitData, "cannot open '" + path + "'"};
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_output(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{kExitData, "cannot open '" + path + "' for writing"};
  out << text;
  if (!out) throw Failure{kExitData, "failed writing '" + path + "'"};
}

// Owns a malloc'd string returned by the C API.
struct OwnedText {
  char* p = nullptr;
  ~OwnedText() { hp_free(p); }
  const char* c_str() const { return p ? p : ""; }
};

struct ConfigHandle {
  hp_config* p = nullptr;
  ~ConfigHandle() { hp_config_destroy(p); }
};

struct ModelHandle {
  hp_model* p = nullptr;
  ~ModelHandle() { hp_model_destroy(p); }
};

// Settings shared by all subcommands. Only flags given on the command line
// override the config file.
class Settings {
 public:
  void add(CLI::App* app, const std::string& key, const std::string& help) {
    app->add_option("--" + key, values_[app][key], help);
  }

  void add_config(CLI::App* app) {
    app->add_option("--config", config_path_[app], "key=value config file")->check(CLI::ExistingFile);
  }

  void apply(CLI::App* app, hp_config* cfg) {
    if (const auto it = config_path_.find(app); it != config_path_.end() && !it->second.empty())
      check(hp_config_load(cfg, read_input(it->second).c_str()));
    for (const auto& [key, value] : values_[app]) {
      if (app->count("--" + key) > 0) check(hp_config_set(cfg, key.c_str(), value.c_str()));
    }
    check(hp_config_validate(cfg));
  }

 private:
  std::map<CLI::App*, std::map<std::string, std::string>> values_;
  std::map<CLI::App*, std::string> config_path_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree-structured prediction with a hierarchical Pitman-Yor vertical-context model"};
  app.set_version_flag("--version", hp_version());
  app.require_subcommand(1);
  Settings settings;

  std::string train_input, train_model, train_report;
  CLI::App* train = app.add_subcommand("train", "Train a model from a treebank or tagged corpus");
  train->add_option("--input,-i", train_input, "training corpus ('-' for stdin)")->required();
  train->add_option("--model,-m", train_model, "where to write the model")->required();
  train->add_option("--report", train_report, "write the training report here instead of stdout");
  settings.add_config(train);
  for (const auto& [k, h] : std::map<std::string, std::string>{
           {"task", "parse or tag"},
           {"context-mode", "nonterminal or rule"},
           {"base", "mle or uniform"},
           {"rare-threshold", "replace words seen at most this often"},
           {"seed", "random seed"},
           {"context-cap", "truncate contexts to this many elements (0 = unbounded)"},
           {"optimize", "fit per-depth discount and concentration (true/false)"}})
    settings.add(train, k, h);

  std::string pred_input = "-", pred_output, pred_model, pred_log;
  CLI::App* pred = app.add_subcommand("predict", "Parse or tag sentences, one per line");
  pred->add_option("--model,-m", pred_model, "trained model")->required();
  pred->add_option("--input,-i", pred_input, "sentences ('-' for stdin)");
  pred->add_option("--output,-o", pred_output, "output file (default stdout)");
  pred->add_option("--log", pred_log, "per-sentence log file (default stderr)");
  settings.add_config(pred);
  for (const auto& [k, h] : std::map<std::string, std::string>{
           {"task", "parse or tag"},
           {"decoder", "cyk, astar-full, astar-local or mcmc"},
           {"beam", "A* queue capacity"},
           {"iters", "MCMC iterations per chain"},
           {"burn-in", "MCMC burn-in iterations"},
           {"chains", "independent MCMC chains per sentence"},
           {"seed", "random seed"},
           {"max-len", "emit no-parse for sentences longer than this (0 = no limit)"},
           {"threads", "worker threads"},
           {"heuristic-chart", "sum or max inside chart for A*"}})
    settings.add(pred, k, h);

  std::string gold_path, eval_pred, eval_output;
  CLI::App* eval = app.add_subcommand("evaluate", "Score predictions against gold");
  eval->add_option("--gold,-g", gold_path, "gold file")->required();
  eval->add_option("--pred,-p", eval_pred, "predicted file")->required();
  eval->add_option("--output,-o", eval_output, "report file (default stdout)");
  settings.add_config(eval);
  settings.add(eval, "task", "parse or tag");
  settings.add(eval, "max-len", "ignore gold sentences longer than this (0 = no limit)");

  std::string diag_model, diag_input, diag_sentence, diag_output;
  CLI::App* diag = app.add_subcommand("diagnose", "Dump model and decoder diagnostics");
  diag->add_option("--model,-m", diag_model, "trained model")->required();
  auto* diag_in = diag->add_option("--input,-i", diag_input, "sentences file ('-' for stdin)");
  diag->add_option("--sentence,-s", diag_sentence, "a single sentence")->excludes(diag_in);
  diag->add_option("--output,-o", diag_output, "report file (default stdout)");
  settings.add_config(diag);
  for (const auto& [k, h] : std::map<std::string, std::string>{
           {"beam", "A* queue capacity"},
           {"iters", "MCMC iterations"},
           {"burn-in", "MCMC burn-in iterations"},
           {"seed", "random seed"},
           {"heuristic-chart", "sum or max inside chart for A*"}})
    settings.add(diag, k, h);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    ConfigHandle cfg;
    check(hp_config_create(&cfg.p));
    if (train->parsed()) {
      settings.apply(train, cfg.p);
      const std::string corpus = read_input(train_input);
      ModelHandle model;
      OwnedText report;
      check(hp_train(cfg.p, corpus.c_str(), &model.p, &report.p));
      check(hp_model_save(model.p, train_model.c_str()));
      write_output(train_report, report.c_str());
    } else if (pred->parsed()) {
      settings.apply(pred, cfg.p);
      ModelHandle model;
      check(hp_model_load(pred_model.c_str(), &model.p));
      const std::string input = read_input(pred_input);
      OwnedText output, log;
      check(hp_predict(model.p, cfg.p, input.c_str(), &output.p, &log.p));
      write_output(pred_output, output.c_str());
      if (pred_log.empty())
        std::cerr << log.c_str();
      else
        write_output(pred_log, log.c_str());
    } else if (eval->parsed()) {
      settings.apply(eval, cfg.p);
      const std::string gold = read_input(gold_path);
      const std::string predicted = read_input(eval_pred);
      OwnedText report;
      check(hp_evaluate(cfg.p, gold.c_str(), predicted.c_str(), &report.p));
      write_output(eval_output, report.c_str());
    } else if (diag->parsed()) {
      settings.apply(diag, cfg.p);
      ModelHandle model;
      check(hp_model_load(diag_model.c_str(), &model.p));
      std::string sentences = diag_sentence;
      if (!diag_input.empty()) sentences = read_input(diag_input);
      OwnedText report;
      check(hp_diagnose(model.p, cfg.p, sentences.c_str(), &report.p));
      write_output(diag_output, report.c_str());
    }
  } catch (const Failure& f) {
    std::cerr << "hpyparse: " << f.message << '\n';
    return f.code;
  }
  return 0;
}
