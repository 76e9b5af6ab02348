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

#include "hpyparse/config.hpp"

#include <charconv>
#include <istream>
#include <sstream>

#include "hpyparse/error.hpp"

namespace hpyp {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_uint(std::string_view key, std::string_view v) {
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw UsageError(std::string(key) + ": expected a non-negative integer, got '" + std::string(v) + "'");
  return out;
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw UsageError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw UsageError(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

[[noreturn]] void bad_choice(std::string_view key, std::string_view v, std::string_view choices) {
  throw UsageError(std::string(key) + ": '" + std::string(v) + "' is not one of " + std::string(choices));
}

}  // namespace

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  const std::string_view v = trim(value);
  if (key == "task") {
    if (v == "parse") cfg.task = Task::Parse;
    else if (v == "tag") cfg.task = Task::Tag;
    else bad_choice(key, v, "parse, tag");
  } else if (key == "decoder") {
    if (v == "cyk") cfg.decoder = Decoder::Cyk;
    else if (v == "astar-full") cfg.decoder = Decoder::AStarFull;
    else if (v == "astar-local") cfg.decoder = Decoder::AStarLocal;
    else if (v == "mcmc") cfg.decoder = Decoder::Mcmc;
    else bad_choice(key, v, "cyk, astar-full, astar-local, mcmc");
  } else if (key == "context-mode") {
    if (v == "nonterminal") cfg.context_mode = ContextMode::Nonterminal;
    else if (v == "rule") cfg.context_mode = ContextMode::Rule;
    else bad_choice(key, v, "nonterminal, rule");
  } else if (key == "base") {
    if (v == "mle") cfg.base = BaseVariant::MlePcfg;
    else if (v == "uniform") cfg.base = BaseVariant::Uniform;
    else bad_choice(key, v, "mle, uniform");
  } else if (key == "heuristic-chart") {
    if (v == "sum") cfg.heuristic_chart = InsideSemiring::Sum;
    else if (v == "max") cfg.heuristic_chart = InsideSemiring::Max;
    else bad_choice(key, v, "sum, max");
  } else if (key == "beam") {
    cfg.beam = parse_uint<std::uint64_t>(key, v);
  } else if (key == "iters") {
    cfg.iterations = parse_uint<std::uint32_t>(key, v);
  } else if (key == "burn-in") {
    cfg.burn_in = parse_uint<std::uint32_t>(key, v);
  } else if (key == "chains") {
    cfg.chains = parse_uint<std::uint32_t>(key, v);
  } else if (key == "seed") {
    cfg.seed = parse_uint<std::uint64_t>(key, v);
  } else if (key == "rare-threshold") {
    cfg.rare_threshold = parse_uint<std::uint32_t>(key, v);
  } else if (key == "max-len") {
    cfg.max_length = parse_uint<std::uint32_t>(key, v);
  } else if (key == "context-cap") {
    cfg.context_cap = parse_uint<std::uint32_t>(key, v);
  } else if (key == "threads") {
    cfg.threads = parse_uint<std::uint32_t>(key, v);
  } else if (key == "optimize") {
    cfg.optimize = parse_bool(key, v);
  } else if (key == "prior-beta-a") {
    cfg.prior.beta_a = parse_double(key, v);
  } else if (key == "prior-beta-b") {
    cfg.prior.beta_b = parse_double(key, v);
  } else if (key == "prior-gamma-shape") {
    cfg.prior.gamma_shape = parse_double(key, v);
  } else if (key == "prior-gamma-rate") {
    cfg.prior.gamma_rate = parse_double(key, v);
  } else {
    throw UsageError("unknown setting '" + std::string(key) + "'");
  }
}

void load_config(RunConfig& cfg, std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
    try {
      apply_setting(cfg, trim(s.substr(0, eq)), s.substr(eq + 1));
    } catch (const UsageError& e) {
      throw UsageError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.decoder == Decoder::Mcmc) {
    if (cfg.iterations <= cfg.burn_in) throw UsageError("iters must be greater than burn-in");
    if (cfg.chains == 0) throw UsageError("chains must be at least 1");
  }
  if ((cfg.decoder == Decoder::AStarFull || cfg.decoder == Decoder::AStarLocal) && cfg.beam == 0)
    throw UsageError("beam must be at least 1");
  if (cfg.threads == 0) throw UsageError("threads must be at least 1");
  const Hyperprior& p = cfg.prior;
  if (!(p.beta_a > 0) || !(p.beta_b > 0) || !(p.gamma_shape > 0) || !(p.gamma_rate > 0))
    throw UsageError("hyperprior parameters must be positive");
}

std::string to_string(Task t) { return t == Task::Parse ? "parse" : "tag"; }

std::string to_string(Decoder d) {
  switch (d) {
    case Decoder::Cyk:
      return "cyk";
    case Decoder::AStarFull:
      return "astar-full";
    case Decoder::AStarLocal:
      return "astar-local";
    case Decoder::Mcmc:
      return "mcmc";
  }
  return "?";
}

std::string to_string(ContextMode m) { return m == ContextMode::Nonterminal ? "nonterminal" : "rule"; }
std::string to_string(BaseVariant b) { return b == BaseVariant::MlePcfg ? "mle" : "uniform"; }

std::string describe(const RunConfig& cfg) {
  std::ostringstream out;
  out << "base=" << to_string(cfg.base) << '\n'
      << "beam=" << cfg.beam << '\n'
      << "burn-in=" << cfg.burn_in << '\n'
      << "chains=" << cfg.chains << '\n'
      << "context-cap=" << cfg.context_cap << '\n'
      << "context-mode=" << to_string(cfg.context_mode) << '\n'
      << "decoder=" << to_string(cfg.decoder) << '\n'
      << "heuristic-chart=" << (cfg.heuristic_chart == InsideSemiring::Sum ? "sum" : "max") << '\n'
      << "iters=" << cfg.iterations << '\n'
      << "max-len=" << cfg.max_length << '\n'
      << "optimize=" << (cfg.optimize ? "true" : "false") << '\n'
      << "prior-beta-a=" << cfg.prior.beta_a << '\n'
      << "prior-beta-b=" << cfg.prior.beta_b << '\n'
      << "prior-gamma-rate=" << cfg.prior.gamma_rate << '\n'
      << "prior-gamma-shape=" << cfg.prior.gamma_shape << '\n'
      << "rare-threshold=" << cfg.rare_threshold << '\n'
      << "seed=" << cfg.seed << '\n'
      << "task=" << to_string(cfg.task) << '\n'
      << "threads=" << cfg.threads << '\n';
  return out.str();
}

}  // namespace hpyp
