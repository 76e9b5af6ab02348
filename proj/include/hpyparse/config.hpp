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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hpyparse/events.hpp"
#include "hpyparse/hpyp.hpp"
#include "hpyparse/pcfg.hpp"

namespace hpyp {

enum class Task : std::uint8_t { Parse = 0, Tag = 1 };
enum class Decoder : std::uint8_t { Cyk = 0, AStarFull = 1, AStarLocal = 2, Mcmc = 3 };

struct RunConfig {
  Task task = Task::Parse;
  Decoder decoder = Decoder::Mcmc;
  ContextMode context_mode = ContextMode::Nonterminal;
  BaseVariant base = BaseVariant::MlePcfg;
  std::uint64_t beam = 10000;
  std::uint32_t iterations = 1000;
  std::uint32_t burn_in = 100;
  std::uint32_t chains = 1;
  std::uint64_t seed = 1;
  std::uint32_t rare_threshold = 1;
  std::uint32_t max_length = 0;
  std::uint32_t context_cap = 0;
  std::uint32_t threads = 1;
  bool optimize = true;
  // Inside chart used by the A* heuristics.
  InsideSemiring heuristic_chart = InsideSemiring::Sum;
  Hyperprior prior;
};

// Applies one key=value setting. Keys use the long flag names without the
// leading dashes, e.g. "burn-in" or "context-mode". Throws UsageError.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

// Flat key=value lines; '#' starts a comment. Throws UsageError with the
// line number on malformed lines or unknown keys.
void load_config(RunConfig& cfg, std::istream& in);

// Cross-field checks, run before any work starts. Throws UsageError.
void validate(const RunConfig& cfg);

std::string to_string(Task t);
std::string to_string(Decoder d);
std::string to_string(ContextMode m);
std::string to_string(BaseVariant b);

// All settings as sorted key=value lines.
std::string describe(const RunConfig& cfg);

}  // namespace hpyp
