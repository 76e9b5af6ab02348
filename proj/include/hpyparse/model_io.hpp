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
#include <string>
#include <string_view>
#include <vector>

#include "hpyparse/config.hpp"
#include "hpyparse/grammar.hpp"
#include "hpyparse/hpyp.hpp"
#include "hpyparse/pcfg.hpp"

namespace hpyp {

// Training-time settings a trained model carries with it.
struct ModelSettings {
  Task task = Task::Parse;
  ContextMode context_mode = ContextMode::Nonterminal;
  std::uint32_t rare_threshold = 1;
  friend bool operator==(const ModelSettings&, const ModelSettings&) = default;
};

struct Model {
  ModelSettings settings;
  Grammar grammar;
  ProbTable pcfg;
  ContextTrie trie;
};

inline constexpr std::uint32_t kModelVersion = 1;

// Layout: 8-byte magic "HPYPMODL", u32 version, u64 payload length, payload,
// u32 CRC-32 of the payload. Integers little-endian, doubles as IEEE-754 bit
// patterns. The same model always serializes to the same bytes.
std::string serialize_model(const Model& model);
// Throws FormatError on bad magic, version mismatch, truncation or checksum
// failure.
Model deserialize_model(std::string_view bytes);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace hpyp
