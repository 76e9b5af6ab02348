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

#include "hpyparse/tree_model.hpp"

#include <cmath>

namespace hpyp {

double TreeModel::log_expand(std::span<const ContextElem> context, RuleId rule) const {
  return std::log(trie_.query(context).prob_in_group(rule));
}

double TreeModel::log_prob(const Tree& tree) const {
  double total = 0.0;
  for (const Event& e : extract_events(tree, grammar_, mode_)) total += log_expand(e.context, e.rule);
  return total;
}

}  // namespace hpyp
