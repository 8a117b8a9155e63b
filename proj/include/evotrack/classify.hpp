/*
 * Copyright (c) 2026 The evotrack Authors.
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

#include <array>
#include <map>
#include <string_view>

#include "evotrack/model.hpp"

namespace evotrack {

inline constexpr std::array<std::string_view, 5> kFrameworkPrefixes{
    "java.", "javax.", "sun.", "com.sun.", "jdk."};

// User rules first (first match wins), then the platform prefixes, then the
// rule set's default.
inline Category categorize(const MethodSig& sig, const ClassificationRules& rules) {
  const auto owner = sig.class_part();
  for (const auto& rule : rules.rules) {
    if (owner.starts_with(rule.prefix)) return rule.category;
  }
  for (auto prefix : kFrameworkPrefixes) {
    if (owner.starts_with(prefix)) return Category::Framework;
  }
  return rules.default_category;
}

struct CategorizedCallGraph {
  CallGraph graph;
  std::map<MethodSig, Category> category_of;

  Category category(const MethodSig& sig) const { return category_of.at(sig); }
};

inline CategorizedCallGraph annotate_graph(CallGraph graph, const ClassificationRules& rules) {
  CategorizedCallGraph out;
  for (const auto& rec : graph.methods()) {
    out.category_of.emplace(rec.sig, categorize(rec.sig, rules));
  }
  out.graph = std::move(graph);
  return out;
}

}  // namespace evotrack
